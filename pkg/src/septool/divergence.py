"""Divergence diagnostics for formal series and the exact Elizarov sum."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .blowup import xi_from_Ya
from .errors import InsufficientData
from .models import require_flat
from .series import Series, as_rational, format_rational, invert_unit, substitute
from .separatrix import graph_separatrix

MIN_POINTS = 12
DIVERGENT_MIN_ORDER = 0.5
CONVERGENT_MAX_ORDER = 0.25
FIT_RESIDUAL_MAX = 1.0


def _f(x: float) -> float:
    return float(f"{x:.15g}")


def log_abs(c: Fraction) -> float:
    """``log|c|`` for exact rationals of any size."""
    c = abs(c)
    return math.log(c.numerator) - math.log(c.denominator)


def _window_points(coeffs: Series, window):
    n_lo, n_hi = window if window is not None else (1, None)
    top = coeffs.trunc - 1 if coeffs.trunc is not None else coeffs.degree()
    if n_hi is None or n_hi > top:
        n_hi = top
    pts = [(n, coeffs[n]) for n in range(max(n_lo, 1), n_hi + 1) if coeffs[n] != 0]
    return pts, (n_lo, n_hi)


@dataclass
class GevreyReport:
    order: float
    log_growth: float
    intercept: float
    window: tuple
    residual: float
    verdict: str
    points: int
    condition: float
    data: list = field(default_factory=list, repr=False)

    def to_dict(self):
        return {
            "approximate": True,
            "gevrey_order": _f(self.order),
            "log_geometric_rate": _f(self.log_growth),
            "intercept": _f(self.intercept),
            "window": list(self.window),
            "fit_rms_residual": _f(self.residual),
            "condition_number": _f(self.condition),
            "points": self.points,
            "verdict": self.verdict,
        }

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "log_abs_c"])
            for n, v in self.data:
                w.writerow([n, f"{v:.15g}"])


def gevrey_fit(coeffs: Series, window=None) -> GevreyReport:
    """Least-squares fit ``log|c_n| ~ n log A + s (n log n - n) + const`` over the window.

    ``s`` near 1 is the factorial growth of Gevrey-1 divergent series;
    ``s`` near 0 is geometric growth.
    """
    pts, win = _window_points(coeffs, window)
    if len(pts) < MIN_POINTS:
        raise InsufficientData(f"{len(pts)} nonzero coefficients in window {win}, "
                               f"need {MIN_POINTS}")
    n = np.array([p[0] for p in pts], dtype=float)
    y = np.array([log_abs(p[1]) for p in pts])
    X = np.column_stack([n, n * np.log(n) - n, np.ones_like(n)])
    sol, *_ = np.linalg.lstsq(X, y, rcond=None)
    rms = float(np.sqrt(np.mean((y - X @ sol) ** 2)))
    s_hat = float(sol[1])
    if s_hat >= DIVERGENT_MIN_ORDER and rms < FIT_RESIDUAL_MAX:
        verdict = "divergent-Gevrey-like"
    elif s_hat < CONVERGENT_MAX_ORDER and _geometric_bound_holds(pts):
        verdict = "convergent-like"
    else:
        verdict = "inconclusive"
    return GevreyReport(s_hat, float(sol[0]), float(sol[2]), win, rms, verdict, len(pts),
                        float(np.linalg.cond(X)), list(zip(n.astype(int).tolist(), y.tolist())))


def _geometric_bound_holds(pts) -> bool:
    # root-test values in the upper half of the window stay within a fixed
    # factor of those in the lower half: no super-geometric growth
    roots = [math.exp(log_abs(c) / n) for n, c in pts]
    half = len(roots) // 2
    return max(roots[half:]) <= 1.5 * max(roots[:half])


@dataclass
class BorelEstimate:
    radius: float
    kind: str          # "finite" | "entire" | "zero"
    trend: float
    window: tuple

    def to_dict(self):
        radius = None if math.isinf(self.radius) else _f(self.radius)
        return {"approximate": True, "radius": radius, "kind": self.kind,
                "log_root_trend": _f(self.trend), "window": list(self.window)}


def borel_radius(coeffs: Series, window=None) -> BorelEstimate:
    """Root-test radius of the Borel transform ``sum c_n z^n / n!``.

    ``trend`` is the slope of ``log |c_n/n!|^{1/n}`` against ``log n``:
    about ``-1`` for entire transforms, ``0`` for a finite radius and
    ``+1`` when the radius collapses to zero.
    """
    pts, win = _window_points(coeffs, window)
    if len(pts) < MIN_POINTS:
        raise InsufficientData(f"need {MIN_POINTS} nonzero coefficients, got {len(pts)}")
    logs = np.array([(log_abs(c) - math.lgamma(n + 1)) / n for n, c in pts])
    ns = np.array([p[0] for p in pts], dtype=float)
    trend = float(np.polyfit(np.log(ns), logs, 1)[0])
    tail = logs[len(logs) * 2 // 3:]
    radius = float(np.exp(-np.max(tail)))
    if trend < -0.5:
        kind = "entire"
        radius = math.inf
    elif trend > 0.5:
        kind = "zero"
    else:
        kind = "finite"
    return BorelEstimate(radius, kind, trend, win)


# -- Elizarov ---------------------------------------------------------------

def elizarov_coeffs(alpha: Series, N: int) -> Series:
    """``c_k`` from ``-alpha(-z) (1 + z + z^2 + ...) = sum_{k>=2} c_k z^k``."""
    require_flat(alpha, "alpha")
    z = alpha.vars[0]
    Z = Series.var(z, (z,))
    flipped = substitute(alpha, {z: -Z})
    geo = invert_unit(1 - Z, N)
    return (-(flipped * geo)).truncate(N)


@dataclass
class ElizarovResult:
    partial_sums: dict
    limit: Fraction | None
    tail_bound: Fraction
    verdict: str       # "nonzero" | "zero" | "inconclusive"

    @property
    def nonzero(self) -> bool:
        return self.verdict == "nonzero"

    @property
    def last(self) -> Fraction:
        return self.partial_sums[max(self.partial_sums)]

    def to_dict(self):
        return {
            "partial_sums": {str(k): format_rational(v) for k, v in sorted(self.partial_sums.items())},
            "limit": None if self.limit is None else format_rational(self.limit),
            "tail_bound": format_rational(self.tail_bound),
            "verdict": self.verdict,
            "factor_u": "-1",
        }


def _weight(k: int) -> Fraction:
    # k / Gamma(k+2) with Gamma(k+2) = (k+1)!
    return Fraction(k, math.factorial(k + 1))


def _tail_bound(c: Series, M: int) -> Fraction:
    nz = [abs(c[k]) for k in range(2, M + 1) if c[k] != 0]
    if not nz:
        return Fraction(0)
    big = max(nz)
    ratios = [abs(c[k + 1] / c[k]) for k in range(2, M) if c[k] != 0 and c[k + 1] != 0]
    g = max([Fraction(1)] + ratios[-5:])
    total = Fraction(0)
    j = 1
    term = big * g * _weight(M + 1)
    while True:
        total += term
        nxt = term * g * _weight(M + j + 1) / _weight(M + j)
        if nxt <= term / 2:
            return total + 2 * nxt
        term = nxt
        j += 1


def elizarov_derivative(alpha: Series, N: int) -> ElizarovResult:
    """Exact partial sums ``S_M = -sum_{k=2}^{M} c_k k/(k+1)!`` for ``2 <= M < N``.

    For an exact polynomial ``alpha`` the coefficients ``c_k`` are constant
    (equal to ``-alpha(-1)``) from ``k = deg(alpha)`` on, and the tail
    telescopes through ``k/(k+1)! = 1/k! - 1/(k+1)!``, which gives the limit
    exactly.
    """
    c = elizarov_coeffs(alpha, N)
    top = N - 1
    sums = {}
    acc = Fraction(0)
    for k in range(2, top + 1):
        acc -= c[k] * _weight(k)
        sums[k] = acc
    limit = None
    if alpha.is_exact and top >= max(alpha.degree(), 2):
        C = -alpha.evaluate([-1])
        limit = acc - C / math.factorial(top + 1)
    tail = _tail_bound(c, top)
    if limit is not None:
        verdict = "nonzero" if limit != 0 else "zero"
        tail = Fraction(0) if limit == acc else abs(limit - acc)
    elif c.is_zero():
        verdict = "zero"
    elif abs(acc) > tail and abs(acc - sums.get(top - 1, acc)) <= tail + abs(acc) / 2:
        verdict = "nonzero"
    else:
        verdict = "inconclusive"
    return ElizarovResult(sums, limit, tail, verdict)


# -- cross check -------------------------------------------------------------

@dataclass
class CrossCheck:
    alpha: Series
    delta: Fraction
    separatrix: Series
    gevrey: GevreyReport | None
    gevrey_verdict: str
    elizarov: ElizarovResult
    agreement: bool
    note: str = ""

    def to_dict(self):
        from .separatrix import _series_dict
        return {
            "delta": format_rational(self.delta),
            "weak_separatrix": _series_dict(self.separatrix),
            "gevrey": None if self.gevrey is None else self.gevrey.to_dict(),
            "gevrey_verdict": self.gevrey_verdict,
            "elizarov": self.elizarov.to_dict(),
            "agreement": self.agreement,
            "note": self.note,
        }


def divergence_cross_check(alpha: Series, delta=Fraction(1, 10), N: int = 40,
                           window=None) -> CrossCheck:
    """Weak separatrix growth of ``xi_{delta*alpha}`` against the Elizarov predictor."""
    require_flat(alpha, "alpha")
    delta = as_rational(delta)
    if delta < 0:
        raise ValueError("delta must be >= 0")
    scaled = alpha.scale(delta)
    xi = xi_from_Ya(scaled, N)
    s = graph_separatrix(xi, N)
    eliz = elizarov_derivative(scaled, N)
    note = ""
    rep = None
    if s.is_zero():
        verdict = "convergent-like"
        note = "weak separatrix vanishes identically (w = 0 is invariant)"
    else:
        try:
            rep = gevrey_fit(s, window or (10, N - 1))
            verdict = rep.verdict
        except InsufficientData as exc:
            verdict = "inconclusive"
            note = str(exc)
    agree = (verdict == "divergent-Gevrey-like" and eliz.verdict == "nonzero") or \
            (verdict == "convergent-like" and eliz.verdict == "zero")
    return CrossCheck(alpha, delta, s, rep, verdict, eliz, agree, note)
