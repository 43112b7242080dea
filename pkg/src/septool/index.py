"""Poincare-Hopf index of planar fields by certified winding numbers.

The circle of radius ``r`` is traversed through exact rational points:
``P(t) = r((1-t^2), 2t)/(1+t^2)`` for ``t`` in ``[-1, 1]`` (right half)
followed by ``-P(t)`` (left half).  On each parameter interval
``[t_k, t_k + h]`` the field moves by at most ``L * 2r * h`` where ``L``
is a Lipschitz bound of the polynomial field on the closed disc, so
``|X(t_k)| > L * 2r * h`` keeps the whole arc inside a disc that misses the
origin.  Under that certificate the winding number is the signed count of
crossings of the positive horizontal ray, decided by exact sign tests.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

from .errors import NoStabilization, ParityError, ZeroOnCircle
from .fields import PlanarField
from .series import Series, as_rational, format_rational

DEFAULT_TOLERANCE = Fraction(1, 2 ** 24)
_SQRT_SCALE = 2 ** 40


@dataclass
class IndexReport:
    index: int
    method: str
    radius: Fraction | None = None
    samples: int = 0
    certified: bool = False
    min_norm_lower: Fraction | None = None
    caveat: str = ""
    radii: list = field(default_factory=list)
    points: list = field(default_factory=list, repr=False)

    def to_dict(self):
        out = {
            "index": self.index,
            "method": self.method,
            "certified": self.certified,
            "samples": self.samples,
        }
        if self.radius is not None:
            out["radius"] = format_rational(self.radius)
        if self.min_norm_lower is not None:
            out["min_norm_lower_bound"] = format_rational(self.min_norm_lower)
        if self.caveat:
            out["caveat"] = self.caveat
        if self.radii:
            out["radii"] = [{"radius": format_rational(r), "index": i} for r, i in self.radii]
        return out

    def write_csv(self, path):
        """Dump sampled circle points and field values for external plotting."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "y", "A", "B"])
            for row in self.points:
                w.writerow([f"{float(v):.15g}" for v in row])


def _sqrt_lower(q: Fraction) -> Fraction:
    s = _SQRT_SCALE
    return Fraction(isqrt(q.numerator * s * s // q.denominator), s)


def _sqrt_upper(q: Fraction) -> Fraction:
    lo = _sqrt_lower(q)
    return lo if lo * lo == q else lo + Fraction(1, _SQRT_SCALE)


def lipschitz_bound(s: Series, r: Fraction) -> Fraction:
    """Bound on ``|grad s|`` over the closed disc of radius ``r``."""
    total = Fraction(0)
    for e, c in s.items():
        d = sum(e)
        if d:
            total += abs(c) * d * r ** (d - 1)
    return total


def _circle_point(r: Fraction, t: Fraction, half: int):
    den = 1 + t * t
    x = r * (1 - t * t) / den
    y = r * 2 * t / den
    return (x, y) if half == 0 else (-x, -y)


def _crossing(u, v) -> int:
    """Signed crossing of the positive horizontal ray between nearby directions."""
    (a0, b0), (a1, b1) = u, v
    cross = a0 * b1 - b0 * a1
    if b0 < 0 <= b1 and cross > 0:
        return 1
    if b1 < 0 <= b0 and cross < 0:
        return -1
    return 0


def _wind_once(F: PlanarField, r: Fraction, tolerance: Fraction, initial: int,
               keep_points: bool):
    A, B = F.components
    LA, LB = lipschitz_bound(A, r), lipschitz_bound(B, r)
    L = _sqrt_upper(LA * LA + LB * LB)
    seq = []          # (point, value) in traversal order
    min_lb = None
    for half in (0, 1):
        grid = [Fraction(-1) + Fraction(2 * k, initial) for k in range(initial + 1)]
        vals = {}

        def value(t):
            if t not in vals:
                p = _circle_point(r, t, half)
                vals[t] = (p, (A.evaluate(p), B.evaluate(p)))
            return vals[t]

        stack = [(grid[k], grid[k + 1]) for k in reversed(range(initial))]
        accepted = []
        while stack:
            lo, hi = stack.pop()
            h = hi - lo
            _, (a, b) = value(lo)
            norm_lo = _sqrt_lower(a * a + b * b)
            lb = norm_lo - L * 2 * r * h
            if lb > 0:
                accepted.append(lo)
                min_lb = lb if min_lb is None else min(min_lb, lb)
                continue
            if h < tolerance:
                raise ZeroOnCircle(
                    f"cannot bound |X| away from 0 near t={float(lo):.6g} on radius {r}")
            mid = (lo + hi) / 2
            stack.append((mid, hi))
            stack.append((lo, mid))
        accepted.append(Fraction(1))
        for t in accepted if half == 0 else accepted[1:]:
            seq.append(value(t))
    # the traversal ends where it started: -P(1) = P(-1)
    winding = 0
    for k in range(len(seq) - 1):
        winding += _crossing(seq[k][1], seq[k + 1][1])
    pts = [(p[0], p[1], v[0], v[1]) for p, v in seq] if keep_points else []
    return winding, len(seq) - 1, min_lb, pts


def winding_index(F: PlanarField, radius=Fraction(1, 4), tolerance=DEFAULT_TOLERANCE,
                  initial: int = 16, keep_points: bool = False,
                  perturbations: int = 5) -> IndexReport:
    """Degree of ``F/|F|`` on the circle of the given radius.

    Bad radii (where the zero-freeness certificate fails) are shrunk by
    ``9/10`` up to ``perturbations`` times before giving up.
    """
    r = as_rational(radius)
    if r <= 0:
        raise ValueError("radius must be positive")
    last = None
    for _ in range(perturbations + 1):
        try:
            w, n, lb, pts = _wind_once(F, r, as_rational(tolerance), initial, keep_points)
        except ZeroOnCircle as exc:
            last = exc
            r = r * Fraction(9, 10)
            continue
        exact = F.exact
        caveat = "" if exact else ("components are truncated series: the certificate "
                                   "covers the truncation polynomial only, not the tail")
        return IndexReport(w, "winding", r, n, exact and lb is not None and lb > 0,
                           lb, caveat, points=pts)
    raise last


def radius_stabilized_index(F: PlanarField, radius=Fraction(1, 4), tolerance=DEFAULT_TOLERANCE,
                            agree: int = 3, cap: int = 10) -> IndexReport:
    """Winding index on radii ``r, r/2, r/4, ...`` until ``agree`` certified values match."""
    r = as_rational(radius)
    history = []
    for _ in range(cap):
        rep = winding_index(F, r, tolerance)
        history.append((rep.radius, rep.index, rep.certified, rep))
        tail = history[-agree:]
        if len(tail) == agree and all(c for _, _, c, _ in tail) \
                and len({i for _, i, _, _ in tail}) == 1:
            best = tail[-1][3]
            return IndexReport(best.index, "winding", best.radius,
                               sum(h[3].samples for h in history), True,
                               min(h[3].min_norm_lower for h in tail), best.caveat,
                               radii=[(h[0], h[1]) for h in history])
        r = r / 2
    raise NoStabilization(f"no {agree} consecutive certified agreeing radii within {cap} halvings")


def index_from_tangencies(i: int, e: int) -> int:
    """Degree ``1 + (i - e)/2`` from interior and exterior tangency counts."""
    if i < 0 or e < 0:
        raise ValueError("tangency counts are non-negative")
    if (i - e) % 2:
        raise ParityError("i - e must be even")
    return 1 + (i - e) // 2


def bendixson_index(e_sectors: int, h_sectors: int) -> int:
    """Bendixson: ``1 + (e - h)/2`` from elliptic and hyperbolic sector counts."""
    if e_sectors < 0 or h_sectors < 0:
        raise ValueError("sector counts are non-negative")
    if (e_sectors - h_sectors) % 2:
        raise ParityError("e - h must be even")
    return 1 + (e_sectors - h_sectors) // 2
