"""Formal separatrices: graph solutions at final points and blow-down to the root."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .blowup import ReductionNode, seidenberg_reduce
from .errors import (DegenerateCurve, NotDivisible, NotPrepared, ResonanceError,
                     VariableMismatch)
from .fields import PlanarField, SingularityClass, Tag, classify_singularity
from .models import X_a, require_flat
from .series import (Series, derive, divide_exact, format_rational, format_series,
                     mul, substitute)


def _eigen_slopes(cls: SingularityClass):
    """``(eigenvalue, slope)`` pairs with rational eigenvectors; slope None = vertical."""
    if cls.eigenvalues is None:
        return []
    out = []
    lams = list(dict.fromkeys(cls.eigenvalues))
    for lam in lams:
        v1, v2 = cls.linear.eigenvector(lam)
        out.append((lam, None if v1 == 0 else v2 / v1))
    return out


def _pick_slope(cls: SingularityClass, slope):
    pairs = [(lam, s) for lam, s in _eigen_slopes(cls) if s is not None]
    if slope is not None:
        slope = Fraction(slope)
        for lam, s in pairs:
            if s == slope:
                return lam, s
        raise NotPrepared(f"slope {slope} is not an eigendirection")
    if not pairs:
        raise NotPrepared("no non-vertical rational eigendirection over this axis")
    if cls.tag is Tag.SADDLE_NODE:
        weak = [p for p in pairs if p[0] == 0]
        if weak:
            return weak[0]
    if len(pairs) == 1:
        return pairs[0]
    flat = [p for p in pairs if p[1] == 0]
    if flat:
        return flat[0]
    raise NotPrepared("two eigendirections available; pass slope= to choose")


def graph_separatrix(F: PlanarField, N: int, axis: str | None = None, slope=None) -> Series:
    """Formal invariant graph ``y = s(x)`` (or ``x = s(y)`` with ``axis`` the second variable).

    The tangent slope is an eigendirection of the linear part (by default the
    weak direction of a saddle-node, or the only / horizontal one).  Each
    coefficient ``s_n`` (n >= 2) solves ``(mu - n*lam) s_n = -r_n`` where
    ``lam`` belongs to the chosen direction and ``mu`` to the other one.
    """
    x, y = F.vars
    if axis is not None and axis not in F.vars:
        raise VariableMismatch(f"axis {axis!r} not among {F.vars}")
    if axis == y:
        s = graph_separatrix(F.swapped(), N, None, slope)
        return s.rename({x: y})
    cls = classify_singularity(F)
    if cls.tag not in (Tag.SIMPLE, Tag.SADDLE_NODE):
        raise NotPrepared(f"graph separatrices need a simple or saddle-node point, got {cls.tag.value}")
    lam, s1 = _pick_slope(cls, slope)
    mu = cls.linear.trace - lam

    tA = F.A.trunc if F.A.trunc is not None else N
    tB = F.B.trunc if F.B.trunc is not None else N
    T = min(N, tA, tB)
    A_terms = list(F.A.items())
    B_terms = list(F.B.items())
    jmax = max((e[1] for e, _ in A_terms + B_terms), default=0)

    s = [Fraction(0)] * T
    if T > 1:
        s[1] = s1
    # pw[j][n] = coefficient of x^n in s(x)^j, valid for indices already fixed
    pw = [[Fraction(0)] * T for _ in range(jmax + 1)]
    pw[0][0] = Fraction(1)

    def fill_power_column(n):
        for j in range(2, jmax + 1):
            if j > n:
                break
            acc = Fraction(0)
            row = pw[j - 1]
            for k in range(1, n - j + 2):
                if s[k]:
                    acc += s[k] * row[n - k]
            pw[j][n] = acc

    def comp_coeff(terms, n):
        acc = Fraction(0)
        for (i, j), c in terms:
            if i <= n:
                v = pw[j][n - i]
                if v:
                    acc += c * v
        return acc

    a_coef = [Fraction(0)] * T   # coefficients of A(x, s(x))
    if T > 1:
        pw[1][1] = s1
        fill_power_column(1)
        a_coef[1] = comp_coeff(A_terms, 1)
    for n in range(2, T):
        fill_power_column(n)                  # with s_n = 0
        a_coef[n] = comp_coeff(A_terms, n)
        r = comp_coeff(B_terms, n)
        for k in range(1, n):
            if s[k]:
                r -= k * s[k] * a_coef[n - k + 1]
        m = mu - n * lam
        if m == 0:
            raise ResonanceError(f"multiplier of s_{n} vanishes (mu={mu}, lambda={lam})")
        sn = -r / m
        s[n] = sn
        pw[1][n] = sn
        if sn:
            a_coef[n] += _dA_dy0(F) * sn
    return Series.from_list(s, x, T)


def _dA_dy0(F):
    return F.A[0, 1] if (F.A.trunc is None or F.A.trunc > 1) else Fraction(0)


# -- curves -----------------------------------------------------------------

@dataclass(frozen=True)
class FormalCurve:
    """A formal curve at the root point, with the leaf graph it came from.

    ``gamma`` is the parametrisation ``(gamma_1(t), ..., )`` in root
    coordinates; ``series`` is the graph solved at the leaf, ``form`` says
    over which leaf axis it is a graph.
    """

    form: str
    series: Series
    gamma: tuple
    chain: tuple = ()
    role: str = "eigendirection"

    @property
    def guaranteed_order(self):
        ts = [g.trunc for g in self.gamma if g.trunc is not None]
        return min(ts) if ts else None

    @property
    def tangent(self):
        """Tangent direction at the origin: ``("slope", q)`` or ``("vertical",)``."""
        g1, g2 = self.gamma[0], self.gamma[1]
        o1, o2 = g1.order(), g2.order()
        if o2 < o1:
            return ("vertical",)
        if o1 < o2:
            return ("slope", Fraction(0))
        return ("slope", g2[o2] / g1[o1])

    def to_dict(self):
        tan = self.tangent
        return {
            "form": self.form,
            "role": self.role,
            "leaf_series": _series_dict(self.series),
            "gamma": [_series_dict(g) for g in self.gamma],
            "chain": [c.to_dict() for c in self.chain],
            "tangent": {"kind": tan[0], **({"slope": format_rational(tan[1])} if len(tan) > 1 else {})},
            "guaranteed_order": self.guaranteed_order,
        }


def _series_dict(s: Series):
    return {
        "vars": list(s.vars),
        "trunc": s.trunc,
        "text": format_series(s),
        "coeffs": [[list(e), format_rational(c)] for e, c in sorted(s.items())],
    }


def blow_down(gamma: tuple, chain) -> tuple:
    """Push a parametrised curve from the leaf chart back to the root chart."""
    g1, g2 = gamma
    for chart in reversed(list(chain)):
        c = chart.center[1]
        if chart.kind == "x":
            g1, g2 = g1, mul(g1, g2 + c)
        else:
            g1, g2 = mul(g1, g2), g2
    return (g1, g2)


@dataclass
class InvarianceCheck:
    residuals: tuple
    h: Series | None
    h_nonzero: bool

    @property
    def residual(self) -> Series:
        return self.residuals[0]

    @property
    def invariant(self) -> bool:
        return all(r.is_zero() for r in self.residuals)

    @property
    def guaranteed_order(self):
        ts = [r.trunc for r in self.residuals if r.trunc is not None]
        return min(ts) if ts else None


def verify_invariance(F, gamma, N: int | None = None) -> InvarianceCheck:
    """Residuals of ``F(gamma(t)) = h(t) gamma'(t)`` with ``h`` found by exact division.

    ``gamma`` is a tuple of univariate series in one parameter (or a
    :class:`FormalCurve`).  ``h`` comes from the first component whose
    derivative is not identically zero; the other components give the
    residuals.  When that division is impossible no formal ``h`` exists and
    the cross products ``F_i g_p' - F_p g_i'`` are returned instead.
    """
    if isinstance(gamma, FormalCurve):
        gamma = gamma.gamma
    gamma = tuple(gamma)
    if len(gamma) != len(F.vars):
        raise VariableMismatch("curve and field dimensions differ")
    if N is not None:
        gamma = tuple(g.truncate(N) for g in gamma)
    tvars = gamma[0].vars
    comps = [substitute(c, dict(zip(F.vars, gamma)), tvars) for c in F.components]
    ders = [derive(g, tvars[0]) for g in gamma]
    p = next((i for i, d in enumerate(ders) if not d.is_zero()), None)
    if p is None:
        raise DegenerateCurve("all parametrisation derivatives vanish")
    others = [i for i in range(len(gamma)) if i != p]
    try:
        h = divide_exact(comps[p], ders[p])
    except NotDivisible:
        cross = tuple(comps[i] * ders[p] - comps[p] * ders[i] for i in others)
        return InvarianceCheck(cross, None, False)
    res = tuple(comps[i] - mul(h, ders[i]) for i in others)
    return InvarianceCheck(res, h, not h.is_zero())


# -- search -----------------------------------------------------------------

@dataclass
class SeparatrixReport:
    curves: list
    unique: bool
    conditional: bool
    unresolved: list = field(default_factory=list)
    divisor_contained: int = 0
    fiber: str | None = None

    @property
    def uniqueness(self) -> str:
        if self.conditional:
            return "conditional"
        return "unique" if self.unique else ("none" if not self.curves else "multiple")

    def to_dict(self):
        out = {
            "curves": [c.to_dict() for c in self.curves],
            "count": len(self.curves),
            "uniqueness": self.uniqueness,
            "unresolved": self.unresolved,
            "divisor_contained": self.divisor_contained,
        }
        if self.fiber:
            out["fiber"] = self.fiber
        return out


def _leaf_curves(node: ReductionNode, chain: tuple, N: int):
    cls = node.classification
    curves, hidden = [], 0
    pairs = _eigen_slopes(cls)
    for lam, slope in pairs:
        on_divisor = (slope is None and "v" in node.divisors) or (slope == 0 and "h" in node.divisors)
        if on_divisor:
            hidden += 1
            continue
        if cls.tag is Tag.SADDLE_NODE:
            role = "weak" if lam == 0 else "strong"
        else:
            role = "eigendirection"
        x, y = node.field.vars
        if slope is None:
            s = graph_separatrix(node.field, N, axis=y)
            tt = s.rename({y: "t"})
            t = Series.var("t", ("t",), None)
            gamma = (tt, t)
            form = f"graph {x}=s({y})"
        else:
            s = graph_separatrix(node.field, N, slope=slope)
            tt = s.rename({x: "t"})
            t = Series.var("t", ("t",), None)
            gamma = (t, tt)
            form = f"graph {y}=s({x})"
        root_gamma = blow_down(gamma, chain)
        curves.append(FormalCurve(form, s, root_gamma, chain, role))
    return curves, hidden


def separatrix_search(F: PlanarField, N: int = 24, max_depth: int = 8) -> SeparatrixReport:
    """All real formal separatrices of ``F`` found through its reduction tree."""
    tree = seidenberg_reduce(F, max_depth)
    curves, unresolved, hidden = [], [], 0

    def visit(node: ReductionNode, chain: tuple):
        nonlocal hidden
        if node.chart is not None:
            chain = chain + (node.chart,)
        if node.children:
            for c in node.children:
                visit(c, chain)
            return
        if node.status in ("simple", "saddle-node"):
            if node.classification.eigenvalues is None:
                unresolved.append({"status": "irrational-eigendirections",
                                   "chain": [c.to_dict() for c in chain]})
                return
            found, h = _leaf_curves(node, chain, N)
            curves.extend(found)
            hidden += h
        elif node.status in ("nonsingular", "complex", "monodromic"):
            return
        else:
            unresolved.append({"status": node.status, "note": node.note,
                               "chain": [c.to_dict() for c in chain]})

    visit(tree.root, ())
    return SeparatrixReport(curves, unique=len(curves) == 1, conditional=bool(unresolved),
                            unresolved=unresolved, divisor_contained=hidden)


def separatrices_of_X_a(a: Series, N: int = 24, max_depth: int = 8) -> SeparatrixReport:
    """Separatrices of ``X_a``: those of its restriction to the invariant fiber ``z = 0``."""
    require_flat(a)
    X = X_a(a)
    Y = X.restrict_to_fiber(X.vars[2])
    rep = separatrix_search(Y, N, max_depth)
    lifted = []
    for c in rep.curves:
        t = c.gamma[0].vars
        zero = Series.zero(t, c.gamma[0].trunc)
        lifted.append(FormalCurve(c.form, c.series, c.gamma + (zero,), c.chain, c.role))
    rep.curves = lifted
    rep.fiber = f"{X.vars[2]}=0"
    return rep


def restrict_X_a(a: Series) -> PlanarField:
    X = X_a(a)
    return X.restrict_to_fiber(X.vars[2])
