"""Point blow-ups in directional charts and Seidenberg reduction trees."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (HypothesisViolated, IdenticallyZeroCone, NotSingular,
                     TruncationError)
from .fields import (PlanarField, SingularityClass, Tag, TangentCone,
                     classify_singularity, tangent_cone)
from .models import Y_a, require_flat
from .series import (Series, compose_univariate, divide_by_monomial,
                     divide_exact, format_rational, substitute)


@dataclass(frozen=True)
class BlowupChart:
    """One edge of a reduction: ``kind`` is ``"x"`` (y = x*y1) or ``"y"`` (x = x1*y).

    ``center`` is the point of the exceptional divisor, in the unshifted
    chart coordinates, at which the child is recentred.
    """

    kind: str
    center: tuple = (Fraction(0), Fraction(0))
    multiplicity: int = 0

    def to_dict(self):
        return {"kind": self.kind,
                "center": [format_rational(c) for c in self.center],
                "multiplicity": self.multiplicity}


def blowup_point(F: PlanarField, chart: str = "x") -> tuple[PlanarField, int]:
    """Strict transform of ``F`` in a directional chart of the blow-up at the origin.

    Returns the transformed field (same variable names, now meaning
    ``(x, y/x)`` or ``(x/y, y)``) and the power of the divisor variable that
    was divided out after the chain rule.
    """
    A, B = F.components
    if A.constant_term() != 0 or B.constant_term() != 0:
        raise NotSingular("blow-up center must be a singular point")
    x, y = F.vars
    X = Series.var(x, F.vars)
    Y = Series.var(y, F.vars)
    if chart == "x":
        sub = {x: X, y: X * Y}
        A1 = substitute(A, sub, F.vars)
        B1 = substitute(B, sub, F.vars)
        comps = [A1, divide_by_monomial(B1 - Y * A1, (1, 0))]
        div = x
    elif chart == "y":
        sub = {x: X * Y, y: Y}
        A1 = substitute(A, sub, F.vars)
        B1 = substitute(B, sub, F.vars)
        comps = [divide_by_monomial(A1 - X * B1, (0, 1)), B1]
        div = y
    else:
        raise ValueError(f"unknown chart {chart!r}")
    orders = [c.order_in(div) for c in comps if not c.is_zero()]
    if not orders:
        raise TruncationError("strict transform vanishes to the working truncation")
    m = int(min(orders))
    e = (m, 0) if chart == "x" else (0, m)
    G = PlanarField(*(divide_by_monomial(c, e) for c in comps))
    return G.normalized() if not G.exact else G, m


def translate(F: PlanarField, p) -> PlanarField:
    """Recentre at ``p`` by ``x -> x + p1, y -> y + p2``.

    For truncated components this is a formal recentring of the stored
    truncation polynomial, which keeps the input truncation.
    """
    x, y = F.vars
    p1, p2 = (Fraction(v) for v in p)
    X = Series.var(x, F.vars) + p1
    Y = Series.var(y, F.vars) + p2
    out = []
    for comp in F.components:
        t = comp.trunc
        moved = substitute(comp.with_trunc(None), {x: X, y: Y}, F.vars)
        out.append(moved.truncate(t))
    return PlanarField(*out)


def shear(F: PlanarField, c) -> PlanarField:
    """Coordinates ``(x, y - c x)``: sends the line ``y = c x`` to ``y = 0``."""
    c = Fraction(c)
    if c == 0:
        return F
    x, y = F.vars
    X = Series.var(x, F.vars)
    Y = Series.var(y, F.vars)
    sub = {x: X, y: Y + X.scale(c)}
    A1 = substitute(F.A, sub, F.vars)
    B1 = substitute(F.B, sub, F.vars)
    return PlanarField(A1, B1 - A1.scale(c))


def blowup_direction(F: PlanarField, slope=None) -> tuple[PlanarField, BlowupChart]:
    """Blow up and recentre at the divisor point of the direction ``y = slope*x``.

    ``slope=None`` means the vertical direction (y-chart at its origin).
    Rational slopes are reached by a shear followed by the x-chart, which is
    the same as translating the x-chart to ``y1 = slope`` but never needs a
    recentring of a truncated series.
    """
    if slope is None:
        G, m = blowup_point(F, "y")
        return G, BlowupChart("y", (Fraction(0), Fraction(0)), m)
    slope = Fraction(slope)
    G, m = blowup_point(shear(F, slope), "x")
    return G, BlowupChart("x", (Fraction(0), slope), m)


# -- reduction tree ---------------------------------------------------------

LEAF_STATUSES = ("nonsingular", "simple", "saddle-node", "complex", "dicritical",
                 "monodromic", "depth-capped", "irrational-direction", "truncation-exhausted")


@dataclass
class ReductionNode:
    field: PlanarField
    classification: SingularityClass | None
    depth: int
    chart: BlowupChart | None = None
    divisors: frozenset = frozenset()
    cone: TangentCone | None = None
    status: str | None = None
    weak_pursuit: bool = False
    children: list = field(default_factory=list)
    note: str = ""

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def leaves(self):
        return [n for n in self.walk() if n.is_leaf]


@dataclass
class ReductionTree:
    root: ReductionNode
    max_depth: int

    def nodes(self):
        return list(self.root.walk())

    def leaves(self):
        return self.root.leaves()

    def chain(self, *indices) -> list:
        """Nodes along the path ``root -> children[i0] -> children[i1] ...``."""
        node = self.root
        out = [node]
        for i in indices:
            node = node.children[i]
            out.append(node)
        return out


def _divisors_after(chart: BlowupChart, parent: frozenset) -> frozenset:
    # divisor lines through the new point, as coordinate axes: "v" is x=0, "h" is y=0
    if chart.kind == "x":
        keep = {"h"} if ("h" in parent and chart.center[1] == 0) else set()
        return frozenset({"v"} | keep)
    keep = {"v"} if "v" in parent else set()
    return frozenset({"h"} | keep)


_FINAL_STATUS = {
    Tag.NON_SINGULAR: "nonsingular",
    Tag.SIMPLE: "simple",
    Tag.SADDLE_NODE: "saddle-node",
    Tag.COMPLEX: "complex",
}


def _weak_direction(cls: SingularityClass):
    """Slope of the zero-eigenvalue line of a saddle-node (None = vertical)."""
    v1, v2 = cls.linear.eigenvector(Fraction(0))
    return None if v1 == 0 else v2 / v1


def _expand(node: ReductionNode, max_depth: int, pursue_weak: int):
    cls = node.classification
    if cls.tag in _FINAL_STATUS:
        node.status = _FINAL_STATUS[cls.tag]
        if cls.tag is Tag.SADDLE_NODE and pursue_weak > 0 and node.depth < max_depth:
            slope = _weak_direction(cls)
            child = _make_child(node, slope)
            if child is not None:
                child.weak_pursuit = True
                node.children.append(child)
                _expand(child, max_depth, pursue_weak - 1)
        return
    if node.depth >= max_depth:
        node.status = "depth-capped"
        return
    try:
        node.cone = tangent_cone(node.field)
    except IdenticallyZeroCone:
        node.status = "dicritical"
        return
    except TruncationError as exc:
        node.status = "truncation-exhausted"
        node.note = str(exc)
        return
    if not node.cone.directions:
        # no real tangent line: orbits spiral or circle, no separatrix can start here
        node.status = "monodromic"
        return
    for d in node.cone.directions:
        if d.kind == "irrational":
            node.children.append(ReductionNode(
                field=node.field, classification=None, depth=node.depth + 1,
                status="irrational-direction",
                note=f"slope in ({format_rational(d.interval[0])}, "
                     f"{format_rational(d.interval[1])}], not pursued"))
            continue
        child = _make_child(node, None if d.kind == "vertical" else d.slope)
        if child is None:
            continue
        node.children.append(child)
        _expand(child, max_depth, pursue_weak)
    if not node.children:
        node.status = "truncation-exhausted"


def _make_child(node: ReductionNode, slope):
    try:
        G, chart = blowup_direction(node.field, slope)
    except (TruncationError, NotSingular) as exc:
        node.note = str(exc)
        return None
    try:
        cls = classify_singularity(G)
    except TruncationError as exc:
        return ReductionNode(G, None, node.depth + 1, chart,
                             _divisors_after(chart, node.divisors),
                             status="truncation-exhausted", note=str(exc))
    return ReductionNode(G, cls, node.depth + 1, chart, _divisors_after(chart, node.divisors))


def seidenberg_reduce(F: PlanarField, max_depth: int = 8, pursue_weak: int = 0) -> ReductionTree:
    """Blow up along every real tangent direction until every leaf is final.

    ``pursue_weak`` additionally blows up that many times along the weak
    (zero-eigenvalue) direction of saddle-node leaves.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    cls = classify_singularity(F)
    if cls.tag is Tag.NON_SINGULAR:
        raise NotSingular("reduction needs a singular point")
    root = ReductionNode(F, cls, 0)
    _expand(root, max_depth, pursue_weak)
    return ReductionTree(root, max_depth)


# -- the worked example ------------------------------------------------------

def second_transform_Ya(a: Series, N: int | None = None) -> PlanarField:
    """Two x-chart blow-ups of ``Y_a`` along ``y = 0``, in coordinates ``(x, y2)``.

    Computed by the generic engine (blow-up, recentre at the divisor point of
    the separatrix direction, blow-up again).  An exact polynomial ``a``
    with ``N=None`` gives an exact result.
    """
    require_flat(a)
    work = None
    if N is not None or a.trunc is not None:
        t = N if N is not None else a.trunc
        work = t + 6
    F = Y_a(a, work)
    G, _ = blowup_direction(F, 0)
    H, _ = blowup_direction(G, 0)
    H = H.rename({"y": "y2"})
    return H.truncate(N) if N is not None else H


def _halve_x(s: Series, x: str, z: str) -> Series:
    """Rewrite a series even in ``x`` through ``z = 2 x^2``."""
    i = s.vars.index(x)
    out = {}
    for e, c in s.items():
        if e[i] % 2:
            raise HypothesisViolated(f"term with odd power of {x} cannot be ramified")
        k = e[i] // 2
        ne = e[:i] + (k,) + e[i + 1:]
        out[ne] = c / 2 ** k
    t = None if s.trunc is None else (s.trunc - 1) // 2 + 1
    vars = tuple(z if v == x else v for v in s.vars)
    return Series(vars, out, t)


def ramify_to_xi(F: PlanarField, alpha: Series, N: int | None = None) -> PlanarField:
    """From the second transform to the saddle-node field in ``(z, w)``.

    Divides by the unit ``1 + y2^2`` and substitutes ``z = 2 x^2``, ``w = y2``.
    The ``d/dz`` component is ``dz/dt = 4 x dx/dt``; after the division it
    equals ``4 x^4 = z^2``, so no time rescaling is needed.  ``alpha`` is
    checked against the restriction to ``w = 0``, which must equal
    ``a(x) = alpha(2 x^2)``.
    """
    x, y = F.vars
    Y = Series.var(y, F.vars)
    unit = 1 + Y * Y
    work = None if N is None else 2 * N + 2
    A = divide_exact(F.A, unit, trunc=work)
    B = divide_exact(F.B, unit, trunc=work)
    X = Series.var(x, F.vars)
    A = A * X.scale(4)
    zc = _halve_x(A, x, "z").rename({y: "w"})
    wc = _halve_x(B, x, "z").rename({y: "w"})
    al = alpha.rename({alpha.vars[0]: "z"})
    on_axis = wc.restrict({"w": 0})
    if not on_axis.agrees_with(al.truncate(on_axis.trunc) if on_axis.trunc else al):
        raise HypothesisViolated("field restricted to w=0 is not alpha(z)")
    out = PlanarField(zc, wc)
    return out.truncate(N) if N is not None else out


def xi_from_Ya(alpha: Series, N: int) -> PlanarField:
    """The full blow-up route ``alpha -> a -> Y_a -> second transform -> xi_alpha``."""
    x = Series.var("x", ("x",))
    a = compose_univariate(alpha.rename({alpha.vars[0]: "z"}), (x * x).scale(2))
    a = a.rename({a.vars[0]: "x"})
    work = None if a.is_exact else 2 * N + 2
    H = second_transform_Ya(a, work)
    return ramify_to_xi(H, alpha, N)
