"""Planar and spatial vector fields as tuples of truncated series."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction

from . import polyroots
from .errors import IdenticallyZeroCone, NotSingular, TruncationError, VariableMismatch
from .series import Series, derive, format_rational, format_series, mul


@dataclass(frozen=True)
class PlanarField:
    """``A d/dx + B d/dy`` in the variables ``A.vars``."""

    A: Series
    B: Series

    def __post_init__(self):
        if self.A.vars != self.B.vars or self.A.nvars != 2:
            raise VariableMismatch("planar field components need one shared pair of variables")

    @property
    def vars(self) -> tuple:
        return self.A.vars

    @property
    def components(self) -> tuple:
        return (self.A, self.B)

    @property
    def exact(self) -> bool:
        return self.A.is_exact and self.B.is_exact

    @property
    def trunc(self):
        ts = [t for t in (self.A.trunc, self.B.trunc) if t is not None]
        return min(ts) if ts else None

    @classmethod
    def from_components(cls, comps, vars=("x", "y"), trunc=None) -> "PlanarField":
        """Build from dicts ``{(i, j): coeff}``."""
        a, b = comps
        return cls(Series(vars, a, trunc), Series(vars, b, trunc))

    def truncate(self, n) -> "PlanarField":
        return PlanarField(self.A.truncate(n), self.B.truncate(n))

    def normalized(self) -> "PlanarField":
        """Both components cut to the shared (smaller) truncation."""
        return self.truncate(self.trunc)

    def scale(self, u: Series) -> "PlanarField":
        return PlanarField(mul(self.A, u), mul(self.B, u))

    def rename(self, mapping) -> "PlanarField":
        return PlanarField(self.A.rename(mapping), self.B.rename(mapping))

    def swapped(self) -> "PlanarField":
        """Same field with the roles of the two coordinates exchanged."""
        A = Series(self.vars, {(j, i): c for (i, j), c in self.B.items()}, self.B.trunc)
        B = Series(self.vars, {(j, i): c for (i, j), c in self.A.items()}, self.A.trunc)
        return PlanarField(A, B)

    def at(self, point):
        return (self.A.evaluate(point), self.B.evaluate(point))

    def __str__(self):
        x, y = self.vars
        return f"({format_series(self.A)}) d/d{x} + ({format_series(self.B)}) d/d{y}"


@dataclass(frozen=True)
class Field3:
    A: Series
    B: Series
    C: Series

    def __post_init__(self):
        if not (self.A.vars == self.B.vars == self.C.vars) or self.A.nvars != 3:
            raise VariableMismatch("3D field components need one shared variable triple")

    @property
    def vars(self) -> tuple:
        return self.A.vars

    @property
    def components(self) -> tuple:
        return (self.A, self.B, self.C)

    @property
    def exact(self) -> bool:
        return all(c.is_exact for c in self.components)

    def restrict_to_fiber(self, var: str) -> PlanarField:
        """Restriction to ``var = 0``; the ``var`` component must vanish there."""
        i = self.vars.index(var)
        if not self.components[i].restrict({var: 0}).is_zero():
            raise ValueError(f"the fiber {var}=0 is not invariant")
        keep = [c for j, c in enumerate(self.components) if j != i]
        return PlanarField(keep[0].restrict({var: 0}), keep[1].restrict({var: 0}))

    def __str__(self):
        return " + ".join(f"({format_series(c)}) d/d{v}" for c, v in zip(self.components, self.vars))


@dataclass(frozen=True)
class LinearPart:
    matrix: tuple

    @property
    def trace(self) -> Fraction:
        return self.matrix[0][0] + self.matrix[1][1]

    @property
    def det(self) -> Fraction:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    @property
    def discriminant(self) -> Fraction:
        return self.trace ** 2 - 4 * self.det

    def rational_eigenvalues(self):
        """Both eigenvalues (larger first) when rational, else None."""
        disc = self.discriminant
        if not polyroots.is_rational_square(disc):
            return None
        r = polyroots.rational_sqrt(disc)
        return ((self.trace + r) / 2, (self.trace - r) / 2)

    def eigenvector(self, lam: Fraction) -> tuple:
        """A nonzero rational vector in the kernel of ``M - lam``."""
        (a, b), (c, d) = self.matrix
        a, d = a - lam, d - lam
        if a != 0 or b != 0:
            return (-b, a)
        if c != 0 or d != 0:
            return (d, -c)
        return (Fraction(1), Fraction(0))

    def to_dict(self):
        return {
            "matrix": [[format_rational(v) for v in row] for row in self.matrix],
            "trace": format_rational(self.trace),
            "det": format_rational(self.det),
            "discriminant": format_rational(self.discriminant),
        }


class Tag(str, enum.Enum):
    NON_SINGULAR = "NonSingular"
    SIMPLE = "SimpleTwoSeparatrix"
    SADDLE_NODE = "SaddleNode"
    COMPLEX = "ComplexEigenvalues"
    DEGENERATE = "ResonantOrDegenerate"


@dataclass(frozen=True)
class SingularityClass:
    tag: Tag
    linear: LinearPart | None = None
    eigenvalues: tuple | None = None

    @property
    def is_final(self) -> bool:
        """Needs no further blow-up."""
        return self.tag is not Tag.DEGENERATE

    def to_dict(self):
        out = {"tag": self.tag.value}
        if self.linear is not None:
            out.update(self.linear.to_dict())
        if self.eigenvalues is not None:
            out["eigenvalues"] = [format_rational(v) for v in self.eigenvalues]
        return out


def linear_part(F: PlanarField) -> LinearPart:
    for comp in F.components:
        if comp.trunc is not None and comp.trunc < 2:
            raise TruncationError("linear part needs truncation >= 2")
        if comp.constant_term() != 0:
            raise NotSingular(f"field does not vanish at the base point: {F}")
    A, B = F.components
    m = ((A[1, 0], A[0, 1]), (B[1, 0], B[0, 1]))
    return LinearPart(m)


def positive_rational_ratio(L: LinearPart) -> bool:
    """Whether the eigenvalue ratio lies in Q_{>0}, decided without algebraic numbers.

    Real eigenvalues with positive product have a rational ratio exactly
    when the discriminant is a rational square (the ratio solves
    ``q^2 - (T^2/D - 2) q + 1 = 0`` whose discriminant is ``T^2 disc / D^2``).
    """
    D, disc = L.det, L.discriminant
    if D <= 0 or disc < 0:
        return False
    return polyroots.is_rational_square(disc)


def classify_singularity(F: PlanarField) -> SingularityClass:
    A, B = F.components
    if A.constant_term() != 0 or B.constant_term() != 0:
        return SingularityClass(Tag.NON_SINGULAR)
    L = linear_part(F)
    eig = L.rational_eigenvalues()
    if L.discriminant < 0:
        return SingularityClass(Tag.COMPLEX, L)
    if L.det == 0:
        if L.trace != 0:
            return SingularityClass(Tag.SADDLE_NODE, L, (L.trace, Fraction(0)))
        return SingularityClass(Tag.DEGENERATE, L, eig)
    if positive_rational_ratio(L):
        return SingularityClass(Tag.DEGENERATE, L, eig)
    return SingularityClass(Tag.SIMPLE, L, eig)


# -- tangent cone -----------------------------------------------------------

@dataclass(frozen=True)
class Direction:
    """A real line through the origin: slope ``y = s*x``, vertical, or irrational."""

    kind: str                 # "slope" | "vertical" | "irrational"
    multiplicity: int = 1
    slope: Fraction | None = None
    interval: tuple | None = None

    def to_dict(self):
        out = {"kind": self.kind, "multiplicity": self.multiplicity}
        if self.slope is not None:
            out["slope"] = format_rational(self.slope)
        if self.interval is not None:
            out["interval"] = [format_rational(v) for v in self.interval]
        return out


@dataclass(frozen=True)
class TangentCone:
    polynomial: Series
    degree: int
    directions: tuple = field(default_factory=tuple)
    complex_roots: int = 0

    @property
    def real_directions(self):
        return self.directions

    def to_dict(self):
        return {
            "polynomial": format_series(self.polynomial),
            "degree": self.degree,
            "directions": [d.to_dict() for d in self.directions],
            "complex_roots": self.complex_roots,
        }


def binary_form_directions(P: Series) -> tuple[list, int]:
    """Real zero lines of a homogeneous binary form and the count of complex roots."""
    d = P.degree()
    dirs = []
    vert = min(i for (i, j) in P.terms())  # power of x dividing P
    if vert:
        dirs.append(Direction("vertical", vert))
    # P(1, u) as a polynomial in the slope u
    p = [Fraction(0)] * (d + 1)
    for (i, j), c in P.items():
        p[j] += c
    p = polyroots.trim(p)
    real = vert
    rat = polyroots.rational_roots(p)
    q = p
    for r, m in rat:
        dirs.append(Direction("slope", m, slope=r))
        real += m
        for _ in range(m):
            q = polyroots.divmod_poly(q, [-r, 1])[0]
    if polyroots.degree(q) > 0:
        sf = polyroots.squarefree_part(q)
        for lo, hi in polyroots.isolate_real_roots(sf, width=Fraction(1, 2 ** 20)):
            m = _multiplicity_in(q, sf, lo, hi)
            dirs.append(Direction("irrational", m, interval=(lo, hi)))
            real += m
    return dirs, d - real


def _multiplicity_in(q, sf, lo, hi):
    # gcd(p, p') keeps every repeated root with multiplicity lowered by one
    m = 0
    cur = q
    while polyroots.degree(cur) > 0 and polyroots.count_real_roots(cur, lo, hi):
        g = polyroots.gcd_poly(cur, polyroots.derivative(cur))
        m += 1
        if polyroots.degree(g) <= 0:
            break
        cur = g
    return m


def separatrix_polynomial(F: PlanarField) -> tuple[Series, int]:
    """Lowest homogeneous part of ``y*A - x*B`` in the degree ``ord+1`` slot."""
    A, B = F.components
    x, y = F.vars
    nu = min(A.order(), B.order())
    if nu == float("inf"):
        raise TruncationError("both components vanish to the working truncation")
    P = mul(Series.var(y, F.vars), A) - mul(Series.var(x, F.vars), B)
    d = int(nu) + 1
    if P.trunc is not None and d >= P.trunc:
        raise TruncationError(f"truncation {P.trunc} too small for the degree-{d} cone")
    return P.homogeneous_part(d), d


def tangent_cone(F: PlanarField) -> TangentCone:
    A, B = F.components
    if A.constant_term() != 0 or B.constant_term() != 0:
        raise NotSingular("tangent cone needs a singular point")
    P, d = separatrix_polynomial(F)
    if P.is_zero():
        raise IdenticallyZeroCone(f"y*A - x*B has no degree-{d} part: dicritical point")
    dirs, ncomplex = binary_form_directions(P)
    return TangentCone(P, d, tuple(dirs), ncomplex)


# -- first integrals and isolatedness ---------------------------------------

def check_first_integral(f: Series, F) -> Series:
    """``df(F)``; vanishes (to its truncation) iff ``f`` is a first integral."""
    if f.vars != F.vars:
        raise VariableMismatch(f"function in {f.vars}, field in {F.vars}")
    total = Series.zero(F.vars)
    for v, comp in zip(F.vars, F.components):
        total = total + mul(derive(f, v), comp)
    return total


@dataclass(frozen=True)
class IsolationWitness:
    verdict: str            # "yes" | "no" | "unknown"
    certificate: str

    def to_dict(self):
        return {"verdict": self.verdict, "certificate": self.certificate}


def _positive_definite_structure(s: Series) -> bool:
    """Every monomial even in every variable with a positive coefficient, and
    a pure even power of each variable present: then ``s > 0`` off the origin."""
    if s.is_zero() or not s.is_exact:
        return False
    for e, c in s.items():
        if c <= 0 or any(k % 2 for k in e):
            return False
    n = s.nvars
    for i in range(n):
        if not any(e[i] > 0 and sum(e) == e[i] for e, _ in s.items()):
            return False
    return True


def _to_sympy(s: Series, syms):
    import sympy
    expr = sympy.Integer(0)
    for e, c in s.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for sym, k in zip(syms, e):
            term *= sym ** k
        expr += term
    return expr


def isolated_singularity_witness(F) -> IsolationWitness:
    """Decide whether the base point is an isolated zero of ``F``."""
    for comp in F.components:
        if comp.constant_term() != 0:
            raise NotSingular("witness needs a singular point")
    for comp, v in zip(F.components, F.vars):
        if _positive_definite_structure(comp):
            return IsolationWitness(
                "yes", f"component d/d{v} = {format_series(comp)} is positive definite "
                       "off the origin (even monomials, positive coefficients)")
    if isinstance(F, Field3):
        return IsolationWitness("unknown", "no structural positivity certificate in 3D")
    L = linear_part(F)
    if L.det != 0:
        return IsolationWitness("yes", f"nondegenerate linear part, det = {format_rational(L.det)}")
    if not F.exact:
        return IsolationWitness("unknown", "components are truncated series; polynomial "
                                           "truncation does not decide the germ")
    import sympy
    x, y = sympy.symbols("x y")
    a = _to_sympy(F.A, (x, y))
    b = _to_sympy(F.B, (x, y))
    g = sympy.gcd(a, b)
    notes = []
    if sympy.Poly(g, x, y).total_degree() > 0:
        gs = Series(F.vars, {m: Fraction(int(c.p), int(c.q))
                             for m, c in sympy.Poly(g, x, y).terms()})
        if gs.constant_term() == 0:
            low = gs.homogeneous_part(gs.order())
            dirs, _ = binary_form_directions(low)
            if dirs:
                return IsolationWitness("no", f"common factor {format_series(gs)} vanishes "
                                              "along a real curve through the origin")
            notes.append(f"common factor {format_series(gs)} has an isolated real zero")
        a = sympy.cancel(a / g)
        b = sympy.cancel(b / g)
    res = sympy.resultant(a, b, y)
    if res == 0:
        return IsolationWitness("unknown", "resultant vanishes identically after gcd removal")
    notes.append(f"Res_y = {sympy.factor(res)} is nonzero, so the common zeros are finite")
    return IsolationWitness("yes", "; ".join(notes))


def conjugate(F: PlanarField, P) -> PlanarField:
    """The field ``P^{-1} F(P u)`` for an invertible rational 2x2 matrix ``P``."""
    from .series import substitute
    (a, b), (c, d) = P
    det = a * d - b * c
    if det == 0:
        raise ValueError("singular change of coordinates")
    x, y = F.vars
    X = Series.var(x, F.vars)
    Y = Series.var(y, F.vars)
    sub = {x: X.scale(a) + Y.scale(b), y: X.scale(c) + Y.scale(d)}
    A1 = substitute(F.A, sub, F.vars)
    B1 = substitute(F.B, sub, F.vars)
    inv = ((d / det, -b / det), (-c / det, a / det))
    return PlanarField(A1.scale(inv[0][0]) + B1.scale(inv[0][1]),
                       A1.scale(inv[1][0]) + B1.scale(inv[1][1]))
