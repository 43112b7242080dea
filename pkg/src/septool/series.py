"""Truncated multivariate power series with exact rational coefficients.

A :class:`Series` is a sparse map ``exponent tuple -> Fraction`` over an
ordered tuple of variable names, together with a total-degree truncation
order ``trunc``: every coefficient of total degree ``< trunc`` is known,
everything at or above it is unknown.  ``trunc=None`` marks an exact
polynomial (no unknown tail).

Truncation bookkeeping never reports a coefficient that depends on an
unknown tail term:

* ``a + b``   -> ``min(a.trunc, b.trunc)``
* ``a * b``   -> ``min(a.trunc + ord(b), b.trunc + ord(a))``
* division by a monomial of degree ``m`` shrinks the truncation by ``m``
* composition with inner series of order ``>= k`` maps ``trunc`` to
  ``trunc * k`` (further capped by the inner truncations)
* ``derive`` shrinks the truncation by one.

The product rule is the exact validity window; for two series of order 0
it coincides with the plain ``min`` rule.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import CompositionError, NotAUnit, NotDivisible, VariableMismatch

DEFAULT_TRUNC = 24

Rational = Fraction
Exponent = tuple


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a reduced Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a rational coefficient")
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


def _tval(t):
    return math.inf if t is None else t


def _tback(t):
    return None if t == math.inf else int(t)


class Series:
    """Immutable truncated power series in one or more variables."""

    __slots__ = ("vars", "_c", "trunc")

    def __init__(self, vars: Sequence[str], coeffs: Mapping | None = None,
                 trunc: int | None = None):
        vars = tuple(vars)
        if not vars or len(set(vars)) != len(vars):
            raise ValueError(f"bad variable tuple {vars!r}")
        if trunc is not None:
            trunc = int(trunc)
            if trunc < 1:
                raise ValueError("trunc must be >= 1")
        n = len(vars)
        clean = {}
        for e, c in (coeffs or {}).items():
            if isinstance(e, int):
                e = (e,)
            e = tuple(int(k) for k in e)
            if len(e) != n or min(e) < 0:
                raise ValueError(f"bad exponent {e!r} for variables {vars!r}")
            c = as_rational(c)
            if c == 0 or (trunc is not None and sum(e) >= trunc):
                continue
            clean[e] = clean.get(e, 0) + c
        self.vars = vars
        self._c = {e: c for e, c in clean.items() if c != 0}
        self.trunc = trunc

    # -- constructors ----------------------------------------------------

    @classmethod
    def _raw(cls, vars, coeffs, trunc):
        s = object.__new__(cls)
        s.vars = vars
        s._c = coeffs
        s.trunc = trunc
        return s

    @classmethod
    def zero(cls, vars, trunc=None) -> "Series":
        return cls(vars, {}, trunc)

    @classmethod
    def const(cls, value, vars, trunc=None) -> "Series":
        return cls(vars, {(0,) * len(tuple(vars)): value}, trunc)

    @classmethod
    def var(cls, name: str, vars, trunc=None) -> "Series":
        vars = tuple(vars)
        e = tuple(1 if v == name else 0 for v in vars)
        if name not in vars:
            raise VariableMismatch(f"{name!r} not among {vars!r}")
        return cls(vars, {e: 1}, trunc)

    @classmethod
    def from_list(cls, coeffs: Iterable, var: str = "x", trunc=None) -> "Series":
        """Univariate series from a dense coefficient list ``[c0, c1, ...]``."""
        return cls((var,), {(i,): c for i, c in enumerate(coeffs)}, trunc)

    # -- inspection ------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.vars)

    @property
    def is_exact(self) -> bool:
        return self.trunc is None

    def items(self):
        return self._c.items()

    def terms(self) -> dict:
        return dict(self._c)

    def __len__(self):
        return len(self._c)

    def __getitem__(self, e) -> Fraction:
        if isinstance(e, int):
            e = (e,)
        if self.trunc is not None and sum(e) >= self.trunc:
            raise IndexError(f"coefficient {e} lies beyond truncation {self.trunc}")
        return self._c.get(tuple(e), Fraction(0))

    def coeff(self, *e) -> Fraction:
        return self[e]

    def is_zero(self) -> bool:
        """True when every known coefficient vanishes."""
        return not self._c

    def order(self):
        """Lowest total degree of a nonzero term (``trunc``/inf if none known)."""
        if self._c:
            return min(sum(e) for e in self._c)
        return _tval(self.trunc)

    def degree(self) -> int:
        return max((sum(e) for e in self._c), default=-1)

    def constant_term(self) -> Fraction:
        return self._c.get((0,) * self.nvars, Fraction(0))

    def homogeneous_part(self, d: int) -> "Series":
        return Series._raw(self.vars, {e: c for e, c in self._c.items() if sum(e) == d}, None)

    def order_in(self, var: str):
        """Largest ``k`` with ``var**k`` dividing every stored term."""
        i = self.vars.index(var)
        return min((e[i] for e in self._c), default=math.inf)

    def to_list(self, n: int | None = None) -> list:
        if self.nvars != 1:
            raise VariableMismatch("to_list needs a univariate series")
        if n is None:
            n = self.trunc if self.trunc is not None else self.degree() + 1
        return [self._c.get((i,), Fraction(0)) for i in range(n)]

    def truncate(self, n: int | None) -> "Series":
        """Drop terms of degree >= n and lower the truncation order to n."""
        if n is None:
            return self
        n = min(n, _tval(self.trunc))
        if n == math.inf:
            return self
        return Series._raw(self.vars, {e: c for e, c in self._c.items() if sum(e) < n}, int(n))

    def with_trunc(self, n: int | None) -> "Series":
        """Same stored terms with a new truncation (used to declare exactness)."""
        return Series(self.vars, self._c, n)

    def rename(self, mapping: Mapping[str, str]) -> "Series":
        return Series._raw(tuple(mapping.get(v, v) for v in self.vars), self._c, self.trunc)

    def embed(self, vars: Sequence[str]) -> "Series":
        """View the series inside a larger (or reordered) variable tuple."""
        vars = tuple(vars)
        missing = [v for v in self.vars if v not in vars]
        if missing:
            raise VariableMismatch(f"variables {missing} absent from {vars}")
        idx = [self.vars.index(v) if v in self.vars else None for v in vars]
        out = {}
        for e, c in self._c.items():
            out[tuple(0 if i is None else e[i] for i in idx)] = c
        return Series._raw(vars, out, self.trunc)

    def restrict(self, assignments: Mapping[str, int]) -> "Series":
        """Set some variables to zero (only value 0 is supported) and drop them."""
        for v, val in assignments.items():
            if val != 0:
                raise ValueError("restrict only supports setting variables to 0")
        keep = [i for i, v in enumerate(self.vars) if v not in assignments]
        drop = [i for i, v in enumerate(self.vars) if v in assignments]
        out = {}
        for e, c in self._c.items():
            if all(e[i] == 0 for i in drop):
                k = tuple(e[i] for i in keep)
                out[k] = c
        return Series._raw(tuple(self.vars[i] for i in keep), out, self.trunc)

    def evaluate(self, point: Mapping[str, object] | Sequence) -> Fraction:
        """Evaluate the stored polynomial at an exact point."""
        if isinstance(point, Mapping):
            point = [as_rational(point[v]) for v in self.vars]
        else:
            point = [as_rational(p) for p in point]
        total = Fraction(0)
        for e, c in self._c.items():
            term = c
            for p, k in zip(point, e):
                if k:
                    term *= p ** k
            total += term
        return total

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return self.vars == other.vars and self.trunc == other.trunc and self._c == other._c

    def __hash__(self):
        return hash((self.vars, self.trunc, frozenset(self._c.items())))

    def agrees_with(self, other: "Series", n: int | None = None) -> bool:
        """Coefficient equality for all degrees below ``n`` (default: joint trunc)."""
        _check_vars(self, other)
        bound = min(_tval(self.trunc), _tval(other.trunc))
        if n is not None:
            bound = min(bound, n)
        keys = set(self._c) | set(other._c)
        return all(self._c.get(e, 0) == other._c.get(e, 0) for e in keys if sum(e) < bound)

    def __repr__(self):
        tail = "" if self.trunc is None else f" + O({self.trunc})"
        return f"Series({format_series(self)}{tail})"

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Series):
            return other
        return Series.const(as_rational(other), self.vars)

    def __add__(self, other):
        return add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return Series._raw(self.vars, {e: -c for e, c in self._c.items()}, self.trunc)

    def __sub__(self, other):
        return add(self, -self._coerce(other))

    def __rsub__(self, other):
        return add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, Series):
            return mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        return power(self, k)

    def __truediv__(self, other):
        if isinstance(other, Series):
            return divide_exact(self, other)
        c = as_rational(other)
        return self.scale(1 / c)

    def scale(self, c) -> "Series":
        c = as_rational(c)
        if c == 0:
            return Series._raw(self.vars, {}, self.trunc)
        return Series._raw(self.vars, {e: c * v for e, v in self._c.items()}, self.trunc)

    def shift(self, e: Sequence[int]) -> "Series":
        """Multiply by the monomial with exponent ``e``."""
        e = tuple(e)
        d = sum(e)
        t = None if self.trunc is None else self.trunc + d
        return Series._raw(self.vars,
                           {tuple(a + b for a, b in zip(k, e)): c for k, c in self._c.items()}, t)


def _check_vars(a: Series, b: Series):
    if a.vars != b.vars:
        raise VariableMismatch(f"variables {a.vars} and {b.vars} differ")


def add(a: Series, b: Series) -> Series:
    _check_vars(a, b)
    t = min(_tval(a.trunc), _tval(b.trunc))
    out = {e: c for e, c in a._c.items() if sum(e) < t}
    for e, c in b._c.items():
        if sum(e) >= t:
            continue
        v = out.get(e, 0) + c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return Series._raw(a.vars, out, _tback(t))


def mul(a: Series, b: Series) -> Series:
    """Truncated Cauchy product."""
    _check_vars(a, b)
    t = min(_tval(a.trunc) + b.order(), _tval(b.trunc) + a.order())
    if not a._c or not b._c:
        return Series._raw(a.vars, {}, _tback(t))
    out: dict = {}
    bl = sorted(((sum(e), e, c) for e, c in b._c.items()), key=lambda x: x[0])
    for ea, ca in a._c.items():
        da = sum(ea)
        for db, eb, cb in bl:
            if da + db >= t:
                break
            e = tuple(i + j for i, j in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return Series._raw(a.vars, {e: c for e, c in out.items() if c}, _tback(t))


def power(s: Series, k: int) -> Series:
    if k < 0:
        raise ValueError("negative powers need invert_unit")
    result = Series.const(1, s.vars)
    base = s
    while k:
        if k & 1:
            result = mul(result, base)
        k >>= 1
        if k:
            base = mul(base, base)
    return result


def invert_unit(u: Series, trunc: int | None = None) -> Series:
    """Multiplicative inverse of a series with nonzero constant term.

    Exact polynomial input has no natural truncation, so ``trunc`` (or
    ``DEFAULT_TRUNC``) is used; the result of a truncated unit keeps the
    unit's own truncation unless a smaller ``trunc`` is requested.
    """
    c0 = u.constant_term()
    if c0 == 0:
        raise NotAUnit("constant term is zero")
    t = u.trunc if u.trunc is not None else (trunc or DEFAULT_TRUNC)
    if trunc is not None:
        t = min(t, trunc)
    zero = (0,) * u.nvars
    by_deg: dict[int, list] = {}
    for e, c in u._c.items():
        d = sum(e)
        if 0 < d < t:
            by_deg.setdefault(d, []).append((e, c))
    inv0 = 1 / c0
    parts = [{zero: inv0}]
    for d in range(1, t):
        acc: dict = {}
        for k in range(1, d + 1):
            uk = by_deg.get(k)
            if not uk:
                continue
            for ev, cv in parts[d - k].items():
                for eu, cu in uk:
                    e = tuple(i + j for i, j in zip(ev, eu))
                    acc[e] = acc.get(e, 0) + cu * cv
        parts.append({e: -inv0 * c for e, c in acc.items() if c})
    out = {}
    for p in parts:
        out.update(p)
    return Series._raw(u.vars, out, t)


def monomial_content(s: Series) -> tuple:
    """Exponent of the largest monomial dividing every stored term."""
    if not s._c:
        return (0,) * s.nvars
    return tuple(min(e[i] for e in s._c) for i in range(s.nvars))


def divide_by_monomial(a: Series, m: Sequence[int]) -> Series:
    m = tuple(m)
    out = {}
    for e, c in a._c.items():
        q = tuple(i - j for i, j in zip(e, m))
        if min(q) < 0:
            raise NotDivisible(f"term {format_monomial(e, a.vars)} is not divisible by "
                               f"{format_monomial(m, a.vars)}")
        out[q] = c
    t = None if a.trunc is None else a.trunc - sum(m)
    if t is not None and t < 1:
        raise NotDivisible("truncation exhausted by the division")
    return Series._raw(a.vars, out, t)


def divide_exact(a: Series, b: Series, trunc: int | None = None) -> Series:
    """Quotient ``q`` with ``a = b*q`` where ``b`` is a monomial times a unit.

    Terms of ``a`` that the monomial part of ``b`` cannot divide raise
    :class:`NotDivisible`.  When both operands are exact polynomials and the
    quotient is a polynomial, the result is exact; otherwise it is a series
    truncated at ``trunc`` (default ``DEFAULT_TRUNC``).
    """
    _check_vars(a, b)
    if b.is_zero():
        raise NotDivisible("division by zero series")
    m = monomial_content(b)
    unit = divide_by_monomial(b, m)
    if unit.constant_term() == 0:
        raise NotDivisible(f"divisor {format_series(b)} is not a monomial times a unit")
    num = divide_by_monomial(a, m)
    if len(unit) == 1:
        return num.scale(1 / unit.constant_term())
    if num.trunc is None and unit.trunc is None:
        if num.is_zero():
            return num
        probe = mul(num, invert_unit(unit, num.degree() + 1)).with_trunc(None)
        if mul(probe, unit) == num:
            return probe
        t = trunc or DEFAULT_TRUNC
        return mul(num.truncate(t), invert_unit(unit, t))
    inv = invert_unit(unit, num.trunc if unit.trunc is None else None)
    return mul(num, inv)


def derive(s: Series, var: str) -> Series:
    if var not in s.vars:
        raise VariableMismatch(f"{var!r} not among {s.vars}")
    i = s.vars.index(var)
    out = {}
    for e, c in s._c.items():
        k = e[i]
        if k:
            ne = e[:i] + (k - 1,) + e[i + 1:]
            out[ne] = c * k
    if s.trunc == 1:
        raise ValueError("derivative of a series known only to order 0 carries no information")
    t = None if s.trunc is None else s.trunc - 1
    return Series._raw(s.vars, out, t)


def substitute(s: Series, assignments: Mapping[str, Series],
               vars: Sequence[str] | None = None) -> Series:
    """Compose ``s`` with the given inner series.

    Every inner series must live in the same variable tuple (the result's
    variables, or ``vars`` when given).  Variables of ``s`` without an
    assignment must belong to that tuple and are kept as they are.

    An inner series with a nonzero constant term is only allowed when ``s``
    is an exact polynomial; otherwise the recentred coefficients would
    depend on the unknown tail.
    """
    inner = dict(assignments)
    if vars is None:
        vs = {g.vars for g in inner.values()}
        if len(vs) > 1:
            raise VariableMismatch(f"inner series use different variables: {vs}")
        vars = vs.pop() if vs else s.vars
    vars = tuple(vars)
    images = []
    for v in s.vars:
        if v in inner:
            g = inner[v]
            if g.vars != vars:
                raise VariableMismatch(f"image of {v!r} lives in {g.vars}, expected {vars}")
        else:
            if v not in vars:
                raise VariableMismatch(f"unassigned variable {v!r} missing from {vars}")
            g = Series.var(v, vars)
        images.append(g)

    tcap = math.inf
    if s.trunc is not None:
        for v, g in zip(s.vars, images):
            if g.constant_term() != 0:
                raise CompositionError(
                    f"inner series for {v!r} has a nonzero constant term but the outer "
                    "series is truncated")
        kmin = min(g.order() for g in images) if images else 1
        tcap = s.trunc * kmin
    tcap_i = None if tcap == math.inf else int(tcap)

    cache = [{0: Series.const(1, vars)} for _ in images]

    def pw(i, k):
        c = cache[i]
        if k not in c:
            prev = pw(i, k - 1)
            c[k] = mul(prev, images[i]).truncate(tcap_i)
        return c[k]

    result = Series.zero(vars, tcap_i)
    for e, c in s._c.items():
        term = Series.const(c, vars)
        for i, k in enumerate(e):
            if k:
                term = mul(term, pw(i, k)).truncate(tcap_i)
        result = add(result, term)
    return result


def compose_univariate(s: Series, g: Series) -> Series:
    """``s(g)`` for univariate ``s``; the result lives in ``g``'s variables."""
    if s.nvars != 1:
        raise VariableMismatch("compose_univariate needs a univariate outer series")
    return substitute(s, {s.vars[0]: g}, g.vars)


# -- rendering --------------------------------------------------------------

def format_rational(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(e: Sequence[int], vars: Sequence[str]) -> str:
    parts = []
    for v, k in zip(vars, e):
        if k == 1:
            parts.append(v)
        elif k > 1:
            parts.append(f"{v}^{k}")
    return "*".join(parts) or "1"


def _term_key(e):
    return (sum(e), tuple(-k for k in e))


def format_series(s: Series) -> str:
    """Human-readable polynomial text, parseable by the field DSL."""
    if not s._c:
        return "0"
    out = []
    for e in sorted(s._c, key=_term_key):
        c = s._c[e]
        mono = format_monomial(e, s.vars)
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if mono == "1":
            body = format_rational(a)
        elif a == 1:
            body = mono
        elif a.denominator == 1:
            body = f"{a.numerator}*{mono}"
        else:
            body = f"({format_rational(a)})*{mono}"
        out.append((sign, body))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, body in out[1:]:
        text += f" {sign} {body}"
    return text
