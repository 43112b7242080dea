"""Named vector fields: the center, Y_a, X_a, the saddle-node family xi_alpha."""
from __future__ import annotations

from .errors import HypothesisViolated, VariableMismatch
from .fields import Field3, PlanarField
from .series import Series, compose_univariate, divide_by_monomial, divide_exact


def center(vars=("x", "y")) -> PlanarField:
    x, y = (Series.var(v, vars) for v in vars)
    return PlanarField(-y, x)


def linear_field(matrix, vars=("x", "y")) -> PlanarField:
    (a, b), (c, d) = matrix
    x, y = (Series.var(v, vars) for v in vars)
    return PlanarField(x.scale(a) + y.scale(b), x.scale(c) + y.scale(d))


def require_flat(a: Series, name: str = "a"):
    """``a(0) = a'(0) = 0``, the standing hypothesis on the perturbation series."""
    if a.nvars != 1:
        raise VariableMismatch(f"{name} must be a univariate series")
    if a[0] != 0 or (a.trunc is None or a.trunc > 1) and a[1] != 0:
        raise HypothesisViolated(f"{name} must satisfy {name}(0) = {name}'(0) = 0")


def Y_a(a: Series, trunc: int | None = None, vars=("x", "y")) -> PlanarField:
    """``(y^2 + x^4) d/dx + (-x y + x^3 a(x) + (a(x)/x) y^2) d/dy``.

    ``a`` is a series in ``x``; an exact polynomial ``a`` gives an exact field.
    """
    require_flat(a)
    if a.vars != (vars[0],):
        a = a.rename({a.vars[0]: vars[0]})
    x, y = (Series.var(v, vars) for v in vars)
    ax = a.embed(vars)
    a_over_x = divide_by_monomial(ax, (1, 0))
    A = y * y + x ** 4
    B = -(x * y) + x ** 3 * ax + a_over_x * y * y
    F = PlanarField(A, B)
    return F.truncate(trunc) if trunc is not None else F


def X_a(a: Series, trunc: int | None = None, vars=("x", "y", "z")) -> Field3:
    """``Y_a + z^2 d/dx`` in three variables; ``z`` is a first integral."""
    Y = Y_a(a, trunc, vars[:2])
    z = Series.var(vars[2], vars)
    A = Y.A.embed(vars) + z * z
    B = Y.B.embed(vars)
    C = Series.zero(vars)
    if trunc is not None:
        A, B, C = A.truncate(trunc), B.truncate(trunc), C.truncate(trunc)
    return Field3(A, B, C)


def xi_alpha(alpha: Series, trunc: int, vars=("z", "w")) -> PlanarField:
    """``z^2 d/dz + (-w(1+z) + w^3/(1+w^2) + alpha(z)) d/dw``, built directly."""
    require_flat(alpha, "alpha")
    z, w = (Series.var(v, vars) for v in vars)
    al = alpha.rename({alpha.vars[0]: vars[0]}).embed(vars)
    unit_part = divide_exact(w ** 3, 1 + w * w, trunc=trunc)
    B = -(w * (1 + z)) + unit_part + al
    return PlanarField((z * z), B.truncate(trunc))


def normal_form(vars=("z", "w")) -> PlanarField:
    """The formal orbital normal form ``z^2 d/dz - w(1+z) d/dw``."""
    z, w = (Series.var(v, vars) for v in vars)
    return PlanarField(z * z, -(w * (1 + z)))


def a_from_alpha(alpha: Series, var: str = "x") -> Series:
    """``a(x) = alpha(2 x^2)``."""
    x = Series.var(var, (var,))
    return compose_univariate(alpha, (x * x).scale(2))


def second_transform_formula(a: Series, trunc: int | None = None, vars=("x", "y2")) -> PlanarField:
    """The closed form ``x^3(1+y2^2) d/dx + (-y2(1 + 2x^2(1+y2^2)) + a(x)(1+y2^2)) d/dy2``.

    Built directly, independent of the blow-up engine.
    """
    require_flat(a)
    x, y = (Series.var(v, vars) for v in vars)
    ax = a.rename({a.vars[0]: vars[0]}).embed(vars)
    u = 1 + y * y
    A = x ** 3 * u
    B = -(y * (1 + (x * x).scale(2) * u)) + ax * u
    F = PlanarField(A, B)
    return F.truncate(trunc) if trunc is not None else F
