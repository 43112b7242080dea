"""Independent reference computations.

Nothing here imports the blow-up, separatrix, index or divergence code.
The symbolic parts go through sympy with plain expressions; the numeric
parts use floats.  ``freeze_oracles.py`` stores their outputs under
``golden/`` and the tests compare the package against those files.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import sympy as sp

X, Y, Y1, Y2, Z, W, T = sp.symbols("x y y1 y2 z w t")


# -- conversions -------------------------------------------------------------

def coeff_map(expr, gens, below=None) -> dict:
    """``{"i,j": "p/q"}`` for a polynomial expression, dropping total degree >= below."""
    expr = sp.expand(expr)
    if expr == 0:
        return {}
    out = {}
    for mon, c in sp.Poly(expr, *gens).terms():
        if below is not None and sum(mon) >= below:
            continue
        c = sp.Rational(c)
        out[",".join(map(str, mon))] = f"{c.p}" if c.q == 1 else f"{c.p}/{c.q}"
    return out


def trunc_expr(expr, gens, n):
    expr = sp.expand(expr)
    if expr == 0:
        return expr
    return sum((c * sp.Mul(*[g ** k for g, k in zip(gens, mon)])
                for mon, c in sp.Poly(expr, *gens).terms() if sum(mon) < n), sp.Integer(0))


def geometric_inverse(u, gens, n):
    """``1/u`` to total degree ``n`` by the geometric series in ``u - u(0)``."""
    c0 = u.subs({g: 0 for g in gens})
    r = sp.expand(u / c0 - 1)
    acc, term = sp.Integer(1), sp.Integer(1)
    for _ in range(n):
        term = trunc_expr(-term * r, gens, n)
        if term == 0:
            break
        acc += term
    return sp.expand(acc / c0)


# -- the worked example, by hand ----------------------------------------------

def Ya_sym(a_coeffs):
    a = sum(sp.Rational(c) * X ** i for i, c in enumerate(a_coeffs))
    A = Y ** 2 + X ** 4
    B = -X * Y + X ** 3 * a + sp.cancel(a / X) * Y ** 2
    return sp.expand(A), sp.expand(B), a


def _strip_x(A, B, x):
    k = min(min(m[0] for m in sp.Poly(e, x).monoms()) for e in (A, B) if e != 0)
    return sp.expand(sp.cancel(A / x ** k)), sp.expand(sp.cancel(B / x ** k))


def x_chart(A, B, x, y, y_new):
    """``y = x * y_new``: ``x' = A``, ``y_new' = (B - y_new A)/x``, then the divisor power."""
    A1 = sp.expand(A.subs(y, x * y_new))
    B1 = sp.expand(sp.cancel((B.subs(y, x * y_new) - y_new * A1) / x))
    return _strip_x(A1, B1, x)


def second_transform_sym(a_coeffs):
    A, B, _ = Ya_sym(a_coeffs)
    A1, B1 = x_chart(A, B, X, Y, Y1)
    A2, B2 = x_chart(A1, B1, X, Y1, Y2)
    return A2, B2


def display_sym(a_coeffs):
    a = sum(sp.Rational(c) * X ** i for i, c in enumerate(a_coeffs))
    return (sp.expand(X ** 3 * (1 + Y2 ** 2)),
            sp.expand(-Y2 * (1 + 2 * X ** 2 * (1 + Y2 ** 2)) + a * (1 + Y2 ** 2)))


def xi_sym(alpha_coeffs, n):
    """Divide the second transform by ``1 + y2^2`` and put ``z = 2 x^2``, ``w = y2``."""
    a = [0] * (2 * len(alpha_coeffs) + 1)
    for k, c in enumerate(alpha_coeffs):
        a[2 * k] = sp.Rational(c) * 2 ** k
    A2, B2 = second_transform_sym(a)
    inv = geometric_inverse(1 + Y2 ** 2, (X, Y2), 2 * n + 2)
    A = trunc_expr(A2 * inv, (X, Y2), 2 * n + 2)
    B = trunc_expr(B2 * inv, (X, Y2), 2 * n + 2)
    zdot = sp.expand(4 * X * A)

    def ramify(e):
        out = sp.Integer(0)
        for (i, j), c in sp.Poly(e, X, Y2).terms():
            assert i % 2 == 0
            out += c * (Z / 2) ** (i // 2) * W ** j
        return sp.expand(out)

    return trunc_expr(ramify(zdot), (Z, W), n), trunc_expr(ramify(B), (Z, W), n)


def xi_formula_sym(alpha_coeffs, n):
    alpha = sum(sp.Rational(c) * Z ** k for k, c in enumerate(alpha_coeffs))
    inv = geometric_inverse(1 + W ** 2, (Z, W), n)
    B = -W * (1 + Z) + W ** 3 * inv + alpha
    return trunc_expr(Z ** 2, (Z, W), n), trunc_expr(B, (Z, W), n)


# -- sequences -------------------------------------------------------------------

def euler_by_hand(n):
    """``s_1 = 1``, ``s_k = -(k-1) s_{k-1}``."""
    s = [Fraction(0), Fraction(1)]
    for k in range(2, n + 1):
        s.append(-(k - 1) * s[-1])
    return s


def elizarov_sums_sym(alpha_coeffs, M):
    """Partial sums ``-sum_{k=2}^{m} c_k k/(k+1)!`` with ``c`` from sympy's series."""
    alpha = sum(sp.Rational(c) * Z ** k for k, c in enumerate(alpha_coeffs))
    ser = sp.series(-alpha.subs(Z, -Z) / (1 - Z), Z, 0, M + 1).removeO()
    c = [ser.coeff(Z, k) for k in range(M + 1)]
    out, acc = {}, sp.Integer(0)
    for k in range(2, M + 1):
        acc -= c[k] * sp.Rational(k, sp.factorial(k + 1))
        out[k] = acc
    return out


def telescoped_z2(M):
    return Fraction(1, 2) - Fraction(1, math.factorial(M + 1))


# -- numerics ------------------------------------------------------------------------

def float_winding(f, r, samples=100_000):
    """Degree of ``f/|f|`` on the circle by summing wrapped angle increments."""
    total = 0.0
    prev = None
    for k in range(samples + 1):
        th = 2 * math.pi * k / samples
        a, b = f(r * math.cos(th), r * math.sin(th))
        ang = math.atan2(b, a)
        if prev is not None:
            d = ang - prev
            d = (d + math.pi) % (2 * math.pi) - math.pi
            total += d
        prev = ang
    return round(total / (2 * math.pi))


def linear_resonance_brute(m):
    """Classification of a rational 2x2 linear part by sympy eigenvalues.

    Returns one of the classifier's tag names.
    """
    M = sp.Matrix(m)
    if all(v == 0 for v in M):
        return "ResonantOrDegenerate"
    ev = list(M.eigenvals(multiple=True))
    if any(not sp.im(e).is_zero for e in ev):
        return "ComplexEigenvalues"
    l1, l2 = ev
    if l1 == 0 and l2 == 0:
        return "ResonantOrDegenerate"
    if l1 == 0 or l2 == 0:
        return "SaddleNode"
    ratio = sp.nsimplify(l1 / l2)
    if ratio.is_rational and ratio > 0:
        return "ResonantOrDegenerate"
    return "SimpleTwoSeparatrix"


def complex_winding(poly_z, conj=False, r=0.25, samples=20_000):
    """Winding of ``p(z)`` or ``conj(p(z))`` around 0 on ``|z| = r``."""
    total = 0.0
    prev = None
    for k in range(samples + 1):
        v = poly_z(r * cmath.exp(2j * math.pi * k / samples))
        if conj:
            v = v.conjugate()
        ang = cmath.phase(v)
        if prev is not None:
            total += (ang - prev + math.pi) % (2 * math.pi) - math.pi
        prev = ang
    return round(total / (2 * math.pi))
