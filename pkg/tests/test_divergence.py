import math
from fractions import Fraction
from math import isqrt

import pytest

from oracles import elizarov_sums_sym, telescoped_z2
from septool.divergence import (borel_radius, divergence_cross_check, elizarov_coeffs,
                                elizarov_derivative, gevrey_fit)
from septool.errors import HypothesisViolated, InsufficientData
from septool.series import Series

Z2 = Series.from_list([0, 0, 1], "z")
Z3 = Series.from_list([0, 0, 0, 1], "z")
ZERO = Series.from_list([0], "z")


def euler(N):
    return Series.from_list([0] + [(-1) ** (n - 1) * math.factorial(n - 1) for n in range(1, N)],
                            "z", N)


def synthetic(s, A, N=41):
    """``A^n (n!)^s`` as exact rationals; half-integer powers via integer square roots."""
    cs = [Fraction(0)]
    for n in range(1, N):
        f = math.factorial(n)
        if s == Fraction(1, 2):
            g = isqrt(f)
        else:
            g = f ** int(s)
        cs.append(Fraction(A) ** n * g)
    return Series.from_list(cs, "z", N)


def test_euler_fit():
    rep = gevrey_fit(euler(40))
    assert 0.8 <= rep.order <= 1.2
    assert rep.verdict == "divergent-Gevrey-like"


def test_geometric_fit():
    rep = gevrey_fit(Series.from_list([Fraction(1, 2 ** n) for n in range(40)], "z", 40))
    assert -0.2 <= rep.order <= 0.2
    assert rep.verdict == "convergent-like"


def test_fit_needs_data():
    with pytest.raises(InsufficientData):
        gevrey_fit(Series.zero(("z",), 40))
    with pytest.raises(InsufficientData):
        gevrey_fit(euler(10))


@pytest.mark.parametrize("s", [Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2)])
@pytest.mark.parametrize("A", [Fraction(1, 2), Fraction(1), Fraction(3)])
def test_synthetic_order_recovery(s, A):
    rep = gevrey_fit(synthetic(s, A), (10, 40))
    assert abs(rep.order - float(s)) <= 0.15


@pytest.mark.parametrize("lam", [Fraction(-3), Fraction(1, 1000), Fraction(10 ** 6, 7)])
def test_scale_invariance(lam):
    for c in (euler(40), Series.from_list([Fraction(1, 2 ** n) for n in range(40)], "z", 40)):
        assert gevrey_fit(c.scale(lam)).verdict == gevrey_fit(c).verdict


def test_borel_examples():
    b = borel_radius(euler(40))
    assert b.kind == "finite" and 0.7 < b.radius < 1.5
    b = borel_radius(Series.from_list([0] + [math.factorial(n) ** 2 for n in range(1, 40)], "z", 40))
    assert b.kind == "zero" and b.radius < 0.2
    b = borel_radius(Series.from_list([1] * 40, "z", 40))
    assert b.kind == "entire" and math.isinf(b.radius)
    assert b.to_dict()["radius"] is None


def test_elizarov_coeffs():
    c = elizarov_coeffs(Z2, 12)
    assert c.to_list(12) == [0, 0] + [-1] * 10
    c = elizarov_coeffs(Z3, 12)
    assert c.to_list(12) == [0, 0, 0] + [1] * 9
    assert elizarov_coeffs(ZERO, 12).is_zero()
    with pytest.raises(HypothesisViolated):
        elizarov_coeffs(Series.from_list([0, 1], "z"), 8)


def test_elizarov_z2_telescopes(golden):
    res = elizarov_derivative(Z2, 21)
    for M in range(2, 21):
        assert res.partial_sums[M] == telescoped_z2(M)
        assert str(res.partial_sums[M]) == golden["elizarov"]["z^2"][str(M)]
    assert res.partial_sums[4] == Fraction(59, 120)
    assert res.limit == Fraction(1, 2) and res.verdict == "nonzero"


def test_elizarov_z3_matches_brute_force(golden):
    res = elizarov_derivative(Z3, 21)
    for M in range(2, 21):
        assert str(res.partial_sums[M]) == golden["elizarov"]["z^3"][str(M)]
    assert res.limit == Fraction(-1, 6)
    brute = elizarov_sums_sym([0, 0, 0, 1], 30)
    assert abs(Fraction(str(brute[30])) - res.limit) < Fraction(1, 10 ** 30)


def test_elizarov_zero():
    res = elizarov_derivative(ZERO, 20)
    assert set(res.partial_sums.values()) == {0}
    assert res.limit == 0 and res.verdict == "zero"


def test_elizarov_truncated_alpha_uses_tail_bound():
    alpha = Series.from_list([0, 0, 1, Fraction(1, 3), Fraction(1, 9)], "z", 5)
    res = elizarov_derivative(alpha, 5)
    assert res.limit is None
    assert res.tail_bound > 0


def test_cross_check_agrees_for_z2():
    cc = divergence_cross_check(Z2, Fraction(1, 10), 40)
    assert 0.7 <= cc.gevrey.order <= 1.3
    assert cc.gevrey_verdict == "divergent-Gevrey-like"
    assert cc.elizarov.verdict == "nonzero" and cc.agreement


def test_cross_check_convergent_controls():
    for alpha, delta in ((ZERO, Fraction(1, 10)), (Z2, Fraction(0))):
        cc = divergence_cross_check(alpha, delta, 40)
        assert cc.separatrix.is_zero()
        assert cc.gevrey_verdict == "convergent-like"
        assert cc.elizarov.limit == 0 and cc.agreement


def test_weak_separatrix_coefficients():
    # the part linear in delta solves s_n = -n s_{n-1}, s_2 = delta; the cubic
    # term of the field first reaches s_6
    delta = Fraction(1, 10)
    cc = divergence_cross_check(Z2, delta, 12)
    s = cc.separatrix
    for n in range(2, 6):
        assert s[n] == delta * Fraction((-1) ** n * math.factorial(n), 2)
    assert s[6] != delta * 360
