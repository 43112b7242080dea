"""The twelve acceptance criteria, each at its stated tolerance and time budget.

Every criterion prints one line ``PASS|FAIL [k] name (seconds)``.  The same
lines are repeated in the pytest terminal summary, so ``pytest -v`` shows
them without ``-s``.  Running this file directly also prints them:

    python3 tests/test_acceptance.py
"""
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from conftest import rand_flat, rand_q, smap  # noqa: E402
from oracles import euler_by_hand, telescoped_z2  # noqa: E402
from properties import (check_chart_coherence, check_conjugation_invariance,  # noqa: E402
                        series_law_cases)
from septool.blowup import ramify_to_xi, second_transform_Ya, seidenberg_reduce  # noqa: E402
from septool.divergence import divergence_cross_check, elizarov_derivative  # noqa: E402
from septool.fields import PlanarField, Tag, check_first_integral, tangent_cone  # noqa: E402
from septool.index import bendixson_index, index_from_tangencies, winding_index  # noqa: E402
from septool.models import (X_a, Y_a, a_from_alpha, center, linear_field,  # noqa: E402
                            second_transform_formula, xi_alpha)
from septool.separatrix import graph_separatrix, separatrix_search, verify_invariance  # noqa: E402
from septool.series import Series  # noqa: E402

GOLDEN = json.loads((Path(__file__).parent / "golden" / "oracle_values.json").read_text())
RESULTS = []

V = ("x", "y")
x, y = Series.var("x", V), Series.var("y", V)
A_CASES = {"0": [0], "x^2": [0, 0, 1], "x^2 + x^3": [0, 0, 1, 1]}
ALPHA_CASES = {"0": [0], "z^2": [0, 0, 1], "z^3": [0, 0, 0, 1]}
Z2 = Series.from_list([0, 0, 1], "z")


def golden_blowup():
    bad = []
    for name, cs in A_CASES.items():
        a = Series.from_list(cs, "x")
        H = second_transform_Ya(a, 12)
        want = GOLDEN["second_transform"][name]
        if smap(H.A) != want["dx"] or smap(H.B) != want["dy2"]:
            bad.append(f"a={name}: oracle")
        if H != second_transform_formula(a, 12):
            bad.append(f"a={name}: closed form")
    return bad


def xi_match():
    bad = []
    T = 16
    for name, cs in ALPHA_CASES.items():
        alpha = Series.from_list(cs, "z")
        xi = ramify_to_xi(second_transform_Ya(a_from_alpha(alpha), 2 * T + 2), alpha, T)
        want = GOLDEN["xi"][name]
        if smap(xi.A) != want["dz"] or smap(xi.B) != want["dw"]:
            bad.append(f"alpha={name}: oracle")
        if xi != xi_alpha(alpha, T).truncate(T):
            bad.append(f"alpha={name}: model")
    return bad


def cone():
    rng = random.Random(101)
    bad = []
    for k in range(10):
        c = tangent_cone(Y_a(rand_flat(rng)))
        if c.polynomial != y ** 3 + x * x * y:
            bad.append(f"case {k}: {c.polynomial}")
        if [(d.kind, d.slope) for d in c.directions] != [("slope", 0)]:
            bad.append(f"case {k}: directions")
    return bad


def uniqueness():
    rng = random.Random(102)
    bad = []
    for k in range(10):
        a = rand_flat(rng)
        rep = separatrix_search(Y_a(a), 12)
        if len(rep.curves) != 1 or rep.uniqueness != "unique":
            bad.append(f"case {k}: {len(rep.curves)} curves")
            continue
        c = rep.curves[0]
        chk = verify_invariance(Y_a(a), c)
        if c.tangent != ("slope", 0) or not chk.residual.is_zero():
            bad.append(f"case {k}: tangent {c.tangent}, residual {chk.residual}")
    return bad


def saddle_node_chain():
    tree = seidenberg_reduce(Y_a(Series.from_list([0, 0, 1], "x")), pursue_weak=1)
    chain = tree.chain(0, 0)
    p1, p2 = chain[1], chain[2]
    bad = []
    if p1.classification.tag is not Tag.SADDLE_NODE:
        bad.append(f"p1 {p1.classification.tag.value}")
    if p2.classification.tag is not Tag.SADDLE_NODE:
        bad.append(f"p2 {p2.classification.tag.value}")
    return bad


def euler():
    z, w = Series.var("z", ("z", "w")), Series.var("w", ("z", "w"))
    s = graph_separatrix(PlanarField(z * z, -w + z), 21)
    hand = euler_by_hand(20)
    bad = [f"n={n}" for n in range(1, 21) if s[n] != hand[n]]
    if [str(c) for c in s.to_list(21)] != GOLDEN["euler"]:
        bad.append("golden")
    return bad


def elizarov_exact():
    res = elizarov_derivative(Z2, 21)
    bad = [f"N={N}" for N in range(2, 21) if res.partial_sums[N] != telescoped_z2(N)]
    if res.limit != Fraction(1, 2) or res.verdict != "nonzero":
        bad.append(f"limit {res.limit} verdict {res.verdict}")
    return bad


def cross_check():
    cc = divergence_cross_check(Z2, Fraction(1, 10), 40)
    bad = []
    if not 0.7 <= cc.gevrey.order <= 1.3:
        bad.append(f"order {cc.gevrey.order:.3f}")
    if cc.gevrey_verdict != "divergent-Gevrey-like":
        bad.append(cc.gevrey_verdict)
    if cc.elizarov.verdict != "nonzero" or not cc.agreement:
        bad.append("no agreement")
    return bad


def convergent_control():
    cc = divergence_cross_check(Series.from_list([0], "z"), Fraction(1, 10), 40)
    bad = []
    if not cc.separatrix.is_zero():
        bad.append("separatrix nonzero")
    if cc.gevrey_verdict != "convergent-like":
        bad.append(cc.gevrey_verdict)
    if cc.elizarov.limit != 0 or any(v != 0 for v in cc.elizarov.partial_sums.values()):
        bad.append("Elizarov sum nonzero")
    return bad


def index_suite():
    bad = []
    for F, want, name in ((center(), 1, "center"), (linear_field(((1, 0), (0, -1))), -1, "saddle")):
        r = winding_index(F)
        if r.index != want or not r.certified:
            bad.append(f"{name}: {r.index}")
    rng = random.Random(110)
    done = 0
    while done < 100:
        m = ((rand_q(rng), rand_q(rng)), (rand_q(rng), rand_q(rng)))
        det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        if det == 0:
            continue
        r = winding_index(linear_field(m))
        if r.index != (1 if det > 0 else -1) or not r.certified:
            bad.append(f"linear {m}: {r.index}")
        done += 1
    if index_from_tangencies(2, 0) != 2:
        bad.append("tangency formula")
    if bendixson_index(0, 4) != -1:
        bad.append("sector formula")
    return bad


def first_integrals():
    X = X_a(Series.from_list([0, 0, 1], "x"), 24)
    r1 = check_first_integral(Series.var("z", X.vars), X)
    C = PlanarField(center().A.with_trunc(24), center().B.with_trunc(24))
    r2 = check_first_integral(x * x + y * y, C)
    bad = []
    for name, r in (("X_a", r1), ("center", r2)):
        if not r.is_zero() or r.trunc is None or r.trunc < 24:
            bad.append(f"{name}: {r} (trunc {r.trunc})")
    # and with the exact fields
    if not check_first_integral(Series.var("z", X_a(Series.from_list([0, 0, 1], "x")).vars),
                                X_a(Series.from_list([0, 0, 1], "x"))).is_zero():
        bad.append("X_a exact")
    return bad


def property_suites():
    n, bad = series_law_cases()
    if n < 300:
        bad.append(f"only {n} series cases")
    return bad + check_chart_coherence(20) + check_conjugation_invariance(50)


CRITERIA = [
    (1, "golden blow-up match", golden_blowup, 1),
    (2, "xi_alpha match", xi_match, 1),
    (3, "tangent cone", cone, 1),
    (4, "separatrix uniqueness", uniqueness, 10),
    (5, "saddle-node chain", saddle_node_chain, 1),
    (6, "Euler oracle", euler, 1),
    (7, "Elizarov exactness", elizarov_exact, 1),
    (8, "divergence cross-check", cross_check, 30),
    (9, "convergent control", convergent_control, 1),
    (10, "index suite", index_suite, 10),
    (11, "first integrals", first_integrals, 1),
    (12, "property suites", property_suites, 60),
]


def run_criterion(k, name, fn, budget):
    t0 = time.perf_counter()
    try:
        bad = fn()
    except Exception as exc:          # a crash is a failure, reported on the line
        bad = [f"{type(exc).__name__}: {exc}"]
    dt = time.perf_counter() - t0
    if dt >= budget:
        bad = bad + [f"over budget ({dt:.2f}s >= {budget}s)"]
    line = f"{'PASS' if not bad else 'FAIL'} [{k:2d}] {name} ({dt:.2f}s, budget {budget}s)"
    if bad:
        line += ": " + "; ".join(bad[:3])
    RESULTS.append(line)
    print(line)
    return bad


@pytest.mark.parametrize("k, name, fn, budget", CRITERIA, ids=[f"c{c[0]:02d}" for c in CRITERIA])
def test_criterion(k, name, fn, budget):
    assert run_criterion(k, name, fn, budget) == []


if __name__ == "__main__":
    failed = sum(bool(run_criterion(*c)) for c in CRITERIA)
    sys.exit(1 if failed else 0)
