"""Exact real-root bookkeeping for univariate rational polynomials.

Polynomials are plain lists of Fractions, lowest degree first.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt


def trim(p):
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p) -> int:
    return len(trim(p)) - 1


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def derivative(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def divmod_poly(a, b):
    a, b = trim(a), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = r[-1] / lead
        q[k] = c
        for i, bc in enumerate(b):
            r[i + k] -= c * bc
        r = trim(r)
    return trim(q), r


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, divmod_poly(a, b)[1]
    if not a:
        return []
    return [c / a[-1] for c in a]


def squarefree_part(p):
    p = trim(p)
    g = gcd_poly(p, derivative(p))
    if len(g) <= 1:
        return p
    return divmod_poly(p, g)[0]


def _integer_coeffs(p):
    den = 1
    for c in p:
        den = den * c.denominator // gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for c in ints:
        g = gcd(g, c)
    return [c // g for c in ints] if g else ints


def _divisors(n: int):
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def rational_roots(p):
    """Distinct rational roots with multiplicities, via the rational root test."""
    p = trim(p)
    if len(p) <= 1:
        return []
    roots = []
    k = 0
    while p and p[0] == 0:
        p = p[1:]
        k += 1
    if k:
        roots.append((Fraction(0), k))
    if len(p) <= 1:
        return roots
    ints = _integer_coeffs(squarefree_part(p))
    found = []
    for num in _divisors(ints[0]):
        for den in _divisors(ints[-1]):
            for cand in (Fraction(num, den), Fraction(-num, den)):
                if cand not in found and evaluate(ints, cand) == 0:
                    found.append(cand)
    for r in sorted(found):
        m = 0
        q = p
        while True:
            quo, rem = divmod_poly(q, [-r, 1])
            if rem:
                break
            q = quo
            m += 1
        roots.append((r, m))
    return sorted(roots)


def sturm_sequence(p):
    p = trim(p)
    seq = [p, derivative(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return [s for s in seq if s]


def _sign_changes(seq, x):
    signs = []
    for s in seq:
        v = evaluate(s, x)
        if v != 0:
            signs.append(v > 0)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p, lo, hi, seq=None):
    """Number of distinct real roots in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return _sign_changes(seq, lo) - _sign_changes(seq, hi)


def root_bound(p) -> Fraction:
    p = trim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p, width=None):
    """Disjoint intervals ``(lo, hi]`` each holding exactly one distinct real root.

    ``width`` optionally bounds the interval width after isolation.
    """
    p = squarefree_part(p)
    if len(p) <= 1:
        return []
    seq = sturm_sequence(p)
    b = root_bound(p)
    out = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_real_roots(p, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(_refine(p, lo, hi, width, seq))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    return sorted(out)


def _refine(p, lo, hi, width, seq):
    if width is None:
        return (lo, hi)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if count_real_roots(p, lo, mid, seq):
            hi = mid
        else:
            lo = mid
    return (lo, hi)


def is_rational_square(q: Fraction) -> bool:
    if q < 0:
        return False
    n, d = q.numerator, q.denominator
    return isqrt(n) ** 2 == n and isqrt(d) ** 2 == d


def rational_sqrt(q: Fraction) -> Fraction:
    if not is_rational_square(q):
        raise ValueError(f"{q} is not the square of a rational")
    return Fraction(isqrt(q.numerator), isqrt(q.denominator))
