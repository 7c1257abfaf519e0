import cmath
import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from siegeleis.errors import Degenerate, EnumerationTooLarge, EvenPrime
from siegeleis.quadforms import HalfIntegralMatrix, conjugate, random_unimodular, scale
from siegeleis.siegelseries import (
    F_closed_rank1,
    F_closed_rank2,
    F_from_b,
    b_series_bruteforce,
    cofactor_series,
    expected_degree,
    functional_equation_check,
    siegel_series_poly,
    spoly_identity_check,
)


def minors_gcd(M, n):
    g = 0
    cols = len(M[0])
    for cs in itertools.combinations(range(cols), n):
        sub = [[M[i][c] for c in cs] for i in range(n)]
        g = math.gcd(g, int(round(_det(sub))))
    return g


def _det(A):
    n = len(A)
    if n == 1:
        return A[0][0]
    return sum((-1) ** j * A[0][j] * _det([row[:j] + row[j + 1:] for row in A[1:]]) for j in range(n))


def oracle_b(T: HalfIntegralMatrix, l: int, e: int) -> list[int]:
    """Coefficients 0..e of b_l(T;X) from the defining sum, with mu(R) = l^(ne) / gcd of maximal minors of [A | l^e I]."""
    n = T.size
    L = l ** e
    ent = T.entries()
    coeffs = [0j] * (e + 1)
    slots = [(i, j) for i in range(n) for j in range(i, n)]
    for vals in itertools.product(range(L), repeat=len(slots)):
        A = [[0] * n for _ in range(n)]
        for (i, j), v in zip(slots, vals):
            A[i][j] = A[j][i] = v
        aug = [A[i] + [L if k == i else 0 for k in range(n)] for i in range(n)]
        mu = Fraction(L ** n, minors_gcd(aug, n))
        m = round(math.log(mu, l)) if mu > 1 else 0
        assert l ** m == mu
        if m > e:
            continue
        tr = sum(ent[i][j] * A[j][i] for i in range(n) for j in range(n))
        coeffs[m] += cmath.exp(2j * cmath.pi * float(Fraction(tr) / L))
    out = [round(c.real) for c in coeffs]
    assert all(abs(c - o) < 1e-6 for c, o in zip(coeffs, out))
    return out


CASES = [
    ("1:2", 2, 3), ("1:6", 3, 2), ("1:18", 3, 3), ("1:8", 2, 3),
    ("2:2,1,2", 3, 2), ("2:2,0,2", 2, 2), ("2:2,0,18", 3, 2), ("2:4,2,4", 2, 2), ("2:2,1,4", 7, 1),
]


@pytest.mark.parametrize("key,l,e", CASES)
def test_bruteforce_matches_defining_sum(key, l, e):
    T = HalfIntegralMatrix.from_key(key)
    got = b_series_bruteforce(T, l, e).coeffs
    assert [int(c) for c in got] == oracle_b(T, l, e)


def test_rank_one_b_at_unit():
    # b_l([1]) = 1 - X at l = 2 and l = 3, so F = 1
    for l in (2, 3):
        assert list(b_series_bruteforce(HalfIntegralMatrix.diagonal([1]), l, 3).coeffs) == [1, -1, 0, 0]
        assert F_from_b(HalfIntegralMatrix.diagonal([1]), l).coeffs == (1,)


@pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6, 7, 9, 12, 18, 27])
@pytest.mark.parametrize("l", [2, 3])
def test_rank_one_closed_form(t, l):
    T = HalfIntegralMatrix.diagonal([t])
    assert F_from_b(T, l) == F_closed_rank1(t, l)
    assert F_closed_rank1(t, l).evaluate(1) == sum(l ** i for i in range(expected_degree(T, l) + 1))


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.integers(-8, 8), st.integers(1, 8), st.sampled_from([3, 5]))
def test_rank_two_closed_form_random(a, b, c, l):
    T = HalfIntegralMatrix.from_doubled([[2 * a, b], [b, 2 * c]])
    if T.det <= 0:
        return
    try:
        brute = F_from_b(T, l, budget=1 << 21)
    except EnumerationTooLarge:
        return
    assert F_closed_rank2(T, l) == brute


def test_rank_two_examples():
    assert F_from_b(HalfIntegralMatrix.diagonal([1, 9]), 3).coeffs == (1, 3, 27)
    assert F_from_b(HalfIntegralMatrix.from_doubled([[4, 2], [2, 4]]), 2).coeffs == (1, 6, 8)
    assert F_from_b(HalfIntegralMatrix.diagonal([2, 2]), 2).coeffs == (1, 4, 8)
    assert F_from_b(HalfIntegralMatrix.diagonal([1, 4]), 2).coeffs == (1, 0, 8)
    with pytest.raises(EvenPrime):
        F_closed_rank2(HalfIntegralMatrix.diagonal([1, 1]), 2)


def test_rank_three_examples():
    I3 = HalfIntegralMatrix.identity(3)
    assert F_from_b(I3, 2).coeffs == (1, 0, -16)
    assert siegel_series_poly(I3, 3).coeffs == (1,)
    assert functional_equation_check(I3, 2, F_from_b(I3, 2))


def test_functional_equation_and_degree_random():
    rng = random.Random(7)
    done = 0
    while done < 25:
        n = rng.randint(1, 3)
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * rng.randint(1, 6)
            for j in range(i):
                G[i][j] = G[j][i] = rng.randint(-3, 3)
        T = HalfIntegralMatrix.from_doubled(G)
        if T.det <= 0 or not T.is_psd():
            continue
        l = rng.choice([2, 3, 5])
        try:
            F = F_from_b(T, l)
        except EnumerationTooLarge:
            continue
        assert F.coeffs[0] == 1
        assert F.degree == expected_degree(T, l)
        assert functional_equation_check(T, l, F)
        C = conjugate(T, random_unimodular(n, rng))
        assert siegel_series_poly(C, l) == F
        done += 1


def test_functional_equation_detects_wrong_polynomial():
    T = HalfIntegralMatrix.diagonal([1, 9])
    from siegeleis.siegelseries import SiegelSeriesPoly
    assert not functional_equation_check(T, 3, SiegelSeriesPoly((1, 3, 26), 3, 2))


def test_cofactor_and_degenerate():
    assert cofactor_series(HalfIntegralMatrix.diagonal([1]), 3, 3) == [1, -1, 0]
    with pytest.raises(Degenerate):
        b_series_bruteforce(HalfIntegralMatrix.diagonal([1, 0]), 3, 1)
    with pytest.raises(EnumerationTooLarge):
        b_series_bruteforce(HalfIntegralMatrix.identity(3), 2, 6, budget=1000)


@pytest.mark.parametrize("key", ["1:2", "1:4", "1:6", "2:2,1,2", "2:2,0,2", "2:2,1,4"])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_stabilizer_identity(key, p):
    T = HalfIntegralMatrix.from_key(key)
    try:
        assert spoly_identity_check(T, p)
    except EnumerationTooLarge:
        pytest.skip("enumeration over budget")


def test_unit_scaling_invariance():
    rng = random.Random(11)
    done = 0
    while done < 50:
        n = rng.randint(1, 3)
        G = [[0] * n for _ in range(n)]
        for i in range(n):
            G[i][i] = 2 * rng.randint(1, 5)
            for j in range(i):
                G[i][j] = G[j][i] = rng.randint(-2, 2)
        T = HalfIntegralMatrix.from_doubled(G)
        if T.det <= 0 or not T.is_psd():
            continue
        l = rng.choice([3, 5])
        u = rng.choice([v for v in (2, 4, 7, 8, 11) if v % l])
        try:
            assert F_from_b(scale(T, u), l) == F_from_b(T, l)
        except EnumerationTooLarge:
            continue
        done += 1


def test_rank_three_stabilizer_identity_is_out_of_reach():
    # F_3(27 * I_3) has degree v_3(4 * 27^3) = 9, so the defining sum runs over 3^(9*6) matrices
    from siegeleis.siegelseries import enumeration_size
    T = scale(HalfIntegralMatrix.identity(3), 27)
    assert expected_degree(T, 3) == 9
    assert enumeration_size(3, 3, 9) == 3 ** 54
    with pytest.raises(EnumerationTooLarge):
        spoly_identity_check(HalfIntegralMatrix.identity(3), 3)
