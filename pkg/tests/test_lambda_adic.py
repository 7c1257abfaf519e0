import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from siegeleis import lambda_adic as la
from siegeleis.characters import DirichletCharacter
from siegeleis.eisenstein import EisensteinParams, stabilized_coefficient
from siegeleis.errors import InvalidParams, NotAUnit, NotOnePlusP, ValidationFailed
from siegeleis.lambda_adic import (
    B_poly,
    B_poly_exact,
    LambdaElement,
    PadicInt,
    binomial_series,
    dirichlet_Lbar_series,
    embed_rational,
    integral_lambda_coefficient,
    lambda_coefficient,
    s_of,
    teichmuller,
)
from siegeleis.quadforms import HalfIntegralMatrix

TRIVIAL = DirichletCharacter.trivial()


@pytest.mark.parametrize("p", [3, 5, 7, 13])
def test_teichmuller(p):
    M = 10
    for x in range(1, 3 * p):
        if x % p == 0:
            continue
        y = teichmuller(x, p, M)
        assert pow(y.residue, p - 1, p ** M) == 1
        assert (y.residue - x) % p == 0
    with pytest.raises(NotAUnit):
        teichmuller(p, p, M)


def test_padic_precision_rules():
    a = PadicInt(5, 25 + 3, 4)
    b = PadicInt(5, 10, 3)  # valuation 1
    assert (a * b).precision == min(4 + 1, 3 + 0)
    assert (a + b).precision == 3
    assert a.inverse() * a == PadicInt(5, 1, 4) or (a.inverse() * a).agrees_with(1)
    assert embed_rational(Fraction(1, 3), 5, 6).residue * 3 % 5 ** 6 == 1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 8), st.integers(0, 10 ** 8), st.sampled_from([3, 5, 7]))
def test_s_is_a_homomorphism(a, b, p):
    M = 12
    x = PadicInt(p, 1 + p * a, M)
    y = PadicInt(p, 1 + p * b, M)
    assert s_of(x * y).agrees_with(s_of(x) + s_of(y))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_s_of_powers_of_generator(p):
    for m in (0, 1, 2, 7, 25):
        assert s_of(PadicInt(p, (1 + p) ** m, 12)).agrees_with(m)
    with pytest.raises(NotOnePlusP):
        s_of(PadicInt(p, 2, 8))


def test_binomial_series_integer_exponent():
    ser = binomial_series(PadicInt(5, 7, 10), 9)
    assert [c.residue for c in ser.coeffs] == [math.comb(7, k) for k in range(9)]
    assert ser.coeffs[5].precision == 9  # v_5(5!) = 1


def test_binomial_series_evaluates_to_power():
    p, s = 5, 1234
    ser = binomial_series(PadicInt(p, s, 12), 10)
    val = ser.evaluate(p)
    assert val.agrees_with((1 + p) ** s)


def test_compose_identity_and_shift():
    p = 5
    f = LambdaElement.from_ints(p, [0, 1], 6, 8)  # f = X
    g = f.compose(1, 2, 6)  # (1+p)^-1 (1+X)^2 - 1
    u = Fraction(1, 1 + p)
    want = [u - 1, 2 * u, u] + [0, 0, 0]
    assert all(c.agrees_with(embed_rational(w, p, 8)) for c, w in zip(g.coeffs, want))


def exact_depleted_zeta(k, p):
    """L^{(p)}(1-k, 1) from sympy's Bernoulli numbers."""
    B = Fraction(str(sympy.bernoulli(k)))
    return (1 - Fraction(p) ** (k - 1)) * (-B / k)


@pytest.mark.parametrize("b", [2, 4])
def test_Lbar_far_weights_against_sympy(b):
    p = 7
    ser = dirichlet_Lbar_series(TRIVIAL, b, p, 5, 6)
    for j in (40, 77):
        k = b + j * (p - 1)
        val = ser.evaluate((1 + p) ** k - 1)
        assert val.precision >= 4
        assert val.agrees_with(embed_rational(exact_depleted_zeta(k, p), p, 20))


def test_Lbar_trivial_branch_has_simple_pole_structure():
    p = 5
    ser = dirichlet_Lbar_series(TRIVIAL, 0, p, 5, 6)
    for k in (4, 44, 104):
        want = ((1 + p) ** k - 1) * exact_depleted_zeta(k, p)
        assert ser.evaluate((1 + p) ** k - 1).agrees_with(embed_rational(want, p, 20))
    # X * zeta_p(X) has a unit constant term
    assert ser.coeffs[0].residue % p != 0


def test_Lbar_with_nontrivial_theta():
    chi = DirichletCharacter.parse("7:3^2")  # order 3, divides 12
    p = 13
    ser = dirichlet_Lbar_series(chi, 0, p, 4, 5)
    from siegeleis.lvalues import L_depleted
    for k in (12, 60):
        want = la.embed_cyclotomic(L_depleted(k, chi, p), p, 20)
        assert ser.evaluate((1 + p) ** k - 1).agrees_with(want)


def test_Lbar_rejects_bad_orders():
    with pytest.raises(InvalidParams):
        dirichlet_Lbar_series(DirichletCharacter.parse("7:3^1"), 0, 5, 4, 4)
    with pytest.raises(InvalidParams):
        dirichlet_Lbar_series(TRIVIAL, 0, 2, 4, 4)


def test_held_out_validation_is_enforced(monkeypatch):
    real = la._sample_value

    def corrupt(branch, p, k):
        v = real(branch, p, k)
        return v + 1 if k > 38 else v  # samples are k = 2, 6, ..., 38; held-out 42, 46

    monkeypatch.setattr(la, "_sample_value", corrupt)
    monkeypatch.setattr(la, "_lbar_cache", {})
    with pytest.raises(ValidationFailed):
        dirichlet_Lbar_series(TRIVIAL, 2, 5, 5, 6)


def test_B_poly():
    p = 5
    assert B_poly_exact(1, p)[0] == [0, 1]
    for n in range(1, 6):
        first, second = B_poly_exact(n, p)
        assert first == second
        assert first[0] == 0
    two = B_poly(2, p, 6, 8)
    assert two.coeffs[0].residue == 0


def test_pole_cancellation_genus_one_constant_term():
    p = 5
    T = HalfIntegralMatrix.zero(1)
    frac = lambda_coefficient(T, 1, TRIVIAL, 0, p, 5, 6)
    assert frac.pole_order == 1
    integ = integral_lambda_coefficient(T, 1, TRIVIAL, 0, p, 5, 6)
    half = dirichlet_Lbar_series(TRIVIAL, 0, p, 11, 6).truncate(5).scale(embed_rational(Fraction(1, 2), p, 10))
    assert integ.agrees_with(half)


@pytest.mark.parametrize("n", [1, 2])
def test_specializations_match_exact_coefficients(n):
    p, a = 5, 2
    for key in (["1:0", "1:2", "1:6"] if n == 1 else ["2:0,0,0", "2:2,1,2", "2:2,0,6", "2:4,2,6"]):
        T = HalfIntegralMatrix.from_key(key)
        frac = lambda_coefficient(T, n, TRIVIAL, a, p, 6, 8)
        for k in (6, 10, 14, 18):
            exact = stabilized_coefficient(EisensteinParams(n, k), p, T)
            ok, prec = frac.matches_exact(k, exact)
            assert ok and prec >= 4, (key, k, prec)


def test_lambda_rejects_bad_input():
    T = HalfIntegralMatrix.zero(1)
    with pytest.raises(InvalidParams):
        lambda_coefficient(T, 1, TRIVIAL, 2, 2, 4, 4)
    with pytest.raises(InvalidParams):
        lambda_coefficient(T, 1, DirichletCharacter.parse("7:3^1"), 1, 7, 4, 4)
    with pytest.raises(InvalidParams):
        lambda_coefficient(T, 2, TRIVIAL, 2, 5, 4, 4)
