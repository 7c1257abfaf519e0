import math

import pytest
from hypothesis import given, settings, strategies as st
from sympy.functions.combinatorial.numbers import kronecker_symbol

from siegeleis.characters import DirichletCharacter, kronecker, kronecker_primitive, twist, unit_group_generators
from siegeleis.exactnum import cyclotomic_root_of_unity


@settings(max_examples=200, deadline=None)
@given(st.integers(-300, 300), st.integers(-300, 300))
def test_kronecker_matches_sympy(d, m):
    assert kronecker(d, m) == kronecker_symbol(d, m)


def all_characters(M):
    gens = unit_group_generators(M)
    import itertools
    for exps in itertools.product(*(range(g.order) for g in gens)):
        yield DirichletCharacter.from_exponents(M, exps)


@pytest.mark.parametrize("M", [1, 3, 4, 5, 7, 8, 9, 12, 15, 16, 21])
def test_group_structure(M):
    chars = list(all_characters(M))
    assert len(chars) == sum(1 for a in range(1, M + 1) if math.gcd(a, M) == 1)
    units = [a for a in range(1, M + 1) if math.gcd(a, M) == 1]
    for chi in chars:
        # multiplicativity and periodicity
        for a in units[:6]:
            for b in units[:6]:
                assert chi(a * b) == chi(a) * chi(b)
            assert chi(a + M) == chi(a)
        # orthogonality
        total = sum((chi(a) for a in units), cyclotomic_root_of_unity(1, 0) * 0)
        assert (total == 0) != chi.is_trivial() or M == 1


def brute_conductor(chi):
    M = chi.modulus
    for f in sorted(d for d in range(1, M + 1) if M % d == 0):
        ok = True
        for a in range(1, M + 1):
            for b in range(1, M + 1):
                if math.gcd(a, M) == 1 and math.gcd(b, M) == 1 and (a - b) % f == 0 and chi.angle(a) != chi.angle(b):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return f


@pytest.mark.parametrize("M", [8, 9, 12, 15, 16, 20, 21])
def test_conductor_against_brute_force(M):
    for chi in all_characters(M):
        assert chi.conductor == brute_conductor(chi)
        prim = chi.primitive()
        assert prim.modulus == chi.conductor
        for a in range(1, M):
            if math.gcd(a, M) == 1:
                assert prim(a) == chi(a)


def test_parse_and_string_round_trip():
    chi = DirichletCharacter.parse("7:3^1")
    assert chi.order == 6
    assert chi.parity() == -1
    assert chi.conductor == 7
    assert chi(9) == cyclotomic_root_of_unity(3, 1)
    assert DirichletCharacter.parse(chi.spec_string()) == chi
    assert DirichletCharacter.from_json(chi.to_json()) == chi
    with pytest.raises(ValueError):
        DirichletCharacter.parse("7:2^1")


def test_generators_of_two_power():
    gens = unit_group_generators(16)
    assert [(g.local_value, g.order) for g in gens] == [(5, 4), (15, 2)]


def test_kronecker_characters():
    k4 = kronecker_primitive(-4)
    assert k4.parity() == -1 and k4.conductor == 4
    k3 = kronecker_primitive(-3)
    assert not k3.square_locally_nontrivial()
    for a in range(1, 50):
        if math.gcd(a, 12) == 1:
            assert twist(k3, k4)(a) == kronecker(12, a)
    assert twist(k3, k4) == kronecker_primitive(12)


def test_power_and_induction():
    chi = DirichletCharacter.parse("7:3^1")
    assert (chi ** 6).is_trivial()
    assert (chi ** 2).order == 3
    lifted = chi.induce(21)
    assert lifted.conductor == 7
    assert lifted(2) == chi(2)
    assert lifted(3) == 0 * chi(3)
