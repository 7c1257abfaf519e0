"""Dirichlet L-values at non-positive integers through generalized Bernoulli numbers."""

from __future__ import annotations

import math
import threading
from fractions import Fraction
from functools import lru_cache

from .characters import DirichletCharacter
from .errors import PoleAtOne
from .exactnum import CyclotomicNumber, as_cyclotomic

_lock = threading.Lock()
_bernoulli_memo: list[Fraction] = [Fraction(1)]


def bernoulli(k: int) -> Fraction:
    """B_k with B_1 = -1/2."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    with _lock:
        memo = _bernoulli_memo
        while len(memo) <= k:
            m = len(memo)
            # sum_{j<=m} C(m+1, j) B_j = 0
            s = sum(math.comb(m + 1, j) * memo[j] for j in range(m))
            memo.append(-s / (m + 1))
        return memo[k]


def bernoulli_poly(k: int, x: Fraction) -> Fraction:
    """B_k(x) = sum_j C(k, j) B_j x^(k-j)."""
    x = Fraction(x)
    return sum((math.comb(k, j) * bernoulli(j) * x ** (k - j) for j in range(k + 1)), Fraction(0))


@lru_cache(maxsize=None)
def gen_bernoulli(k: int, chi: DirichletCharacter) -> CyclotomicNumber:
    """B_{k,chi} = M^(k-1) sum_{a=1}^{M} chi(a) B_k(a/M), M the modulus of chi."""
    if k < 1:
        raise ValueError("k must be positive")
    M = chi.modulus
    n = chi.order
    buckets = [Fraction(0)] * n
    for a in range(1, M + 1):
        j = chi.exponent(a)
        if j is None:
            continue
        buckets[j] += bernoulli_poly(k, Fraction(a, M))
    scale = Fraction(M) ** (k - 1)
    return CyclotomicNumber.from_poly(n, [scale * b for b in buckets])


def L_at_negative(k: int, chi: DirichletCharacter) -> CyclotomicNumber:
    """L(1-k, chi) = -B_{k,chi}/k."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1 and chi.modulus == 1:
        raise PoleAtOne("L(0, chi) requested for the trivial character")
    return -gen_bernoulli(k, chi) / k


def L_depleted(k: int, chi: DirichletCharacter, p: int) -> CyclotomicNumber:
    """(1 - chi(p) p^(k-1)) L(1-k, chi)."""
    val = L_at_negative(k, chi)
    return (1 - chi(p) * Fraction(p) ** (k - 1)) * val


def euler_factor_product(k: int, chi: DirichletCharacter, primes) -> CyclotomicNumber:
    """prod_l (1 - chi(l) l^(k-1)) over the given primes."""
    out = as_cyclotomic(1)
    for l in primes:
        out = out * (1 - chi(l) * Fraction(l) ** (k - 1))
    return out
