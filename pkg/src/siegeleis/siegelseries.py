"""Local Siegel series b_l(S;X) by direct enumeration, and the polynomials F_l(S;X).

The brute-force path sums e_l(tr(SR)) over R = A / l^e with A symmetric mod
l^e.  The l-part of mu_R is the largest denominator among the minors of R,
i.e. max_j (j*e - delta_j(A)) with delta_j the minimal valuation of the j x j
minors of A (determinantal divisors).  Everything is vectorised with numpy
in chunks, and the phases for each power of X are collected into a
cyclotomic number of conductor l^e, which must come out rational.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import Degenerate, EnumerationTooLarge, EvenPrime, NonIntegralQuotient
from .exactnum import (
    CyclotomicNumber,
    mat_inverse,
    poly_mul,
    poly_trim,
    rational_from_cyclotomic,
    series_div,
    valuation,
)
from .quadforms import HalfIntegralMatrix, det_data, eta, xi_local

DEFAULT_BUDGET = 1 << 22
_CHUNK = 1 << 17


@dataclass(frozen=True)
class SiegelSeriesPoly:
    """F_l(S;X) with integer coefficients, constant term first."""

    coeffs: tuple[int, ...]
    prime: int
    rank: int

    @property
    def degree(self) -> int:
        return len(poly_trim(self.coeffs)) - 1

    def evaluate(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, SiegelSeriesPoly):
            return poly_trim(self.coeffs) == poly_trim(other.coeffs)
        return NotImplemented

    def __hash__(self):
        return hash(tuple(poly_trim(self.coeffs)))

    def to_json(self) -> list[int]:
        return [int(c) for c in poly_trim(self.coeffs)]


@dataclass(frozen=True)
class BSeriesPrefix:
    coeffs: tuple[Fraction, ...]

    @property
    def length(self) -> int:
        return len(self.coeffs)


# ---------------------------------------------------------------------------
# degree bookkeeping

def expected_degree(T: HalfIntegralMatrix, l: int) -> int:
    dd = det_data(T)
    if T.size % 2 == 0:
        return 2 * valuation(dd.cond, l)
    return valuation(dd.bigD, l)


def cofactor_series(T: HalfIntegralMatrix, l: int, n: int) -> list[Fraction]:
    """First n coefficients of b_l / F_l as a power series."""
    r = T.size
    num = [1, -1]
    for i in range(1, r // 2 + 1):
        num = poly_mul(num, [1, 0, -(l ** (2 * i))])
    if r % 2:
        return [Fraction(c) for c in (list(num) + [0] * n)[:n]]
    x = xi_local((-1) ** (r // 2) * T.det, l)
    den = [1, -x * l ** (r // 2)] if x else [1]
    return series_div(num, den, n)


# ---------------------------------------------------------------------------
# brute force

def enumeration_size(r: int, l: int, e: int) -> int:
    return l ** (e * r * (r + 1) // 2)


def _vector_valuation(x: np.ndarray, l: int, cap: int) -> np.ndarray:
    v = np.zeros(x.shape, dtype=np.int64)
    q = 1
    for _ in range(cap):
        q *= l
        v += (x % q == 0)
    return v


def _vector_det(rows: list[list[np.ndarray]]) -> np.ndarray:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = 0
    for j in range(n):
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * _vector_det(minor)
        acc = acc + term if j % 2 == 0 else acc - term
    return acc


def mu_valuations(A: list[list[np.ndarray]], l: int, e: int) -> np.ndarray:
    """val_l(mu_R) for R = A / l^e, vectorised over the trailing axis."""
    r = len(A)
    best = np.zeros(A[0][0].shape, dtype=np.int64)
    for j in range(1, r + 1):
        cap = j * e
        delta = np.full(best.shape, cap, dtype=np.int64)
        for rows in itertools.combinations(range(r), j):
            for cols in itertools.combinations(range(r), j):
                if cols < rows:
                    continue  # symmetric: the transposed minor is equal
                m = _vector_det([[A[i][k] for k in cols] for i in rows])
                delta = np.minimum(delta, _vector_valuation(m, l, cap))
        best = np.maximum(best, cap - delta)
    return best


def b_series_bruteforce(T: HalfIntegralMatrix, l: int, m_max: int, budget: int = DEFAULT_BUDGET) -> BSeriesPrefix:
    """Coefficients 0..m_max of b_l(T;X) straight from the defining sum."""
    r = T.size
    if T.det == 0:
        raise Degenerate("singular matrix")
    if m_max < 0:
        raise ValueError("m_max must be nonnegative")
    e = m_max
    L = l ** e
    slots = [(i, j) for i in range(r) for j in range(i, r)]
    total = L ** len(slots)
    if total > budget:
        raise EnumerationTooLarge(f"{total} matrices exceed the budget {budget}")
    G = T.doubled
    weights = [(G[i][i] // 2) if i == j else G[i][j] for i, j in slots]
    counts = np.zeros((e + 1) * L, dtype=np.int64)
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        digits = []
        rest = idx
        for _ in slots:
            digits.append(rest % L)
            rest = rest // L
        A = [[None] * r for _ in range(r)]
        for (i, j), d in zip(slots, digits):
            A[i][j] = A[j][i] = d
        phase = np.zeros_like(idx)
        for w, d in zip(weights, digits):
            if w:
                phase = (phase + (w % L) * d) % L
        mval = mu_valuations(A, l, e)
        keep = mval <= e
        counts += np.bincount(mval[keep] * L + phase[keep], minlength=(e + 1) * L)
    out = []
    for m in range(e + 1):
        z = CyclotomicNumber.from_exponent_counts(L, counts[m * L:(m + 1) * L].tolist())
        out.append(rational_from_cyclotomic(z))
    return BSeriesPrefix(tuple(out))


def F_from_b(T: HalfIntegralMatrix, l: int, budget: int = DEFAULT_BUDGET) -> SiegelSeriesPoly:
    D = expected_degree(T, l)
    b = b_series_bruteforce(T, l, D, budget)
    cof = cofactor_series(T, l, D + 1)
    quot = series_div(list(b.coeffs), cof, D + 1)
    coeffs = []
    for c in quot:
        c = Fraction(c)
        if c.denominator != 1:
            raise NonIntegralQuotient(f"F_{l} has non-integral coefficient {c}")
        coeffs.append(int(c))
    if coeffs[0] != 1:
        raise NonIntegralQuotient("constant term of F is not 1")
    return SiegelSeriesPoly(tuple(poly_trim(coeffs)), l, T.size)


# ---------------------------------------------------------------------------
# closed forms

def F_closed_rank1(t: int, l: int) -> SiegelSeriesPoly:
    if t == 0:
        raise Degenerate("t must be nonzero")
    v = valuation(t, l)
    return SiegelSeriesPoly(tuple(l ** i for i in range(v + 1)), l, 1)


def inverse_level_exponent(T: HalfIntegralMatrix, l: int) -> int:
    """Least m >= 0 with l^m T^{-1} half-integral over Z_l."""
    inv = mat_inverse(T.entries())
    m = 0
    for i in range(T.size):
        for j in range(T.size):
            x = inv[i][j] * (1 if i == j else 2)
            if x:
                m = max(m, -valuation(x, l))
    return m


def content_exponent(T: HalfIntegralMatrix, l: int) -> int:
    """Largest m with l^{-m} T half-integral over Z_l (l odd): the minimal valuation of T."""
    G = T.doubled
    vals = [valuation(G[i][j], l) for i in range(T.size) for j in range(i, T.size) if G[i][j]]
    return min(vals)


def F_closed_rank2(T: HalfIntegralMatrix, l: int) -> SiegelSeriesPoly:
    if T.size != 2:
        raise ValueError("rank-2 formula needs a 2 x 2 matrix")
    if l == 2:
        raise EvenPrime("closed rank-2 form is for odd primes")
    if T.det == 0:
        raise Degenerate("singular matrix")
    f = valuation(det_data(T).cond, l)
    top = content_exponent(T, l)
    x = xi_local(-T.det, l)
    acc = [0]
    for i in range(top + 1):
        inner = [0] * (2 * max(f - i, 0) + 3)
        for j in range(f - i + 1):
            inner[2 * j] += l ** (3 * j)
        for j in range(f - i):
            inner[2 * j + 1] -= x * l * l ** (3 * j)
        shifted = [0] * i + [c * l ** (2 * i) for c in inner]
        acc = [(acc[k] if k < len(acc) else 0) + (shifted[k] if k < len(shifted) else 0)
               for k in range(max(len(acc), len(shifted)))]
    return SiegelSeriesPoly(tuple(poly_trim(acc)), l, 2)


# ---------------------------------------------------------------------------
# dispatcher used by the Eisenstein layer

_cache: dict[tuple[str, int], SiegelSeriesPoly] = {}
_cache_lock = threading.Lock()


def siegel_series_poly(T: HalfIntegralMatrix, l: int, budget: int = DEFAULT_BUDGET) -> SiegelSeriesPoly:
    """F_l(T;X): closed forms where available (rank 1; rank 2 with l odd), enumeration otherwise."""
    key = (T.key, l)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is not None:
        return hit
    r = T.size
    if r == 0:
        res = SiegelSeriesPoly((1,), l, 0)
    elif expected_degree(T, l) == 0:
        res = SiegelSeriesPoly((1,), l, r)
    elif r == 1:
        res = F_closed_rank1(T.doubled[0][0] // 2, l)
    elif r == 2 and l != 2:
        res = F_closed_rank2(T, l)
    else:
        res = F_from_b(T, l, budget)
    with _cache_lock:
        _cache[key] = res
    return res


# ---------------------------------------------------------------------------
# identities

def _laurent(coeffs: Sequence, scale, shift: int, power_sign: int) -> dict[int, Fraction]:
    """{exponent: coefficient} of sum c_i (scale * X^power_sign)^i * X^shift."""
    out: dict[int, Fraction] = {}
    for i, c in enumerate(coeffs):
        if c:
            k = power_sign * i + shift
            out[k] = out.get(k, Fraction(0)) + Fraction(c) * Fraction(scale) ** i
    return {k: v for k, v in out.items() if v}


def functional_equation_check(T: HalfIntegralMatrix, l: int, F: SiegelSeriesPoly) -> bool:
    r = T.size
    coeffs = poly_trim(F.coeffs)
    lhs = _laurent(coeffs, Fraction(1, l ** (r + 1)), 0, -1)
    dd = det_data(T)
    if r % 2 == 0:
        v = valuation(dd.cond, l)
        rhs = _laurent(coeffs, 1, -2 * v, 1)
        c = Fraction(1, l ** ((r + 1) * v))
    else:
        v = valuation(dd.bigD, l)
        rhs = _laurent(coeffs, 1, -v, 1)
        c = Fraction(eta(T, l), l ** ((r + 1) // 2 * v))
    rhs = {k: c * val for k, val in rhs.items()}
    return lhs == rhs


def elementary_symmetric(values: Sequence[list]) -> list[list]:
    """s_0..s_n of polynomial-valued inputs (each a coefficient list)."""
    es = [[1]]
    for v in values:
        nxt = [list(x) for x in es] + [[0]]
        for m in range(len(es), 0, -1):
            prod = poly_mul(es[m - 1], v)
            n = max(len(nxt[m]), len(prod))
            nxt[m] = poly_trim([(nxt[m][i] if i < len(nxt[m]) else 0) + (prod[i] if i < len(prod) else 0)
                                for i in range(n)])
        es = nxt
    return es


def stabilizer_monomials(r: int, p: int) -> list[list[int]]:
    """The polynomials p^{j(2r-j+1)/2} X^j, j = 1..r."""
    return [[0] * j + [p ** (j * (2 * r - j + 1) // 2)] for j in range(1, r + 1)]


def P_at_one(r: int, p: int) -> list[int]:
    out = [1, -(p ** r)]
    for i in range(1, r // 2 + 1):
        out = poly_mul(out, [1, 0, -(p ** (2 * r - 2 * i + 1))])
    return out


def R_at_one(r: int, p: int) -> list[int]:
    out = [1]
    for mono in stabilizer_monomials(r, p):
        out = poly_mul(out, [1] + [-c for c in mono[1:]])
    return out


def spoly_identity_check(Tp: HalfIntegralMatrix, p: int, budget: int = DEFAULT_BUDGET) -> bool:
    """Check sum_m (-1)^m s_m F_p(p^{r-m} T') = R/P * (1 - xi p^{r/2} X) [even r] or R/P [odd r]."""
    from .quadforms import scale

    r = Tp.size
    if Tp.det == 0:
        raise Degenerate("singular matrix")
    es = elementary_symmetric(stabilizer_monomials(r, p))
    lhs = [0]
    for m in range(r + 1):
        F = siegel_series_poly(scale(Tp, p ** (r - m)), p, budget)
        term = poly_mul(es[m], list(F.coeffs))
        if m % 2:
            term = [-c for c in term]
        n = max(len(lhs), len(term))
        lhs = [(lhs[i] if i < len(lhs) else 0) + (term[i] if i < len(term) else 0) for i in range(n)]
    rhs_num = R_at_one(r, p)
    if r % 2 == 0:
        x = xi_local((-1) ** (r // 2) * Tp.det, p)
        rhs_num = poly_mul(rhs_num, [1, -x * p ** (r // 2)])
    return poly_trim(poly_mul(lhs, P_at_one(r, p))) == poly_trim(rhs_num)
