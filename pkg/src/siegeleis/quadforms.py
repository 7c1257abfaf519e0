"""Half-integral symmetric matrices and their local arithmetic invariants."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .errors import Degenerate, EvenRank, OddRank
from .exactnum import (
    det,
    factorize,
    is_square,
    mat_mul,
    smith_normal_form,
    squarefree_part,
    transpose,
    valuation,
)


@dataclass(frozen=True)
class HalfIntegralMatrix:
    """A half-integral symmetric matrix T, stored as the even-diagonal integer matrix 2T."""

    doubled: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        G = self.doubled
        n = len(G)
        for i in range(n):
            if len(G[i]) != n:
                raise ValueError("matrix must be square")
            if G[i][i] % 2:
                raise ValueError("2T must have even diagonal entries")
            for j in range(i):
                if G[i][j] != G[j][i]:
                    raise ValueError("matrix must be symmetric")

    # constructors ---------------------------------------------------------
    @classmethod
    def from_doubled(cls, G: Sequence[Sequence[int]]) -> "HalfIntegralMatrix":
        return cls(tuple(tuple(int(x) for x in row) for row in G))

    @classmethod
    def from_entries(cls, T: Sequence[Sequence]) -> "HalfIntegralMatrix":
        G = []
        for row in T:
            out = []
            for x in row:
                y = 2 * Fraction(x)
                if y.denominator != 1:
                    raise ValueError("entries must lie in (1/2)Z")
                out.append(int(y))
            G.append(out)
        return cls.from_doubled(G)

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> "HalfIntegralMatrix":
        n = len(entries)
        return cls.from_doubled([[2 * entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def identity(cls, n: int) -> "HalfIntegralMatrix":
        return cls.diagonal([1] * n)

    @classmethod
    def zero(cls, n: int) -> "HalfIntegralMatrix":
        return cls.diagonal([0] * n)

    @classmethod
    def from_key(cls, key: str) -> "HalfIntegralMatrix":
        head, _, body = key.partition(":")
        n = int(head)
        vals = [int(v) for v in body.split(",")] if body else []
        if len(vals) != n * (n + 1) // 2:
            raise ValueError(f"bad key {key!r}")
        G = [[0] * n for _ in range(n)]
        it = iter(vals)
        for i in range(n):
            for j in range(i, n):
                G[i][j] = G[j][i] = next(it)
        return cls.from_doubled(G)

    # basic data -----------------------------------------------------------
    @property
    def size(self) -> int:
        return len(self.doubled)

    def key_tuple(self) -> tuple[int, ...]:
        n = self.size
        return tuple(self.doubled[i][j] for i in range(n) for j in range(i, n))

    @property
    def key(self) -> str:
        return f"{self.size}:" + ",".join(map(str, self.key_tuple()))

    def entry(self, i: int, j: int) -> Fraction:
        return Fraction(self.doubled[i][j], 2)

    def entries(self) -> list[list[Fraction]]:
        return [[self.entry(i, j) for j in range(self.size)] for i in range(self.size)]

    @cached_property
    def det(self) -> Fraction:
        return Fraction(det(self.doubled), 2 ** self.size)

    @property
    def trace(self) -> int:
        return sum(self.doubled[i][i] for i in range(self.size)) // 2

    @cached_property
    def rank(self) -> int:
        if self.size == 0:
            return 0
        return sum(1 for d in smith_normal_form(self.doubled).diag if d)

    def is_psd(self) -> bool:
        n = self.size
        for k in range(1, n + 1):
            for idx in itertools.combinations(range(n), k):
                minor = det([[self.doubled[i][j] for j in idx] for i in idx])
                if minor < 0:
                    return False
        return True

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.doubled)

    def __repr__(self):
        return f"HalfIntegralMatrix({self.key})"


# ---------------------------------------------------------------------------
# discriminants

@dataclass(frozen=True)
class DiscriminantData:
    bigD: int
    fund: int | None = None
    cond: int | None = None


def is_fundamental_discriminant(d: int) -> bool:
    if d in (0, 1):
        return False
    if d % 4 == 1:
        return squarefree_part(d) == d
    if d % 4 == 0:
        m = d // 4
        return m % 4 in (2, 3) and squarefree_part(m) == m
    return False


def fundamental_decomposition(D: int) -> tuple[int, int]:
    """Write D = d * f**2 with d a fundamental discriminant or 1 (requires D = 0, 1 mod 4)."""
    if D == 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a discriminant")
    s = squarefree_part(D)
    d = s if s % 4 == 1 else 4 * s
    f2 = D // d
    if D % d or not is_square(f2):
        raise ArithmeticError(f"cannot decompose {D}")
    return d, _isqrt(f2)


def _isqrt(n: int) -> int:
    import math

    return math.isqrt(n)


def det_data(T: HalfIntegralMatrix) -> DiscriminantData:
    r = T.size
    if r == 0:
        return DiscriminantData(1, 1, 1)
    dT = T.det
    if dT == 0:
        raise Degenerate("singular matrix")
    bigD = dT * 4 ** (r // 2)
    if bigD.denominator != 1:
        raise ArithmeticError("non-integral discriminant")
    bigD = int(bigD)
    if r % 2:
        return DiscriminantData(bigD)
    d, f = fundamental_decomposition((-1) ** (r // 2) * bigD)
    return DiscriminantData(bigD, d, f)


# ---------------------------------------------------------------------------
# local symbols

def _legendre(u: int, l: int) -> int:
    u %= l
    if u == 0:
        return 0
    return 1 if pow(u, (l - 1) // 2, l) == 1 else -1


def _split(x: int | Fraction, l: int) -> tuple[int, int]:
    """x = l**v * u with u an integer unit at l in the same square class."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    v = valuation(x, l)
    u = x / Fraction(l) ** v
    return v, u.numerator * u.denominator


def xi_local(x: int | Fraction, l: int) -> int:
    """+1 split, -1 unramified, 0 ramified for Q_l(sqrt x)/Q_l."""
    v, u = _split(x, l)
    if v % 2:
        return 0
    if l == 2:
        u8 = u % 8
        if u8 == 1:
            return 1
        if u8 == 5:
            return -1
        return 0
    return _legendre(u, l)


def xi(T: HalfIntegralMatrix, l: int) -> int:
    r = T.size
    if r % 2:
        raise OddRank("xi needs even rank")
    if T.det == 0:
        raise Degenerate("singular matrix")
    return xi_local((-1) ** (r // 2) * T.det, l)


def hilbert_symbol(a: int | Fraction, b: int | Fraction, l: int) -> int:
    alpha, u = _split(a, l)
    beta, v = _split(b, l)
    if l == 2:
        eps = lambda x: ((x - 1) // 2) % 2
        omg = lambda x: ((x * x - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omg(v) + beta * omg(u)
        return -1 if e % 2 else 1
    sign = -1 if (alpha * beta * ((l - 1) // 2)) % 2 else 1
    return sign * _legendre(u, l) ** (beta % 2) * _legendre(v, l) ** (alpha % 2)


def rational_diagonalization(T: HalfIntegralMatrix) -> list[Fraction]:
    """Diagonal entries of some D = P^t T P over Q (P invertible)."""
    n = T.size
    A = T.entries()
    out = []
    for k in range(n):
        if A[k][k] == 0:
            j = next((j for j in range(k + 1, n) if A[k][j] != 0), None)
            if j is None:
                # row is zero in the remaining block
                out.append(Fraction(0))
                continue
            if A[j][j] != 0:
                A[k], A[j] = A[j], A[k]
                for row in A:
                    row[k], row[j] = row[j], row[k]
            else:
                # e_k <- e_k + e_j gives pivot 2*a_kj
                for i in range(n):
                    A[k][i] += A[j][i]
                for i in range(n):
                    A[i][k] += A[i][j]
        piv = A[k][k]
        out.append(piv)
        for i in range(k + 1, n):
            f = A[i][k] / piv
            if f:
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
                for j in range(k, n):
                    A[j][i] -= f * A[j][k]
    return out


def hasse_invariant(T: HalfIntegralMatrix, l: int) -> int:
    if T.det == 0:
        raise Degenerate("singular matrix")
    a = rational_diagonalization(T)
    h = 1
    for i in range(len(a)):
        for j in range(i, len(a)):
            h *= hilbert_symbol(a[i], a[j], l)
    return h


def eta(T: HalfIntegralMatrix, l: int) -> int:
    r = T.size
    if r % 2 == 0:
        raise EvenRank("eta needs odd rank")
    d = T.det
    if d == 0:
        raise Degenerate("singular matrix")
    h = hasse_invariant(T, l)
    mid = hilbert_symbol(d, (-1) ** ((r - 1) // 2) * d, l)
    tail = hilbert_symbol(-1, -1, l) ** (((r * r - 1) // 8) % 2)
    return h * mid * tail


# ---------------------------------------------------------------------------
# constructions

def block_embed(Tp: HalfIntegralMatrix, n: int) -> HalfIntegralMatrix:
    r = Tp.size
    if n < r:
        raise ValueError("target size smaller than block")
    G = [[0] * n for _ in range(n)]
    for i in range(r):
        for j in range(r):
            G[i][j] = Tp.doubled[i][j]
    return HalfIntegralMatrix.from_doubled(G)


def scale(T: HalfIntegralMatrix, c: int) -> HalfIntegralMatrix:
    if c <= 0:
        raise ValueError("scale factor must be positive")
    return HalfIntegralMatrix.from_doubled([[c * x for x in row] for row in T.doubled])


def conjugate(T: HalfIntegralMatrix, U: Sequence[Sequence[int]]) -> HalfIntegralMatrix:
    """U^t T U."""
    return HalfIntegralMatrix.from_doubled(mat_mul(transpose(U), mat_mul(T.doubled, U)))


def random_unimodular(n: int, rng: random.Random, steps: int = 6, bound: int = 2) -> list[list[int]]:
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    if n == 0:
        return U
    for _ in range(steps):
        kind = rng.randrange(3)
        i, j = rng.randrange(n), rng.randrange(n)
        if kind == 0 and i != j:
            c = rng.randint(-bound, bound)
            for row in U:
                row[i] += c * row[j]
        elif kind == 1:
            for row in U:
                row[i], row[j] = row[j], row[i]
        else:
            for row in U:
                row[i] = -row[i]
    return U


def random_unimodular_conjugate(T: HalfIntegralMatrix, seed: int) -> HalfIntegralMatrix:
    rng = random.Random(seed)
    return conjugate(T, random_unimodular(T.size, rng))


def radical_reduction(T: HalfIntegralMatrix) -> tuple[HalfIntegralMatrix, list[list[int]]]:
    """Return (T', U) with U unimodular and U^t T U = diag(T', 0).

    The kernel of 2T over Z comes from the right transform of its Smith form;
    the remaining columns of that unimodular matrix complete the basis.
    """
    n = T.size
    if n == 0:
        return T, []
    snf = smith_normal_form(T.doubled)
    r = sum(1 for d in snf.diag if d)
    U = [list(row) for row in snf.right]
    C = mat_mul(transpose(U), mat_mul(T.doubled, U))
    Tp = HalfIntegralMatrix.from_doubled([row[:r] for row in C[:r]])
    return Tp, U


def enumerate_indices(n: int, trace_bound: int) -> list[HalfIntegralMatrix]:
    """All positive-semidefinite T in Sym_n^*(Z) with trace(T) <= trace_bound."""
    if trace_bound < 0:
        return []
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    out = []
    for diag in _compositions(n, trace_bound):
        ranges = []
        for i, j in pairs:
            # 2x2 principal minor: g_ij^2 <= 4 t_ii t_jj
            b = _isqrt_floor(4 * diag[i] * diag[j])
            ranges.append(range(-b, b + 1))
        for offs in itertools.product(*ranges):
            G = [[0] * n for _ in range(n)]
            for i in range(n):
                G[i][i] = 2 * diag[i]
            for (i, j), g in zip(pairs, offs):
                G[i][j] = G[j][i] = g
            T = HalfIntegralMatrix.from_doubled(G)
            if T.is_psd():
                out.append(T)
    out.sort(key=lambda t: t.key_tuple())
    return out


def _isqrt_floor(x: int) -> int:
    import math

    return math.isqrt(x)


def _compositions(n: int, bound: int):
    """Tuples of n nonnegative integers with sum <= bound."""
    if n == 0:
        yield ()
        return
    for first in range(bound + 1):
        for rest in _compositions(n - 1, bound - first):
            yield (first,) + rest


def local_primes(T: HalfIntegralMatrix) -> list[int]:
    """Primes l at which F_l(T; X) may be nontrivial (those dividing f_T or D_T)."""
    dd = det_data(T)
    if T.size % 2:
        return sorted(factorize(dd.bigD)) if abs(dd.bigD) > 1 else []
    return sorted(factorize(dd.cond)) if dd.cond > 1 else []
