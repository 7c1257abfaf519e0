"""Exact arithmetic substrate: integers, rationals, cyclotomic numbers, Smith form.

Rationals are plain :class:`fractions.Fraction` values.  Cyclotomic numbers
live in the power basis of ``Q(zeta_N)`` reduced modulo the ``N``-th
cyclotomic polynomial, so equality inside one field is coefficient-wise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .errors import NotRational

Rational = Fraction
Scalar = Union[int, Fraction, "CyclotomicNumber"]


# ---------------------------------------------------------------------------
# integers

def valuation(x: int | Fraction, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    if x == 0:
        raise ValueError("valuation of zero")
    if isinstance(x, Fraction):
        return valuation(x.numerator, p) - valuation(x.denominator, p)
    x = abs(int(x))
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` by trial division (desk-scale inputs)."""
    n = abs(int(n))
    if n == 0:
        raise ValueError("cannot factor zero")
    return dict(_factor_cached(n))


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n)) if n not in (0, 1, -1) else []


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def euler_phi(n: int) -> int:
    out = n
    for q in factorize(n):
        out = out // q * (q - 1)
    return out


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def squarefree_part(n: int) -> int:
    """Signed squarefree part: n = squarefree_part(n) * m**2."""
    s = 1
    for q, e in factorize(n).items():
        if e % 2:
            s *= q
    return s if n > 0 else -s


def is_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@lru_cache(maxsize=None)
def primitive_root(q: int) -> int:
    """Smallest generator of the cyclic group ``(Z/qZ)^x`` (q = 2, 4 or odd prime power)."""
    if q in (2, 4):
        return q - 1
    f = factorize(q)
    if len(f) != 1 or 2 in f:
        raise ValueError(f"(Z/{q})^x is not handled as cyclic here")
    phi = euler_phi(q)
    qs = prime_divisors(phi)
    for g in range(2, q):
        if math.gcd(g, q) == 1 and all(pow(g, phi // r, q) != 1 for r in qs):
            return g
    raise AssertionError("no primitive root found")


def crt(residues: Sequence[int], moduli: Sequence[int]) -> int:
    x, m = 0, 1
    for a, n in zip(residues, moduli):
        # solve x + m*t = a mod n
        t = ((a - x) * pow(m, -1, n)) % n
        x += m * t
        m *= n
    return x % m


# ---------------------------------------------------------------------------
# rationals

def format_rational(x: int | Fraction) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


# ---------------------------------------------------------------------------
# cyclotomic numbers

@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    if n < 1:
        raise ValueError("n must be positive")
    # x^n - 1 divided by Phi_d for all proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _poly_exact_div(a: list[int], b: list[int]) -> list[int]:
    a = list(a)
    q = [0] * (len(a) - len(b) + 1)
    lead = b[-1]
    for i in range(len(q) - 1, -1, -1):
        c, r = divmod(a[i + len(b) - 1], lead)
        if r:
            raise ArithmeticError("inexact polynomial division")
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                a[i + j] -= c * bj
    if any(a[: len(b) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


def _reduce_mod_cyclotomic(poly: Sequence, n: int) -> list:
    """Reduce a coefficient list modulo Phi_n (monic, so division stays exact)."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    c = list(poly)
    for i in range(len(c) - 1, deg - 1, -1):
        t = c[i]
        if t:
            c[i] = 0
            base = i - deg
            for j in range(deg):
                if phi[j]:
                    c[base + j] -= t * phi[j]
    c = c[:deg]
    c += [0] * (deg - len(c))
    return c


def _mobius(n: int) -> int:
    f = factorize(n) if n > 1 else {}
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


@dataclass(frozen=True, eq=False)
class CyclotomicNumber:
    """Element of Q(zeta_N) in the reduced power basis of Phi_N."""

    conductor: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != euler_phi(self.conductor):
            raise ValueError("coefficient vector has wrong length")

    # construction ---------------------------------------------------------
    @classmethod
    def from_poly(cls, n: int, poly: Iterable) -> "CyclotomicNumber":
        red = _reduce_mod_cyclotomic([Fraction(x) for x in poly], n)
        return cls(n, tuple(red))

    @classmethod
    def from_rational(cls, x: int | Fraction, n: int = 1) -> "CyclotomicNumber":
        coeffs = [Fraction(0)] * euler_phi(n)
        coeffs[0] = Fraction(x)
        return cls(n, tuple(coeffs))

    @classmethod
    def from_exponent_counts(cls, n: int, counts: Sequence[int]) -> "CyclotomicNumber":
        """sum_j counts[j] * zeta_n**j."""
        red = _reduce_mod_cyclotomic([int(c) for c in counts], n)
        return cls(n, tuple(Fraction(c) for c in red))

    # conversion -----------------------------------------------------------
    def lift(self, m: int) -> "CyclotomicNumber":
        """Same element viewed inside Q(zeta_m); requires conductor | m."""
        if m == self.conductor:
            return self
        if m % self.conductor:
            raise ValueError(f"Q(zeta_{self.conductor}) is not inside Q(zeta_{m})")
        step = m // self.conductor
        poly = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for i, c in enumerate(self.coeffs):
            poly[i * step] = c
        return CyclotomicNumber.from_poly(m, poly)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def galois(self, a: int) -> "CyclotomicNumber":
        """Image under zeta -> zeta**a (a coprime to the conductor)."""
        n = self.conductor
        if math.gcd(a, n) != 1:
            raise ValueError("Galois automorphism needs a unit exponent")
        poly = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            if c:
                poly[(i * a) % n] += c
        return CyclotomicNumber.from_poly(n, poly)

    def conjugate(self) -> "CyclotomicNumber":
        return self.galois(-1)

    def normalized_trace(self) -> Fraction:
        """Tr_{Q(zeta_N)/Q}(z) / phi(N); independent of the ambient conductor."""
        n = self.conductor
        out = Fraction(0)
        for j, c in enumerate(self.coeffs):
            if c:
                m = n // math.gcd(j, n)
                out += c * Fraction(_mobius(m), euler_phi(m))
        return out

    # arithmetic -----------------------------------------------------------
    @staticmethod
    def _common(a: Scalar, b: Scalar) -> tuple["CyclotomicNumber", "CyclotomicNumber"]:
        if not isinstance(a, CyclotomicNumber):
            a = CyclotomicNumber.from_rational(a)
        if not isinstance(b, CyclotomicNumber):
            b = CyclotomicNumber.from_rational(b)
        if a.conductor != b.conductor:
            m = lcm(a.conductor, b.conductor)
            a, b = a.lift(m), b.lift(m)
        return a, b

    def __add__(self, other):
        if not isinstance(other, (int, Fraction, CyclotomicNumber)):
            return NotImplemented
        a, b = self._common(self, other)
        return CyclotomicNumber(a.conductor, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.conductor, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        if not isinstance(other, (int, Fraction, CyclotomicNumber)):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.conductor, tuple(x * other for x in self.coeffs))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(self, other)
        if b.is_rational():
            return a * b.coeffs[0]
        if a.is_rational():
            return b * a.coeffs[0]
        prod = [Fraction(0)] * (2 * len(a.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CyclotomicNumber.from_poly(a.conductor, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.is_rational():
            return CyclotomicNumber.from_rational(1 / self.coeffs[0], self.conductor)
        # product of the other Galois conjugates divided by the norm
        n = self.conductor
        acc = CyclotomicNumber.from_rational(1, n)
        for a in range(2, n):
            if math.gcd(a, n) == 1:
                acc = acc * self.galois(a)
        norm = acc * self
        if not norm.is_rational():
            raise ArithmeticError("norm is not rational")
        return acc * (1 / norm.coeffs[0])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = CyclotomicNumber.from_rational(1, self.conductor)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        a, b = self._common(self, other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(("cyc", self.normalized_trace()))

    def __repr__(self):
        if self.is_rational():
            return f"CyclotomicNumber({format_rational(self.coeffs[0])})"
        return f"CyclotomicNumber(N={self.conductor}, {[format_rational(c) for c in self.coeffs]})"

    def to_json(self) -> dict | str:
        if self.is_rational():
            return format_rational(self.coeffs[0])
        return {"conductor": self.conductor, "coeffs": [format_rational(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> "CyclotomicNumber":
        if isinstance(obj, (str, int)):
            return cls.from_rational(Fraction(obj))
        return cls(int(obj["conductor"]), tuple(Fraction(c) for c in obj["coeffs"]))


def as_cyclotomic(x: Scalar) -> CyclotomicNumber:
    return x if isinstance(x, CyclotomicNumber) else CyclotomicNumber.from_rational(x)


def cyclotomic_root_of_unity(n: int, j: int) -> CyclotomicNumber:
    """zeta_n**j with zeta_n = e(1/n)."""
    if n < 1:
        raise ValueError("n must be positive")
    j %= n
    poly = [0] * (j + 1)
    poly[j] = 1
    return CyclotomicNumber.from_poly(n, poly)


def rational_from_cyclotomic(z: CyclotomicNumber | int | Fraction) -> Fraction:
    if not isinstance(z, CyclotomicNumber):
        return Fraction(z)
    if not z.is_rational():
        raise NotRational(f"{z!r} is not rational")
    return z.coeffs[0]


# ---------------------------------------------------------------------------
# Smith normal form

@dataclass(frozen=True)
class SmithDecomposition:
    left: tuple[tuple[int, ...], ...]
    diag: tuple[int, ...]
    right: tuple[tuple[int, ...], ...]


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: Sequence[Sequence[int]]) -> SmithDecomposition:
    """Unimodular ``left``, ``right`` with ``left @ A @ right`` diagonal.

    Diagonal entries are nonnegative and each divides the next.  Pivots are
    chosen by minimal absolute value.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    a = [[int(x) for x in row] for row in A]
    L = _identity(m)
    R = _identity(n)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in R:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row dst += c * row src
        if c:
            a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
            L[dst] = [x + c * y for x, y in zip(L[dst], L[src])]

    def add_col(dst, src, c):
        if c:
            for row in a:
                row[dst] += c * row[src]
            for row in R:
                row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, m) for j in range(t, n) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = a[t][t]
            done = True
            for i in range(t + 1, m):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // piv))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, n):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // piv))
                    if a[t][j]:
                        done = False
            if not done:
                # move the smallest remainder in row/column t into the pivot
                cands = [(abs(a[i][t]), i, t) for i in range(t, m) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t, n) if a[t][j]]
                _, i, j = min(cands)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            # divisibility: pivot must divide the remaining block
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            L[t] = [-x for x in L[t]]
        t += 1

    diag = tuple(a[i][i] for i in range(min(m, n)))
    return SmithDecomposition(tuple(map(tuple, L)), diag, tuple(map(tuple, R)))


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list[list]:
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*B)] for row in A]


def transpose(A: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in zip(*A)]


def det(A: Sequence[Sequence]) -> Fraction | int:
    """Exact determinant by fraction-free Bareiss elimination (integers) or Fractions."""
    n = len(A)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in A for x in row):
        M = [list(row) for row in A]
        sign, prev = 1, 1
        for k in range(n - 1):
            if M[k][k] == 0:
                sw = next((i for i in range(k + 1, n) if M[i][k]), None)
                if sw is None:
                    return 0
                M[k], M[sw] = M[sw], M[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            prev = M[k][k]
        return sign * M[n - 1][n - 1]
    M = [[Fraction(x) for x in row] for row in A]
    out = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
            out = -out
        out *= M[k][k]
        for i in range(k + 1, n):
            f = M[i][k] / M[k][k]
            if f:
                M[i] = [x - f * y for x, y in zip(M[i], M[k])]
    return out


def mat_inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for k in range(n):
        piv = next((i for i in range(k, n) if M[i][k]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[k], M[piv] = M[piv], M[k]
        inv = 1 / M[k][k]
        M[k] = [x * inv for x in M[k]]
        for i in range(n):
            if i != k and M[i][k]:
                f = M[i][k]
                M[i] = [x - f * y for x, y in zip(M[i], M[k])]
    return [row[n:] for row in M]


# ---------------------------------------------------------------------------
# dense univariate polynomials (constant term first)

def poly_trim(a: Sequence) -> list:
    a = list(a)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    return a or [0]


def poly_add(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    return poly_trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def poly_scale(a: Sequence, c) -> list:
    return poly_trim([c * x for x in a])


def poly_mul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return poly_trim(out)


def poly_eval(a: Sequence, x):
    acc = 0
    for c in reversed(a):
        acc = acc * x + c
    return acc


def poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    """Exact division over Q."""
    b = poly_trim(b)
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    r = [Fraction(x) for x in poly_trim(a)]
    q = [Fraction(0)] * max(1, len(r) - len(b) + 1)
    lead = Fraction(b[-1])
    while len(r) >= len(b) and r != [0]:
        shift = len(r) - len(b)
        c = r[-1] / lead
        q[shift] = c
        for i, y in enumerate(b):
            r[i + shift] -= c * y
        r.pop()
        r = poly_trim(r)
    return poly_trim(q), poly_trim(r)


def series_div(a: Sequence, b: Sequence, n: int) -> list:
    """First n coefficients of a/b as power series; b[0] must be invertible."""
    b0 = b[0]
    out = []
    for k in range(n):
        s = a[k] if k < len(a) else 0
        for j in range(1, min(k, len(b) - 1) + 1):
            s -= b[j] * out[k - j]
        out.append(Fraction(s) / b0 if not isinstance(b0, int) or b0 not in (1, -1) else s * b0)
    return out
