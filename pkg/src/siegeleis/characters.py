"""Dirichlet characters with exact cyclotomic values, and Kronecker symbols.

A character mod M is stored through its values on a fixed generating set of
(Z/MZ)^x.  The generating set is built prime power by prime power: the
smallest primitive root for an odd prime power, -1 for 4, and 5 together
with -1 for 2^e with e >= 3.  Each local generator is lifted by CRT to an
integer in [1, M) that is 1 modulo the other prime-power factors; that lift
is the generator's name in the text format ``"M:g1^e1,g2^e2"``, where
``g^e`` means chi(g) = exp(2 pi i e / ord(g)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exactnum import (
    CyclotomicNumber,
    crt,
    cyclotomic_root_of_unity,
    factorize,
    lcm,
    primitive_root,
)


# ---------------------------------------------------------------------------
# Kronecker / Jacobi symbols

def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise ValueError("Jacobi symbol needs a positive odd modulus")
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker(d: int, m: int) -> int:
    """The Kronecker symbol (d/m)."""
    if m == 0:
        return 1 if d in (1, -1) else 0
    result = 1
    if m < 0:
        m = -m
        if d < 0:
            result = -1
    while m % 2 == 0:
        m //= 2
        if d % 2 == 0:
            return 0
        if d % 8 in (3, 5):
            result = -result
    if m == 1:
        return result
    return result * jacobi(d, m)


# ---------------------------------------------------------------------------
# generators of (Z/MZ)^x

@dataclass(frozen=True)
class _LocalGenerator:
    prime: int
    prime_power: int
    local_value: int  # generator mod prime_power (-1 written as prime_power - 1)
    order: int
    lift: int  # CRT lift mod M


@lru_cache(maxsize=None)
def unit_group_generators(M: int) -> tuple[_LocalGenerator, ...]:
    out = []
    for p, e in sorted(factorize(M).items()):
        q = p ** e
        rest = M // q

        def lifted(g):
            return crt([g % q, 1], [q, rest]) if rest > 1 else g % q

        if p == 2:
            if e == 1:
                continue
            if e >= 3:
                out.append(_LocalGenerator(2, q, 5, 2 ** (e - 2), lifted(5)))
            out.append(_LocalGenerator(2, q, q - 1, 2, lifted(-1)))
        else:
            g = primitive_root(q)
            out.append(_LocalGenerator(p, q, g, (p - 1) * p ** (e - 1), lifted(g)))
    return tuple(out)


@lru_cache(maxsize=None)
def _dlog_table(q: int, g: int) -> dict[int, int]:
    table, x, k = {}, 1, 0
    while x not in table:
        table[x] = k
        x = x * g % q
        k += 1
    return table


def _local_logs(M: int, a: int) -> tuple[int, ...]:
    """Exponents of a in terms of the canonical generators (a coprime to M)."""
    logs = []
    for gen in unit_group_generators(M):
        q = gen.prime_power
        r = a % q
        if gen.prime == 2:
            if gen.local_value == 5:
                sign_fixed = r if r % 4 == 1 else (-r) % q
                logs.append(_dlog_table(q, 5)[sign_fixed])
            else:
                logs.append(0 if r % 4 == 1 else 1)
        else:
            logs.append(_dlog_table(q, gen.local_value)[r])
    return tuple(logs)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DirichletCharacter:
    """chi mod M; ``angles[i]`` in [0,1) gives chi(g_i) = exp(2 pi i angles[i])."""

    modulus: int
    angles: tuple[Fraction, ...]

    def __post_init__(self):
        gens = unit_group_generators(self.modulus)
        if len(gens) != len(self.angles):
            raise ValueError("one angle per generator is required")
        for gen, t in zip(gens, self.angles):
            if t < 0 or t >= 1 or (t * gen.order).denominator != 1:
                raise ValueError("generator image inconsistent with generator order")

    # constructors -------------------------------------------------------------
    @classmethod
    def trivial(cls, M: int = 1) -> "DirichletCharacter":
        return cls(M, tuple(Fraction(0) for _ in unit_group_generators(M)))

    @classmethod
    def from_exponents(cls, M: int, exponents) -> "DirichletCharacter":
        gens = unit_group_generators(M)
        return cls(M, tuple(Fraction(e % g.order, g.order) for g, e in zip(gens, exponents)))

    @classmethod
    def from_angle_function(cls, M: int, angle_of) -> "DirichletCharacter":
        """Build from a function giving the angle of chi at each generator lift."""
        gens = unit_group_generators(M)
        return cls(M, tuple(Fraction(angle_of(g.lift)) % 1 for g in gens))

    @classmethod
    def kronecker_character(cls, d: int) -> "DirichletCharacter":
        """a -> (d/a), taken modulo |d| when d = 0, 1 mod 4 and modulo 4|d| otherwise."""
        if d == 0:
            raise ValueError("d must be nonzero")
        M = abs(d) if d % 4 in (0, 1) else 4 * abs(d)
        return cls.from_angle_function(M, lambda a: Fraction(0 if kronecker(d, a) == 1 else 1, 2))

    @classmethod
    def parse(cls, text: str) -> "DirichletCharacter":
        text = text.strip()
        head, _, body = text.partition(":")
        M = int(head)
        if M < 1:
            raise ValueError("modulus must be positive")
        gens = unit_group_generators(M)
        exps = [0] * len(gens)
        for token in filter(None, (t.strip() for t in body.split(","))):
            g_txt, _, e_txt = token.partition("^")
            g = int(g_txt) % M
            idx = [i for i, gen in enumerate(gens) if gen.lift % M == g]
            if not idx:
                names = ",".join(str(gen.lift) for gen in gens) or "none"
                raise ValueError(f"{g_txt} is not a canonical generator mod {M} (generators: {names})")
            exps[idx[0]] = int(e_txt) if e_txt else 1
        return cls.from_exponents(M, exps)

    def spec_string(self) -> str:
        gens = unit_group_generators(self.modulus)
        parts = [f"{g.lift}^{int(t * g.order)}" for g, t in zip(gens, self.angles) if t]
        return f"{self.modulus}:" + ",".join(parts)

    def to_json(self) -> dict:
        gens = unit_group_generators(self.modulus)
        return {
            "modulus": self.modulus,
            "generators": [g.lift for g in gens],
            "generator_orders": [g.order for g in gens],
            "exponents": [int(t * g.order) for g, t in zip(gens, self.angles)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "DirichletCharacter":
        return cls.from_exponents(int(obj["modulus"]), obj["exponents"])

    # data ---------------------------------------------------------------------
    @property
    def order(self) -> int:
        return lcm(1, *(t.denominator for t in self.angles))

    @property
    def generator_images(self) -> tuple[int, ...]:
        """Exponents of the generator images relative to a primitive order-th root of unity."""
        return tuple(int(t * self.order) for t in self.angles)

    def angle(self, a: int) -> Fraction | None:
        if math.gcd(a, self.modulus) != 1:
            return None
        logs = _local_logs(self.modulus, a)
        return sum((Fraction(k) * t for k, t in zip(logs, self.angles)), Fraction(0)) % 1

    def exponent(self, a: int) -> int | None:
        """j with chi(a) = zeta_order**j, or None when gcd(a, M) > 1."""
        t = self.angle(a)
        return None if t is None else int(t * self.order)

    def __call__(self, a: int) -> CyclotomicNumber:
        return self.evaluate(a)

    def evaluate(self, a: int) -> CyclotomicNumber:
        j = self.exponent(a)
        if j is None:
            return CyclotomicNumber.from_rational(0, self.order)
        return cyclotomic_root_of_unity(self.order, j)

    def is_trivial(self) -> bool:
        return not any(self.angles)

    def is_quadratic_or_trivial(self) -> bool:
        return self.order <= 2

    def parity(self) -> int:
        """+1 for even, -1 for odd."""
        t = self.angle(-1)
        return 1 if t == 0 else -1

    def is_even(self) -> bool:
        return self.parity() == 1

    # local structure ------------------------------------------------------------
    def _local_conductor_exponent(self, p: int) -> int:
        gens = [(g, t) for g, t in zip(unit_group_generators(self.modulus), self.angles) if g.prime == p]
        if all(t == 0 for _, t in gens):
            return 0
        if p != 2:
            (g, t), = gens
            c = 1
            while (t * (p - 1) * p ** (c - 1)).denominator != 1:
                c += 1
            return c
        five = [t for g, t in gens if g.local_value == 5]
        beta = five[0] if five else Fraction(0)
        if beta == 0:
            return 2
        c = 3
        while (beta * 2 ** (c - 2)).denominator != 1:
            c += 1
        return c

    @property
    def conductor(self) -> int:
        f = 1
        for p in factorize(self.modulus):
            f *= p ** self._local_conductor_exponent(p)
        return f

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def induce(self, M: int) -> "DirichletCharacter":
        """The character mod M (a multiple of the conductor) with the same values on units."""
        f = self.conductor
        if M % f:
            raise ValueError("new modulus must be a multiple of the conductor")
        prim = self.primitive()
        return DirichletCharacter.from_angle_function(M, prim.angle)

    def primitive(self) -> "DirichletCharacter":
        f = self.conductor
        if f == self.modulus:
            return self
        M = self.modulus

        def angle_at(h):
            # find a lift of h mod f that is a unit mod M
            a = h % f if f > 1 else 1
            while math.gcd(a, M) != 1:
                a += f
            return self.angle(a)

        return DirichletCharacter.from_angle_function(f, angle_at)

    def local_component(self, p: int) -> "DirichletCharacter":
        """The p-part chi_p, as a character mod the full p-power of the modulus."""
        q = p ** factorize(self.modulus).get(p, 0)
        gens = unit_group_generators(self.modulus)
        sub = unit_group_generators(q)
        angles = []
        for s in sub:
            match = [t for g, t in zip(gens, self.angles) if g.prime == p and g.local_value == s.local_value]
            angles.append(match[0] if match else Fraction(0))
        return DirichletCharacter(q, tuple(angles))

    def square_locally_nontrivial(self) -> bool:
        for p in factorize(self.modulus):
            comp = self.local_component(p)
            if all((2 * t).denominator == 1 for t in comp.angles):
                return False
        return True

    # algebra --------------------------------------------------------------------
    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        M = lcm(self.modulus, other.modulus)
        return DirichletCharacter.from_angle_function(M, lambda a: self.angle(a) + other.angle(a))

    def __pow__(self, k: int) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple((k * t) % 1 for t in self.angles))

    def conjugate(self) -> "DirichletCharacter":
        return self ** -1

    def same_as(self, other: "DirichletCharacter") -> bool:
        """Equality of the underlying primitive characters."""
        return self.primitive() == other.primitive()

    def __repr__(self):
        return f"DirichletCharacter({self.spec_string()!r})"


def twist(chi: DirichletCharacter, psi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character inducing chi * psi."""
    return (chi * psi).primitive()


def kronecker_primitive(d: int) -> DirichletCharacter:
    """Primitive character attached to a fundamental discriminant d (trivial for d = 1)."""
    if d == 1:
        return DirichletCharacter.trivial(1)
    return DirichletCharacter.kronecker_character(d).primitive()
