"""p-adic layer: truncated Z_p arithmetic and the Lambda-adic Eisenstein coefficients.

Precision is tracked per coefficient.  A PadicInt is a residue mod p^prec;
products use min(prec_a + v(b), prec_b + v(a)), sums use the smaller
precision.  Lambda elements are power series truncated at X^N whose
coefficients are PadicInts, so a coefficient may be known to fewer digits
than the nominal p-adic precision M.

The one-variable series attached to Dirichlet L-values are built by Newton
interpolation at X = (1+p)^k - 1, for weights k in one residue class mod p-1.
With S sample points the interpolant agrees with the true element of Lambda
modulo prod (X - x_i), which forces coefficient e to be correct mod p^(S-e);
the loss from the divided-difference denominators is computed exactly.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .characters import DirichletCharacter, kronecker_primitive
from .errors import (
    InvalidParams,
    NotAUnit,
    NotOnePlusP,
    PoleNotCancelled,
    PrecisionExhausted,
    ValidationFailed,
)
from .exactnum import CyclotomicNumber, as_cyclotomic, factorize, poly_mul, poly_trim, primitive_root, valuation
from .lvalues import L_depleted
from .quadforms import HalfIntegralMatrix, det_data, radical_reduction
from .siegelseries import siegel_series_poly

INF = 10 ** 9


# ---------------------------------------------------------------------------
# truncated p-adic integers

@dataclass(frozen=True)
class PadicInt:
    p: int
    residue: int
    precision: int

    def __post_init__(self):
        if self.precision < 0:
            raise PrecisionExhausted("negative precision")
        object.__setattr__(self, "residue", self.residue % (self.p ** self.precision))

    @classmethod
    def of(cls, x: int | Fraction, p: int, prec: int) -> "PadicInt":
        x = Fraction(x)
        if x.denominator % p == 0:
            raise NotAUnit(f"{x} is not p-integral for p={p}")
        q = p ** prec
        return cls(p, x.numerator * pow(x.denominator, -1, q) % q if prec else 0, prec)

    @property
    def valuation(self) -> int:
        """Valuation of the residue, capped at the precision."""
        if self.residue == 0:
            return self.precision
        return min(valuation(self.residue, self.p), self.precision)

    def _coerce(self, other) -> "PadicInt":
        if isinstance(other, PadicInt):
            if other.p != self.p:
                raise ValueError("mixing different primes")
            return other
        return PadicInt.of(other, self.p, INF_CAP)

    def __add__(self, other):
        o = self._coerce(other)
        return PadicInt(self.p, self.residue + o.residue, min(self.precision, o.precision))

    __radd__ = __add__

    def __neg__(self):
        return PadicInt(self.p, -self.residue, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        prec = min(self.precision + o.valuation, o.precision + self.valuation)
        return PadicInt(self.p, self.residue * o.residue, prec)

    __rmul__ = __mul__

    def is_unit(self) -> bool:
        return self.precision > 0 and self.residue % self.p != 0

    def inverse(self) -> "PadicInt":
        if not self.is_unit():
            raise NotAUnit("only units can be inverted")
        q = self.p ** self.precision
        return PadicInt(self.p, pow(self.residue, -1, q), self.precision)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        q = self.p ** self.precision
        if self.is_unit() or e == 0:
            return PadicInt(self.p, pow(self.residue, e, q) if self.precision else 0, self.precision)
        out = PadicInt(self.p, 1, self.precision)
        for _ in range(e):
            out = out * self
        return out

    def reduce(self, prec: int) -> "PadicInt":
        return PadicInt(self.p, self.residue, min(prec, self.precision))

    def agrees_with(self, other, prec: int | None = None) -> bool:
        o = self._coerce(other)
        k = min(self.precision, o.precision)
        if prec is not None:
            k = min(k, prec)
        return (self.residue - o.residue) % (self.p ** k) == 0

    def __repr__(self):
        return f"{self.residue} + O({self.p}^{self.precision})"


def embed_rational(x: int | Fraction, p: int, prec: int) -> PadicInt:
    return PadicInt.of(x, p, prec)


def teichmuller(x: int, p: int, M: int) -> PadicInt:
    if p == 2:
        raise InvalidParams("the p-adic layer works with odd p")
    if x % p == 0:
        raise NotAUnit(f"{x} is divisible by {p}")
    q = p ** M
    y = x % q
    for _ in range(M):
        y = pow(y, p, q)
    return PadicInt(p, y, M)


def root_of_unity_image(d: int, p: int, M: int) -> PadicInt:
    """Image of exp(2 pi i / d): the Teichmuller lift of g^((p-1)/d), g the smallest primitive root mod p."""
    if (p - 1) % d:
        raise InvalidParams(f"order {d} does not divide p-1 = {p - 1}")
    g = primitive_root(p)
    return teichmuller(pow(g, (p - 1) // d, p), p, M)


def embed_cyclotomic(z: CyclotomicNumber | int | Fraction, p: int, prec: int) -> PadicInt:
    z = as_cyclotomic(z)
    if z.is_rational():
        return embed_rational(z.coeffs[0], p, prec)
    N = z.conductor
    zeta = root_of_unity_image(N, p, prec)
    acc = PadicInt(p, 0, prec)
    power = PadicInt(p, 1, prec)
    for c in z.coeffs:
        if c:
            acc = acc + power * embed_rational(c, p, prec)
        power = power * zeta
    return acc


def character_image(chi: DirichletCharacter, a: int, p: int, prec: int) -> PadicInt:
    j = chi.exponent(a)
    if j is None:
        return PadicInt(p, 0, prec)
    return root_of_unity_image(chi.order, p, prec) ** j


def angle_part(x: int, p: int, M: int) -> PadicInt:
    """<x> = omega(x)^(-1) x."""
    return teichmuller(x, p, M).inverse() * PadicInt(p, x, M)


def log_one_plus(y: int, p: int, prec: int) -> PadicInt:
    """log_p(1 + y) mod p^prec for an integer y divisible by p."""
    if y % p:
        raise NotOnePlusP("argument must lie in 1 + pZ_p")
    if y == 0:
        return PadicInt(p, 0, prec)
    acc = Fraction(0)
    k = 1
    vy = valuation(y, p)
    while k * vy - valuation(k, p) < prec + 1 or k <= 2:
        acc += Fraction((-1) ** (k + 1) * y ** k, k)
        k += 1
    return embed_rational(acc, p, prec)


def s_of(x: PadicInt) -> PadicInt:
    """log_p(x) / log_p(1+p) for x in 1 + pZ_p; one digit is lost in the division."""
    p, prec = x.p, x.precision
    if prec < 2:
        raise PrecisionExhausted("need at least two digits to compute s(x)")
    if (x.residue - 1) % p:
        raise NotOnePlusP("argument must lie in 1 + pZ_p")
    num = log_one_plus(x.residue - 1, p, prec)
    den = log_one_plus(p, p, prec + 1)
    # both are divisible by p exactly once (den) / at least once (num)
    qn = PadicInt(p, num.residue // p, prec - 1)
    qd = PadicInt(p, den.residue // p, prec)
    return qn * qd.inverse()


# ---------------------------------------------------------------------------
# truncated power series

@dataclass(frozen=True)
class LambdaElement:
    p: int
    coeffs: tuple[PadicInt, ...]
    pprec: int

    @property
    def xprec(self) -> int:
        return len(self.coeffs)

    @classmethod
    def from_ints(cls, p: int, values: Sequence[int | Fraction], N: int, M: int) -> "LambdaElement":
        vals = list(values)[:N] + [0] * max(0, N - len(values))
        return cls(p, tuple(embed_rational(v, p, M) for v in vals), M)

    @classmethod
    def constant(cls, c: PadicInt, N: int) -> "LambdaElement":
        zero = PadicInt(c.p, 0, c.precision)
        return cls(c.p, (c,) + (zero,) * (N - 1), c.precision)

    def precisions(self) -> list[int]:
        return [c.precision for c in self.coeffs]

    def min_precision(self) -> int:
        return min(self.precisions())

    def truncate(self, N: int, M: int | None = None) -> "LambdaElement":
        cs = self.coeffs[:N]
        if M is not None:
            cs = tuple(c.reduce(M) for c in cs)
        return LambdaElement(self.p, tuple(cs), self.pprec if M is None else min(M, self.pprec))

    def __add__(self, other: "LambdaElement") -> "LambdaElement":
        N = min(self.xprec, other.xprec)
        return LambdaElement(self.p, tuple(a + b for a, b in zip(self.coeffs[:N], other.coeffs[:N])),
                             min(self.pprec, other.pprec))

    def __sub__(self, other: "LambdaElement") -> "LambdaElement":
        return self + other.scale(PadicInt(self.p, -1, INF))

    def scale(self, c: PadicInt) -> "LambdaElement":
        return LambdaElement(self.p, tuple(a * c for a in self.coeffs), self.pprec)

    def __mul__(self, other: "LambdaElement") -> "LambdaElement":
        if isinstance(other, PadicInt):
            return self.scale(other)
        N = min(self.xprec, other.xprec)
        p = self.p
        out = []
        for e in range(N):
            res, prec = 0, INF
            for i in range(e + 1):
                a, b = self.coeffs[i], other.coeffs[e - i]
                res += a.residue * b.residue
                prec = min(prec, a.precision + b.valuation, b.precision + a.valuation)
            out.append(PadicInt(p, res, min(prec, INF_CAP)))
        return LambdaElement(p, tuple(out), min(self.pprec, other.pprec))

    def evaluate(self, x: int) -> PadicInt:
        """Value at X = x with v_p(x) >= 1, including the truncation tail."""
        p = self.p
        vx = valuation(x, p) if x else INF
        if vx < 1:
            raise InvalidParams("evaluation point must be divisible by p")
        tail = self.xprec * vx
        res, prec = 0, tail
        xe = 1
        for e, c in enumerate(self.coeffs):
            res += c.residue * xe
            prec = min(prec, c.precision + e * vx)
            xe *= x
        prec = min(prec, INF_CAP)
        return PadicInt(p, res, prec)

    def compose(self, j: int, m: int, N_out: int) -> "LambdaElement":
        """self((1+p)^(-j) (1+X)^m - 1) truncated at X^N_out."""
        p = self.p
        W = max(self.pprec, 1) + 2
        u = Fraction(1, (1 + p) ** j) if j >= 0 else Fraction((1 + p) ** (-j))
        g_vals = [u * math.comb(m, t) for t in range(N_out)]
        g_vals[0] -= 1
        g = LambdaElement(p, tuple(embed_rational(v, p, W + INF_GUARD) for v in g_vals), W + INF_GUARD)
        vc0 = valuation(g_vals[0], p) if g_vals[0] else INF
        one = LambdaElement.constant(PadicInt(p, 0, W + INF_GUARD), N_out)
        acc = one
        for i in range(self.xprec - 1, -1, -1):
            acc = acc * g
            c0 = acc.coeffs[0] + self.coeffs[i]
            acc = LambdaElement(p, (c0,) + acc.coeffs[1:], acc.pprec)
        Nf = self.xprec
        capped = []
        for e, c in enumerate(acc.coeffs):
            cap = INF if vc0 >= INF else vc0 * max(Nf - e, 0)
            capped.append(c.reduce(min(cap, INF_CAP)))
        return LambdaElement(p, tuple(capped), self.pprec)

    def residues(self) -> list[int]:
        return [c.residue for c in self.coeffs]

    def agrees_with(self, other: "LambdaElement") -> bool:
        return all(a.agrees_with(b) for a, b in zip(self.coeffs, other.coeffs))

    def is_zero(self) -> bool:
        return all(c.residue == 0 for c in self.coeffs)


INF_CAP = 400  # absolute ceiling on tracked digits
INF_GUARD = 40


def binomial_series(s: PadicInt, N: int) -> LambdaElement:
    """(1+X)^s = sum_k C(s,k) X^k; coefficient k loses v_p(k!) digits."""
    p, sigma = s.p, s.precision
    out = []
    for k in range(N):
        loss = valuation(math.factorial(k), p)
        prec = sigma - loss
        if prec <= 0:
            raise PrecisionExhausted(f"binomial coefficient {k} has no remaining precision")
        out.append(PadicInt(p, math.comb(s.residue, k), prec))
    return LambdaElement(p, tuple(out), sigma)


def polynomial_series(p: int, coeffs: Sequence[Fraction], N: int, M: int) -> LambdaElement:
    return LambdaElement.from_ints(p, coeffs, N, M)


# ---------------------------------------------------------------------------
# p-adic L-series by interpolation

@dataclass(frozen=True)
class TameBranch:
    """theta * omega^b with theta a Dirichlet character of conductor prime to p."""

    theta: DirichletCharacter
    b: int

    def is_trivial(self) -> bool:
        return self.theta.primitive().modulus == 1 and self.b == 0


def _sample_value(branch: TameBranch, p: int, k: int):
    """Exact value of Lbar at X = (1+p)^k - 1 for k = b mod p-1."""
    theta = branch.theta
    val = L_depleted(k, theta, p)
    if branch.is_trivial():
        val = val * ((1 + p) ** k - 1)
    return val


def _sample_weights(b: int, p: int, count: int) -> list[int]:
    k0 = b % (p - 1)
    while k0 <= 1:
        k0 += p - 1
    return [k0 + j * (p - 1) for j in range(count)]


def newton_loss(S: int, p: int) -> list[int]:
    """Digits lost in the j-th divided difference (exact worst case over the terms)."""
    out = []
    for j in range(S):
        worst = 0
        for i in range(j + 1):
            worst = max(worst, sum(1 + valuation(abs(i - m), p) for m in range(j + 1) if m != i))
        out.append(worst)
    return out


_lbar_cache: dict = {}
_lbar_lock = threading.Lock()


def dirichlet_Lbar_series(theta: DirichletCharacter, b: int, p: int, N: int, M: int) -> LambdaElement:
    """Element of Lambda mod (p^M, X^N) interpolating L^{(p)}(1-k, theta omega^(b-k)) (times X in the trivial branch)."""
    if p == 2:
        raise InvalidParams("the p-adic layer works with odd p")
    if theta.modulus % p == 0 and theta.primitive().modulus % p == 0:
        raise InvalidParams("theta must have conductor prime to p")
    if (p - 1) % theta.order:
        raise InvalidParams(f"character order {theta.order} does not divide p-1")
    branch = TameBranch(theta.primitive(), b % (p - 1))
    key = (branch, p, N, M)
    with _lbar_lock:
        hit = _lbar_cache.get(key)
    if hit is not None:
        return hit

    S = N + M - 1
    loss = newton_loss(S, p)
    W = M + max(loss) + 2
    weights = _sample_weights(branch.b, p, S + 2)
    xs = [(1 + p) ** k - 1 for k in weights]
    exact = [_sample_value(branch, p, k) for k in weights]
    ys = [embed_cyclotomic(v, p, W).residue for v in exact[:S]]

    # divided differences over Q on the integer representatives
    table = [Fraction(y) for y in ys]
    newton = [table[0]]
    for j in range(1, S):
        table = [(table[i + 1] - table[i]) / (xs[i + j] - xs[i]) for i in range(S - j)]
        newton.append(table[0])

    # expand sum c_j prod_{m<j} (X - x_m) into the power basis
    poly = [Fraction(0)]
    basis = [Fraction(1)]
    for j, c in enumerate(newton):
        poly = [(poly[i] if i < len(poly) else 0) + c * (basis[i] if i < len(basis) else 0)
                for i in range(max(len(poly), len(basis)))]
        basis = poly_mul(basis, [-xs[j], 1])

    coeffs = []
    for e in range(N):
        prec = min(M, S - e, min(W - loss[j] + max(0, j - e) for j in range(S)))
        if prec <= 0:
            raise PrecisionExhausted(f"coefficient {e} has no reliable digits")
        c = poly[e] if e < len(poly) else Fraction(0)
        coeffs.append(embed_rational(c, p, prec))
    elem = LambdaElement(p, tuple(coeffs), M)

    for k, x, v in zip(weights[S:], xs[S:], exact[S:]):
        got = elem.evaluate(x)
        want = embed_cyclotomic(v, p, W)
        if not got.agrees_with(want):
            raise ValidationFailed(f"held-out weight {k} disagrees mod {p}^{got.precision}")
    with _lbar_lock:
        _lbar_cache[key] = elem
    return elem


@dataclass(frozen=True)
class PoleFactor:
    """The factor (1+p)^(-j) (1+X)^m - 1 in a denominator."""

    j: int
    m: int

    def value_at(self, x: int, p: int) -> Fraction:
        return Fraction((1 + x) ** self.m, (1 + p) ** self.j) - 1


@dataclass(frozen=True)
class LambdaFraction:
    numerator: LambdaElement
    poles: tuple[PoleFactor, ...] = ()

    @property
    def pole_order(self) -> int:
        return len(self.poles)

    def specialize(self, x: int) -> tuple[PadicInt, int]:
        """(mantissa, shift) with value = mantissa * p^(-shift) at X = x.

        The mantissa is numerator(x) divided by the unit part of the pole
        product; its precision is that of numerator(x).
        """
        p = self.numerator.p
        num = self.numerator.evaluate(x)
        den = Fraction(1)
        for f in self.poles:
            den *= f.value_at(x, p)
        if den == 0:
            raise PrecisionExhausted("specialization point is a pole")
        v = valuation(den, p)
        unit = den / Fraction(p) ** v
        return num * embed_rational(unit, p, max(num.precision, 1)).inverse(), v

    def value_at_weight(self, kappa: int) -> PadicInt:
        """The specialization at (1+p)^kappa - 1 as a p-adic integer."""
        p = self.numerator.p
        mant, v = self.specialize((1 + p) ** kappa - 1)
        if v == 0:
            return mant
        if v >= mant.precision:
            raise PrecisionExhausted("pole division leaves no precision")
        if mant.residue % p ** v:
            raise PoleNotCancelled(f"value at weight {kappa} is not p-integral")
        return PadicInt(p, mant.residue // p ** v, mant.precision - v)

    def matches_exact(self, kappa: int, exact) -> tuple[bool, int]:
        """Compare the specialization with an exact (possibly non-integral) value.

        Returns (agreement, absolute precision of the comparison in digits).
        """
        p = self.numerator.p
        mant, v = self.specialize((1 + p) ** kappa - 1)
        scaled = as_cyclotomic(exact) * Fraction(p) ** v
        target = embed_cyclotomic(scaled, p, mant.precision + 1)
        return mant.agrees_with(target), mant.precision - v


def calL_series(theta: DirichletCharacter, b: int, p: int, N: int, M: int) -> LambdaFraction:
    Lbar = dirichlet_Lbar_series(theta, b, p, N, M)
    if TameBranch(theta.primitive(), b % (p - 1)).is_trivial():
        return LambdaFraction(Lbar, (PoleFactor(0, 1),))
    return LambdaFraction(Lbar, ())


# ---------------------------------------------------------------------------
# Lambda-adic Fourier coefficients

def _split_discriminant(d: int, p: int) -> tuple[int, int]:
    """d = d_tame * p* with the p-part written as omega^((p-1)/2); returns (d_tame, extra omega exponent)."""
    if d % p:
        return d, 0
    pstar = p if p % 4 == 1 else -p
    return d // pstar, (p - 1) // 2


def _check_lambda_inputs(n: int, chi: DirichletCharacter, a: int, p: int):
    if p == 2:
        raise InvalidParams("the p-adic layer works with odd p")
    if chi.modulus % p == 0:
        raise InvalidParams("p must not divide the modulus of chi")
    if not 0 <= a < p - 1:
        raise InvalidParams("a must satisfy 0 <= a < p-1")
    if (p - 1) % chi.order:
        raise InvalidParams(f"order of chi ({chi.order}) must divide p-1")
    if n < 1:
        raise InvalidParams("genus must be at least 1")


def lambda_coefficient(T: HalfIntegralMatrix, n: int, chi: DirichletCharacter, a: int, p: int,
                       N: int, M: int) -> LambdaFraction:
    _check_lambda_inputs(n, chi, a, p)
    if T.size != n:
        raise InvalidParams("index size must equal the genus")
    if not T.is_psd():
        raise InvalidParams("index must be positive semidefinite")
    Tp, _ = radical_reduction(T)
    r = Tp.size
    Nf = N + M  # inner series are composed, which costs one digit per missing term
    W = M + INF_GUARD

    const = Fraction(2) ** ((r + 1) // 2 - (n + 1) // 2)
    acc = LambdaElement.constant(embed_rational(const, p, W), N)
    poles: list[PoleFactor] = []

    chi2 = chi ** 2
    for i in range(r // 2 + 1, n // 2 + 1):
        factor = calL_series(chi2, 2 * a - 2 * i, p, Nf, M)
        acc = acc * factor.numerator.compose(2 * i, 2, N)
        poles += [PoleFactor(2 * i, 2) for _ in factor.poles]

    if r % 2 == 0:
        d = det_data(Tp).fund if r else 1
        d_tame, extra = _split_discriminant(d, p)
        theta = (kronecker_primitive(d_tame) * chi).primitive() if d_tame != 1 else chi
        factor = calL_series(theta, a - r // 2 + extra, p, Nf, M)
        acc = acc * factor.numerator.compose(r // 2, 1, N)
        poles += [PoleFactor(r // 2, 1) for _ in factor.poles]
        dd = det_data(Tp) if r else None
        bad = abs(dd.cond) if r else 1
    else:
        bad = abs(det_data(Tp).bigD)

    primes = sorted(factorize(bad)) if bad > 1 else []
    for l in primes:
        if l == p:
            continue
        F = siegel_series_poly(Tp, l)
        chi_l = character_image(chi, l, p, W)
        if chi_l.residue == 0 and chi.modulus % l == 0:
            continue  # F(0) = 1
        c = chi_l * teichmuller(l, p, W) ** a * embed_rational(Fraction(1, l ** (r + 1)), p, W)
        s = s_of(angle_part(l, p, W))
        total = LambdaElement.constant(PadicInt(p, 0, W), N)
        for jdeg, coef in enumerate(F.coeffs):
            if coef == 0:
                continue
            term = binomial_series(PadicInt(p, jdeg * s.residue, s.precision), N)
            total = total + term.scale(c ** jdeg * coef)
        acc = acc * total

    acc = acc.truncate(N, M)
    return LambdaFraction(acc, tuple(poles))


def B_factors(n: int) -> list[PoleFactor]:
    return [PoleFactor(2 * i, 2) for i in range(1, n // 2 + 1)] + [PoleFactor(j, 1) for j in range(n // 2 + 1)]


def _exact_factor_poly(f: PoleFactor, p: int) -> list[Fraction]:
    u = Fraction(1, (1 + p) ** f.j)
    out = [u * math.comb(f.m, t) for t in range(f.m + 1)]
    out[0] -= 1
    return out


def B_poly_exact(n: int, p: int) -> tuple[list[Fraction], list[Fraction]]:
    """Both displayed forms of B^(n)(X) as exact polynomials over Q."""
    first = [Fraction(1)]
    for f in B_factors(n):
        first = poly_mul(first, _exact_factor_poly(f, p))
    second = [Fraction(0), Fraction(1)]
    for i in range(1, n // 2 + 1):
        u = Fraction(1, (1 + p) ** i)
        lin_minus = [u - 1, u]
        lin_plus = [u + 1, u]
        second = poly_mul(second, poly_mul(poly_mul(lin_minus, lin_minus), lin_plus))
    return poly_trim(first), poly_trim(second)


def B_poly(n: int, p: int, N: int, M: int) -> LambdaElement:
    first, second = B_poly_exact(n, p)
    if first != second:
        raise AssertionError("the two forms of B^(n) differ")
    return LambdaElement.from_ints(p, first, N, M)


def integral_lambda_coefficient(T: HalfIntegralMatrix, n: int, chi: DirichletCharacter, a: int, p: int,
                                N: int, M: int) -> LambdaElement:
    frac = lambda_coefficient(T, n, chi, a, p, N, M)
    remaining = list(B_factors(n))
    for pole in frac.poles:
        if pole not in remaining:
            raise PoleNotCancelled(f"pole {pole} is not a factor of B^({n})")
        remaining.remove(pole)
    poly = [Fraction(1)]
    for f in remaining:
        poly = poly_mul(poly, _exact_factor_poly(f, p))
    cofactor = LambdaElement.from_ints(p, poly, N, M + INF_GUARD)
    return (frac.numerator * cofactor).truncate(N, M)


def B_value_at_weight(n: int, p: int, kappa: int) -> Fraction:
    x = (1 + p) ** kappa - 1
    val = Fraction(1)
    for f in B_factors(n):
        val *= f.value_at(x, p)
    return val
