"""Fourier coefficients of Siegel Eisenstein series and their semi-ordinary p-stabilization."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .characters import DirichletCharacter, kronecker_primitive
from .errors import InvalidParams, MissingIndex
from .exactnum import (
    CyclotomicNumber,
    as_cyclotomic,
    factorize,
    poly_divmod,
    poly_trim,
)
from .lvalues import L_at_negative, L_depleted
from .quadforms import (
    HalfIntegralMatrix,
    det_data,
    enumerate_indices,
    radical_reduction,
    scale,
)
from .siegelseries import siegel_series_poly


@dataclass(frozen=True)
class EisensteinParams:
    genus: int
    weight: int
    character: DirichletCharacter = field(default_factory=DirichletCharacter.trivial)

    def __post_init__(self):
        n, k, chi = self.genus, self.weight, self.character
        if n < 1:
            raise InvalidParams("genus must be at least 1")
        if k <= n + 1:
            raise InvalidParams(f"weight {k} must exceed genus + 1 = {n + 1}")
        if chi.parity() != (-1) ** k:
            raise InvalidParams("chi(-1) must equal (-1)^weight")
        M = chi.modulus
        if M % 2 == 0:
            raise InvalidParams("modulus must be odd")
        if M > 1 and not (chi.is_primitive() and chi.square_locally_nontrivial()):
            raise InvalidParams("chi must be primitive with chi^2 locally non-trivial at every l | M")

    def to_json(self) -> dict:
        return {"genus": self.genus, "weight": self.weight, "character": self.character.spec_string()}


# ---------------------------------------------------------------------------
# stabilization polynomials (bivariate: {(deg_X, deg_Y): coeff})

BiPoly = dict


def _bi_mul(a: BiPoly, b: BiPoly) -> BiPoly:
    out: BiPoly = {}
    for (i, j), c in a.items():
        for (k, m), d in b.items():
            out[(i + k, j + m)] = out.get((i + k, j + m), 0) + c * d
    return {e: c for e, c in out.items() if c}


def _bi_prod(factors: Iterable[BiPoly]) -> BiPoly:
    out: BiPoly = {(0, 0): 1}
    for f in factors:
        out = _bi_mul(out, f)
    return out


def bi_eval(a: BiPoly, x, y):
    acc = 0
    for (i, j), c in a.items():
        acc = acc + c * (x ** i) * (y ** j)
    return acc


def bi_at_y1(a: BiPoly) -> list[int]:
    """The univariate polynomial a(X, 1)."""
    deg = max((i for i, _ in a), default=0)
    out = [0] * (deg + 1)
    for (i, _), c in a.items():
        out[i] += c
    return poly_trim(out)


def stabilizer_exponent(n: int, j: int) -> int:
    return j * (2 * n - j + 1) // 2


@dataclass(frozen=True)
class StabilizationPolys:
    genus: int
    prime: int
    P: BiPoly
    R: BiPoly
    Rtilde: BiPoly

    def P_divides_R_at_one(self) -> bool:
        _, rem = poly_divmod(bi_at_y1(self.R), bi_at_y1(self.P))
        return rem == [0]


def stabilization_polys(n: int, p: int) -> StabilizationPolys:
    P = _bi_prod([{(0, 0): 1, (1, 1): -(p ** n)}]
                 + [{(0, 0): 1, (2, 1): -(p ** (2 * n - 2 * i + 1))} for i in range(1, n // 2 + 1)])
    R = _bi_prod({(0, 0): 1, (j, 1): -(p ** stabilizer_exponent(n, j))} for j in range(1, n + 1))
    Rt = _bi_prod({(0, 1): 1, (j, 0): -(p ** stabilizer_exponent(n, j))} for j in range(1, n + 1))
    return StabilizationPolys(n, p, P, R, Rt)


def reflect_in_y(a: BiPoly, n: int) -> BiPoly:
    """Y^n a(X, 1/Y)."""
    return {(i, n - j): c for (i, j), c in a.items()}


# ---------------------------------------------------------------------------
# coefficient formulas

def _half_power(r: int, n: int) -> Fraction:
    return Fraction(2) ** ((r + 1) // 2 - (n + 1) // 2)


def _rank_data(T: HalfIntegralMatrix):
    if not T.is_psd():
        raise InvalidParams(f"{T.key} is not positive semidefinite")
    Tp, _ = radical_reduction(T)
    return Tp


def _local_primes(Tp: HalfIntegralMatrix) -> list[int]:
    r = Tp.size
    if r == 0:
        return []
    dd = det_data(Tp)
    N = abs(dd.cond) if r % 2 == 0 else abs(dd.bigD)
    return sorted(factorize(N)) if N > 1 else []


def _coefficient(params: EisensteinParams, T: HalfIntegralMatrix, p: int | None) -> CyclotomicNumber:
    n, k, chi = params.genus, params.weight, params.character
    if T.size != n:
        raise InvalidParams(f"index has size {T.size}, genus is {n}")
    Tp = _rank_data(T)
    r = Tp.size

    def L(s_arg: int, psi: DirichletCharacter):
        # L(1 - s_arg, psi), depleted at p when stabilizing
        return L_at_negative(s_arg, psi) if p is None else L_depleted(s_arg, psi, p)

    val = as_cyclotomic(_half_power(r, n))
    chi2 = chi ** 2
    for i in range(r // 2 + 1, n // 2 + 1):
        val = val * L(2 * k - 2 * i, chi2)
    if r % 2 == 0:
        d = det_data(Tp).fund if r else 1
        psi = chi * kronecker_primitive(d)
        val = val * L(k - r // 2, psi)
    for l in _local_primes(Tp):
        if l == p:
            continue
        F = siegel_series_poly(Tp, l)
        x = chi(l) * Fraction(l) ** (k - r - 1)
        val = val * F.evaluate(x)
    return val


def classical_coefficient(params: EisensteinParams, T: HalfIntegralMatrix) -> CyclotomicNumber:
    return _coefficient(params, T, None)


def _check_prime(params: EisensteinParams, p: int):
    if p < 2 or len(factorize(p)) != 1 or factorize(p).get(p) != 1:
        raise InvalidParams(f"{p} is not prime")
    if params.character.modulus % p == 0:
        raise InvalidParams("p must not divide the modulus of chi")


def stabilized_coefficient(params: EisensteinParams, p: int, T: HalfIntegralMatrix) -> CyclotomicNumber:
    _check_prime(params, p)
    return _coefficient(params, T, p)


# ---------------------------------------------------------------------------
# tables

@dataclass
class FourierTable:
    params: EisensteinParams
    kind: str
    entries: dict[str, CyclotomicNumber]
    prime: int | None = None
    trace_bound: int | None = None

    def __getitem__(self, T: HalfIntegralMatrix | str) -> CyclotomicNumber:
        key = T if isinstance(T, str) else T.key
        try:
            return self.entries[key]
        except KeyError:
            raise MissingIndex(key) from None

    def __contains__(self, T) -> bool:
        key = T if isinstance(T, str) else T.key
        return key in self.entries

    def sorted_keys(self) -> list[str]:
        return sorted(self.entries, key=lambda s: HalfIntegralMatrix.from_key(s).key_tuple())

    def to_json(self) -> dict:
        params = self.params.to_json()
        if self.prime is not None:
            params["prime"] = self.prime
        if self.trace_bound is not None:
            params["trace_bound"] = self.trace_bound
        params["kind"] = self.kind
        return {"params": params, "entries": {k: self.entries[k].to_json() for k in self.sorted_keys()}}


def u_pn_apply(table: FourierTable, p: int, indices: Iterable[HalfIntegralMatrix] | None = None) -> FourierTable:
    """A(T) -> A(pT); without explicit indices, every T whose pT is tabulated."""
    out = {}
    if indices is None:
        for key in table.entries:
            T = HalfIntegralMatrix.from_key(key)
            pk = scale(T, p).key
            if pk in table.entries:
                out[key] = table.entries[pk]
    else:
        for T in indices:
            out[T.key] = table[scale(T, p)]
    return FourierTable(table.params, table.kind, out, table.prime, None)


def _fill(fn, params, p, indices, jobs: int) -> dict[str, CyclotomicNumber]:
    if jobs > 1 and len(indices) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            vals = list(ex.map(fn, [params] * len(indices), [p] * len(indices), indices, chunksize=4))
    else:
        vals = [fn(params, p, T) for T in indices]
    return {T.key: v for T, v in zip(indices, vals)}


def _classical_job(params, _p, T):
    return classical_coefficient(params, T)


def _stabilized_job(params, p, T):
    return stabilized_coefficient(params, p, T)


def _operator_job(params, p, T):
    return operator_coefficient(params, p, T)


def build_table(params: EisensteinParams, p: int | None, trace_bound: int, jobs: int = 1) -> FourierTable:
    indices = enumerate_indices(params.genus, trace_bound)
    if p is None:
        return FourierTable(params, "classical", _fill(_classical_job, params, None, indices, jobs), None, trace_bound)
    _check_prime(params, p)
    return FourierTable(params, "stabilized", _fill(_stabilized_job, params, p, indices, jobs), p, trace_bound)


def operator_weights(params: EisensteinParams, p: int) -> tuple[CyclotomicNumber, list[CyclotomicNumber]]:
    """The scalar P(x,1)/R(x,1) and the coefficients c_m = (-1)^m s_m(...) multiplying A(p^{n-m} T)."""
    n, k, chi = params.genus, params.weight, params.character
    x = chi(p) * Fraction(p) ** (k - n - 1)
    polys = stabilization_polys(n, p)
    scalar = bi_eval(polys.P, x, 1) / bi_eval(polys.R, x, 1)
    # Rtilde(x, Y) = sum_m c_m Y^{n-m}
    weights = [as_cyclotomic(0)] * (n + 1)
    for (i, j), c in polys.Rtilde.items():
        weights[n - j] = weights[n - j] + c * x ** i
    return as_cyclotomic(scalar), weights


def operator_coefficient(params: EisensteinParams, p: int, T: HalfIntegralMatrix) -> CyclotomicNumber:
    _check_prime(params, p)
    scalar, weights = operator_weights(params, p)
    acc = as_cyclotomic(0)
    for m, w in enumerate(weights):
        if w == 0:
            continue
        acc = acc + w * classical_coefficient(params, scale(T, p ** (params.genus - m)))
    return scalar * acc


def stabilize_via_operator(params: EisensteinParams, p: int, trace_bound: int, jobs: int = 1) -> FourierTable:
    _check_prime(params, p)
    indices = enumerate_indices(params.genus, trace_bound)
    return FourierTable(params, "operator", _fill(_operator_job, params, p, indices, jobs), p, trace_bound)
