"""Named verification suites shared by the command line and the test-suite.

Each suite returns a SuiteReport: one CheckResult per property, with the
first counterexample recorded when a property fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .characters import DirichletCharacter
from .eisenstein import (
    EisensteinParams,
    FourierTable,
    bi_at_y1,
    build_table,
    classical_coefficient,
    stabilization_polys,
    stabilize_via_operator,
    stabilized_coefficient,
    u_pn_apply,
)
from .errors import EnumerationTooLarge, NonIntegralQuotient, SiegelEisError
from .exactnum import poly_divmod
from .lambda_adic import (
    B_poly_exact,
    B_value_at_weight,
    embed_cyclotomic,
    integral_lambda_coefficient,
    lambda_coefficient,
)
from .lvalues import bernoulli
from .quadforms import HalfIntegralMatrix, conjugate, det_data, enumerate_indices, random_unimodular
from .siegelseries import (
    DEFAULT_BUDGET,
    F_closed_rank1,
    F_closed_rank2,
    F_from_b,
    enumeration_size,
    expected_degree,
    functional_equation_check,
)


@dataclass
class CheckResult:
    name: str
    passed: bool
    cases: int = 0
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out = {"property": self.name, "passed": self.passed, "cases": self.cases}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteReport:
    suite: str
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        c = CheckResult(name, True)
        self.checks.append(c)
        return c

    def record(self, name: str, ok: bool, **detail):
        c = self.check(name)
        c.cases += 1
        if not ok and c.passed:
            c.passed = False
            c.counterexample = {k: _jsonable(v) for k, v in detail.items()}

    def to_json(self) -> dict:
        return {"suite": self.suite, "passed": self.passed, "checks": [c.to_json() for c in self.checks]}


def _jsonable(v):
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    if isinstance(v, Fraction):
        return str(v)
    if hasattr(v, "to_json"):
        return v.to_json()
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


# ---------------------------------------------------------------------------
# genus one

def divisor_sum(m: int, k: int, avoid: int | None = None) -> int:
    return sum(d ** k for d in range(1, m + 1) if m % d == 0 and (avoid is None or d % avoid))


def genus1_suite(weight: int = 4, prime: int = 5, bound: int = 50) -> SuiteReport:
    rep = SuiteReport("genus1")
    params = EisensteinParams(1, weight)
    zeta = -bernoulli(weight) / weight
    classical = build_table(params, None, bound)
    stabilized = build_table(params, prime, bound)
    for m in range(bound + 1):
        key = HalfIntegralMatrix.from_entries([[m]]).key
        want_c = zeta / 2 if m == 0 else Fraction(divisor_sum(m, weight - 1))
        want_s = (1 - Fraction(prime) ** (weight - 1)) * zeta / 2 if m == 0 else \
            Fraction(divisor_sum(m, weight - 1, prime))
        got_c, got_s = classical[key], stabilized[key]
        rep.record("classical equals divisor sums", got_c == want_c, T=key, got=got_c, expected=want_c)
        rep.record("stabilized equals p-depleted divisor sums", got_s == want_s, T=key, got=got_s, expected=want_s)
    return rep


# ---------------------------------------------------------------------------
# stabilization by the operator

def check_fixed_point(rep: SuiteReport, table: FourierTable, p: int, label: str):
    shifted = u_pn_apply(table, p)
    for key, val in shifted.entries.items():
        rep.record(f"U_p fixes the {label} table", val == table[key], T=key, at_T=table[key], at_pT=val)


def operator_suite(genus: int, weight: int, prime: int, character: DirichletCharacter | None = None,
                   trace_bound: int = 3, jobs: int = 1) -> SuiteReport:
    rep = SuiteReport("operator")
    params = EisensteinParams(genus, weight, character or DirichletCharacter.trivial())
    closed = build_table(params, prime, trace_bound, jobs)
    via_op = stabilize_via_operator(params, prime, trace_bound, jobs)
    for key in closed.sorted_keys():
        rep.record("operator stabilization equals closed form", closed[key] == via_op[key],
                   T=key, closed=closed[key], operator=via_op[key])
    check_fixed_point(rep, closed, prime, "stabilized")
    return rep


def invariance_suite(genus: int, weight: int, prime: int | None, character: DirichletCharacter | None = None,
                     trace_bound: int = 3, conjugations: int = 50, seed: int = 0) -> SuiteReport:
    """Coefficients are unchanged under T -> U^t T U for random unimodular U."""
    rep = SuiteReport("invariance")
    params = EisensteinParams(genus, weight, character or DirichletCharacter.trivial())
    table = build_table(params, prime, trace_bound)
    rng = random.Random(seed)
    for _ in range(conjugations):
        U = random_unimodular(genus, rng)
        for key in table.sorted_keys():
            T = HalfIntegralMatrix.from_key(key)
            C = conjugate(T, U)
            val = classical_coefficient(params, C) if prime is None else stabilized_coefficient(params, prime, C)
            rep.record("coefficients are GL_n(Z)-invariant", val == table[key], T=key, conjugate=C.key,
                       expected=table[key], got=val)
    return rep


# ---------------------------------------------------------------------------
# Siegel series against the defining sum

def random_nondegenerate(rng: random.Random, max_disc: int = 2000) -> HalfIntegralMatrix:
    """A positive definite T of rank 1-3 with |D| <= max_disc."""
    while True:
        r = rng.randint(1, 3)
        G = [[0] * r for _ in range(r)]
        for i in range(r):
            G[i][i] = 2 * rng.randint(1, 12)
            for j in range(i):
                G[i][j] = G[j][i] = rng.randint(-4, 4)
        T = HalfIntegralMatrix.from_doubled(G)
        if not T.is_psd() or T.det == 0:
            continue
        if abs(det_data(T).bigD) <= max_disc:
            return T


def sample_siegel_cases(count: int, seed: int, primes=(2, 3, 5), budget: int = DEFAULT_BUDGET):
    """Pairs (T, l) whose brute-force enumeration fits the budget; oversize pairs are redrawn."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        T = random_nondegenerate(rng)
        D = abs(det_data(T).bigD)
        dividing = [l for l in primes if D % l == 0]
        l = rng.choice(dividing or list(primes))
        if enumeration_size(T.size, l, expected_degree(T, l)) > budget:
            continue
        out.append((T, l))
    return out


def siegel_series_suite(count: int = 50, seed: int = 0, budget: int = DEFAULT_BUDGET) -> SuiteReport:
    rep = SuiteReport("siegel-series")
    for T, l in sample_siegel_cases(count, seed, budget=budget):
        ctx = {"T": T.key, "l": l}
        try:
            F = F_from_b(T, l, budget)
        except (NonIntegralQuotient, EnumerationTooLarge) as exc:
            rep.record("integral with constant term 1", False, error=str(exc), **ctx)
            continue
        rep.record("integral with constant term 1", F.coeffs[0] == 1, F=F, **ctx)
        rep.record("functional equation", functional_equation_check(T, l, F), F=F, **ctx)
        rep.record("degree formula", F.degree == expected_degree(T, l), F=F,
                   expected_degree=expected_degree(T, l), **ctx)
        if T.size == 1:
            closed = F_closed_rank1(T.doubled[0][0] // 2, l)
            rep.record("rank-1 closed form", closed == F, F=F, closed=closed, **ctx)
        elif T.size == 2 and l != 2:
            closed = F_closed_rank2(T, l)
            rep.record("rank-2 closed form", closed == F, F=F, closed=closed, **ctx)
    return rep


# ---------------------------------------------------------------------------
# Lambda-adic side

def lambda_specialize_suite(genera=(1, 2), prime: int = 5, a: int = 2, xprec: int = 6, pprec: int = 8,
                            weights=(6, 10), held_out=(14,), trace_bound: int = 2,
                            character: DirichletCharacter | None = None, min_precision: int = 4) -> SuiteReport:
    rep = SuiteReport("lambda-specialize")
    chi = character or DirichletCharacter.trivial()
    for n in genera:
        for T in enumerate_indices(n, trace_bound):
            frac = lambda_coefficient(T, n, chi, a, prime, xprec, pprec)
            for k in tuple(weights) + tuple(held_out):
                exact = stabilized_coefficient(EisensteinParams(n, k, chi), prime, T)
                ok, prec = frac.matches_exact(k, exact)
                name = "held-out weight matches" if k in held_out else "specialization matches"
                rep.record(name, ok, genus=n, T=T.key, weight=k, exact=exact, precision=prec)
                rep.record(f"tracked precision at least {prime}^{min_precision}", prec >= min_precision,
                           genus=n, T=T.key, weight=k, precision=prec)
    return rep


def kummer_suite(genera=(1, 2), prime: int = 5, a: int = 2, xprec: int = 6, pprec: int = 8,
                 kappa: int = 6, trace_bound: int = 2, character: DirichletCharacter | None = None) -> SuiteReport:
    """Integral coefficients at kappa and kappa + (p-1)p agree mod p^2."""
    rep = SuiteReport("kummer")
    chi = character or DirichletCharacter.trivial()
    k2 = kappa + (prime - 1) * prime
    for n in genera:
        for T in enumerate_indices(n, trace_bound):
            ctx = {"genus": n, "T": T.key}
            try:
                elem = integral_lambda_coefficient(T, n, chi, a, prime, xprec, pprec)
            except SiegelEisError as exc:
                rep.record("poles cancel (pole order 0)", False, error=str(exc), **ctx)
                continue
            rep.record("poles cancel (pole order 0)", True)
            exact = []
            for k in (kappa, k2):
                val = B_value_at_weight(n, prime, k) * stabilized_coefficient(EisensteinParams(n, k, chi), prime, T)
                exact.append(embed_cyclotomic(val, prime, pprec + 4))
            lam = [elem.evaluate((1 + prime) ** k - 1) for k in (kappa, k2)]
            rep.record("exact values congruent mod p^2", exact[0].agrees_with(exact[1], 2),
                       a=exact[0], b=exact[1], **ctx)
            rep.record("Lambda values congruent mod p^2",
                       lam[0].precision >= 2 and lam[1].precision >= 2 and lam[0].agrees_with(lam[1], 2),
                       a=lam[0], b=lam[1], **ctx)
            rep.record("Lambda values equal exact values",
                       lam[0].agrees_with(exact[0]) and lam[1].agrees_with(exact[1]),
                       lam=lam, exact=exact, **ctx)
    return rep


# ---------------------------------------------------------------------------
# polynomial bookkeeping

def polynomial_suite(max_genus_pr: int = 6, max_genus_b: int = 5, primes=(2, 3, 5, 7)) -> SuiteReport:
    rep = SuiteReport("polynomials")
    for p in primes:
        for n in range(1, max_genus_pr + 1):
            sp = stabilization_polys(n, p)
            if n <= 2:
                rep.record("P = R for n <= 2", sp.P == sp.R, genus=n, p=p)
            _, rem = poly_divmod(bi_at_y1(sp.R), bi_at_y1(sp.P))
            rep.record("P(X,1) divides R(X,1)", rem == [0], genus=n, p=p)
        for n in range(1, max_genus_b + 1):
            first, second = B_poly_exact(n, p)
            rep.record("two forms of B agree", first == second, genus=n, p=p)
    return rep


SUITES = {
    "genus1": genus1_suite,
    "operator": operator_suite,
    "siegel-series": siegel_series_suite,
    "kummer": kummer_suite,
    "lambda-specialize": lambda_specialize_suite,
    "invariance": invariance_suite,
    "polynomials": polynomial_suite,
}
