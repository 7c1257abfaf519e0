"""Acceptance criteria 1-8.

Each test prints one line "criterion N: PASS|FAIL ..." to the terminal.
Run directly with ``python tests/test_acceptance.py`` to get just those lines.
"""

from __future__ import annotations

import random
import sys
import time
from fractions import Fraction
from functools import lru_cache

import pytest
import sympy

from siegeleis.characters import DirichletCharacter
from siegeleis.eisenstein import (
    EisensteinParams,
    build_table,
    classical_coefficient,
    stabilize_via_operator,
    stabilized_coefficient,
    u_pn_apply,
)
from siegeleis.quadforms import HalfIntegralMatrix, conjugate, random_unimodular
from siegeleis import verify

ORDER_SIX_MOD_7 = "7:3^1"


def report(n: int, ok: bool, detail: str, seconds: float, limit: float | None = None):
    timing = f"{seconds:.2f}s" + (f" (limit {limit:g}s)" if limit else "")
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}  [{timing}]"
    print(line, flush=True)
    return line


# ---------------------------------------------------------------------------
# 1. genus one, against sympy Bernoulli numbers and divisor sums

def criterion_1():
    t0 = time.perf_counter()
    p, bad = 5, []
    for k in (4, 6):
        params = EisensteinParams(1, k)
        classical = build_table(params, None, 50)
        stabilized = build_table(params, p, 50)
        zeta = -Fraction(str(sympy.bernoulli(k))) / k
        for m in range(51):
            key = f"1:{2 * m}"
            if m == 0:
                want_c, want_s = zeta / 2, (1 - Fraction(p) ** (k - 1)) * zeta / 2
            else:
                want_c = int(sympy.divisor_sigma(m, k - 1))
                m0 = m
                while m0 % p == 0:
                    m0 //= p
                want_s = int(sympy.divisor_sigma(m0, k - 1))
            if classical[key] != want_c or stabilized[key] != want_s:
                bad.append((k, m))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 1
    return ok, f"kappa in (4, 6), p=5, m<=50, mismatches={bad[:3]}", dt, 1


# ---------------------------------------------------------------------------
# 2. Siegel series against the defining sum

def criterion_2():
    t0 = time.perf_counter()
    rep = verify.siegel_series_suite(count=50, seed=20241)
    dt = time.perf_counter() - t0
    ranks = [0, 0, 0]
    for T, _ in verify.sample_siegel_cases(50, 20241):
        ranks[T.size - 1] += 1
    summary = f"ranks 1/2/3: {ranks[0]}/{ranks[1]}/{ranks[2]}; " + ", ".join(f"{c.name}: {c.cases}" for c in rep.checks)
    failed = [c.to_json() for c in rep.checks if not c.passed]
    return rep.passed and dt < 120 and all(ranks), f"50 cases ({summary}) failed={failed}", dt, 120


# ---------------------------------------------------------------------------
# 3-5. stabilization tables

def configurations():
    out = []
    for char_spec, weights in ((None, {1: 4, 2: 4, 3: 6}), (ORDER_SIX_MOD_7, {1: 3, 2: 5, 3: 5})):
        for n, k in weights.items():
            for p in (2, 3, 5):
                out.append((n, k, char_spec, p, 2 if n == 3 else 3))
    return out


def _params(n, k, char_spec):
    return EisensteinParams(n, k, DirichletCharacter.parse(char_spec) if char_spec else DirichletCharacter.trivial())


@lru_cache(maxsize=None)
def stabilized_tables(n, k, char_spec, p, bound):
    params = _params(n, k, char_spec)
    return build_table(params, p, bound), stabilize_via_operator(params, p, bound)


def criterion_3():
    t0 = time.perf_counter()
    bad, entries = [], 0
    for cfg in configurations():
        closed, op = stabilized_tables(*cfg)
        entries += len(closed.entries)
        for key in closed.entries:
            if closed[key] != op[key]:
                bad.append((cfg, key))
    dt = time.perf_counter() - t0
    return not bad and dt < 600, f"{len(configurations())} tables, {entries} entries, mismatches={bad[:3]}", dt, 600


def criterion_4():
    t0 = time.perf_counter()
    bad, checked = [], 0
    for cfg in configurations():
        closed, _ = stabilized_tables(*cfg)
        for key, val in u_pn_apply(closed, cfg[3]).entries.items():
            checked += 1
            if val != closed[key]:
                bad.append((cfg, key))
    dt = time.perf_counter() - t0
    return not bad and checked > 0, f"{checked} pairs (T, pT), mismatches={bad[:3]}", dt, None


def criterion_5():
    t0 = time.perf_counter()
    rng = random.Random(5)
    bad, checked = [], 0
    for cfg in configurations():
        n, k, char_spec, p, bound = cfg
        params = _params(n, k, char_spec)
        closed, _ = stabilized_tables(*cfg)
        classical = build_table(params, None, bound)
        for _ in range(50):
            U = random_unimodular(n, rng)
            for key in closed.entries:
                C = conjugate(HalfIntegralMatrix.from_key(key), U)
                checked += 2
                if stabilized_coefficient(params, p, C) != closed[key]:
                    bad.append((cfg, key, C.key))
                if classical_coefficient(params, C) != classical[key]:
                    bad.append((cfg, key, C.key, "classical"))
    dt = time.perf_counter() - t0
    return not bad, f"{checked} conjugated coefficients (50 per table), mismatches={bad[:3]}", dt, None


# ---------------------------------------------------------------------------
# 6-8. Lambda-adic family and polynomial bookkeeping

def criterion_6():
    t0 = time.perf_counter()
    rep = verify.lambda_specialize_suite(genera=(1, 2), prime=5, a=2, xprec=6, pprec=8,
                                         weights=(6, 10), held_out=(14,), trace_bound=2, min_precision=4)
    dt = time.perf_counter() - t0
    summary = ", ".join(f"{c.name}: {c.cases}" for c in rep.checks)
    failed = [c.to_json() for c in rep.checks if not c.passed]
    return rep.passed and dt < 300, f"p=5, a=2, N=6, M=8 ({summary}) failed={failed}", dt, 300


def criterion_7():
    t0 = time.perf_counter()
    rep = verify.kummer_suite(genera=(1, 2), prime=5, a=2, xprec=6, pprec=8, kappa=6, trace_bound=2)
    dt = time.perf_counter() - t0
    summary = ", ".join(f"{c.name}: {c.cases}" for c in rep.checks)
    failed = [c.to_json() for c in rep.checks if not c.passed]
    return rep.passed, f"kappa 6 vs 26 mod 5^2 ({summary}) failed={failed}", dt, None


def criterion_8():
    t0 = time.perf_counter()
    rep = verify.polynomial_suite(max_genus_pr=6, max_genus_b=5)
    dt = time.perf_counter() - t0
    summary = ", ".join(f"{c.name}: {c.cases}" for c in rep.checks)
    return rep.passed and dt < 5, summary, dt, 5


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8]


@pytest.mark.parametrize("number", range(1, 9))
def test_acceptance_criterion(number, capsys):
    ok, detail, dt, limit = CRITERIA[number - 1]()
    with capsys.disabled():
        report(number, ok, detail, dt, limit)
    assert ok, detail


if __name__ == "__main__":
    results = []
    for i, fn in enumerate(CRITERIA, 1):
        ok, detail, dt, limit = fn()
        report(i, ok, detail, dt, limit)
        results.append(ok)
    sys.exit(0 if all(results) else 1)
