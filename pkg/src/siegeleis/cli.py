"""Command-line front end.

Exit status: 0 on success, 1 when a verification suite fails, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .characters import DirichletCharacter
from .eisenstein import EisensteinParams, build_table
from .errors import SiegelEisError
from .exactnum import is_prime
from .lambda_adic import lambda_coefficient
from .quadforms import HalfIntegralMatrix, enumerate_indices
from .siegelseries import siegel_series_poly
from . import verify

EXIT_OK, EXIT_FAILED, EXIT_INVALID = 0, 1, 2


class InvalidJob(Exception):
    pass


def _require(args, *names):
    missing = [n for n in names if getattr(args, n.replace("-", "_")) is None]
    if missing:
        raise InvalidJob(f"{args.verb} needs " + ", ".join("--" + n for n in missing))


def _character(args) -> DirichletCharacter:
    if args.char is None:
        return DirichletCharacter.trivial()
    try:
        return DirichletCharacter.parse(args.char)
    except ValueError as exc:
        raise InvalidJob(f"bad character spec {args.char!r}: {exc}") from None


def _prime(args) -> int:
    if not is_prime(args.prime):
        raise InvalidJob(f"{args.prime} is not prime")
    return args.prime


def _params(args) -> EisensteinParams:
    _require(args, "genus", "weight")
    return EisensteinParams(args.genus, args.weight, _character(args))


def run_classical(args) -> tuple[dict, int]:
    _require(args, "trace-bound")
    return build_table(_params(args), None, args.trace_bound, args.jobs).to_json(), EXIT_OK


def run_stabilize(args) -> tuple[dict, int]:
    _require(args, "trace-bound", "prime")
    params = _params(args)
    return build_table(params, _prime(args), args.trace_bound, args.jobs).to_json(), EXIT_OK


def run_lambda(args) -> tuple[dict, int]:
    """Coefficients of the Lambda-adic family through the weight given by --weight."""
    _require(args, "genus", "weight", "prime", "trace-bound")
    p = _prime(args)
    chi = _character(args)
    a = args.weight % (p - 1)
    N, M = args.xprec, args.pprec
    entries = []
    for T in enumerate_indices(args.genus, args.trace_bound):
        frac = lambda_coefficient(T, args.genus, chi, a, p, N, M)
        entries.append({
            "T": T.key,
            "pole_order": frac.pole_order,
            "coeffs mod (p^M, X^N)": [str(c.residue) for c in frac.numerator.coeffs],
            "precisions": frac.numerator.precisions(),
            "poles": [{"j": f.j, "m": f.m} for f in frac.poles],
        })
    params = {"genus": args.genus, "prime": p, "a": a, "character": chi.spec_string(),
              "xprec": N, "pprec": M, "trace_bound": args.trace_bound}
    return {"params": params, "entries": entries}, EXIT_OK


def run_siegel_series(args) -> tuple[dict, int]:
    _require(args, "index", "prime")
    try:
        T = HalfIntegralMatrix.from_key(args.index)
    except ValueError as exc:
        raise InvalidJob(f"bad index {args.index!r}: {exc}") from None
    F = siegel_series_poly(T, _prime(args))
    return {"T": T.key, "l": args.prime, "rank": T.rank, "F": F.to_json()}, EXIT_OK


def run_verify(args) -> tuple[dict, int]:
    _require(args, "suite")
    chi = _character(args) if args.char else None
    s = args.suite
    if s == "genus1":
        rep = verify.genus1_suite(args.weight or 4, args.prime or 5, args.trace_bound or 50)
    elif s == "operator":
        _require(args, "genus", "weight", "prime")
        rep = verify.operator_suite(args.genus, args.weight, _prime(args), chi, args.trace_bound or 3, args.jobs)
    elif s == "invariance":
        _require(args, "genus", "weight")
        p = _prime(args) if args.prime is not None else None
        rep = verify.invariance_suite(args.genus, args.weight, p, chi, args.trace_bound or 3, seed=args.seed)
    elif s == "siegel-series":
        rep = verify.siegel_series_suite(50, args.seed)
    elif s in ("kummer", "lambda-specialize"):
        p = args.prime or 5
        genera = (args.genus,) if args.genus else (1, 2)
        a = (args.weight if args.weight is not None else 2) % (p - 1)
        fn = verify.kummer_suite if s == "kummer" else verify.lambda_specialize_suite
        kw = {"genera": genera, "prime": p, "a": a, "xprec": args.xprec, "pprec": args.pprec,
              "trace_bound": args.trace_bound or 2, "character": chi}
        if s == "kummer" and args.weight is not None:
            kw["kappa"] = args.weight
        rep = fn(**kw)
    elif s == "polynomials":
        rep = verify.polynomial_suite()
    else:
        raise InvalidJob(f"unknown suite {s!r}")
    return rep.to_json(), EXIT_OK if rep.passed else EXIT_FAILED


VERBS = {
    "classical": run_classical,
    "stabilize": run_stabilize,
    "lambda": run_lambda,
    "siegel-series": run_siegel_series,
    "verify": run_verify,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="siegeleis", description="Siegel Eisenstein coefficients and their p-adic families")
    ap.add_argument("verb", choices=sorted(VERBS))
    ap.add_argument("suite_arg", nargs="?", help="suite name for verify (same as --suite)")
    ap.add_argument("--genus", type=int)
    ap.add_argument("--weight", type=int)
    ap.add_argument("--prime", type=int)
    ap.add_argument("--char", help='character as "M:g1^e1,g2^e2"')
    ap.add_argument("--trace-bound", type=int)
    ap.add_argument("--index", help='half-integral matrix key "n:g11,g12,...,gnn" (doubled upper triangle)')
    ap.add_argument("--xprec", type=int, default=6)
    ap.add_argument("--pprec", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--out")
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--suite", choices=sorted(verify.SUITES))
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.suite_arg is not None:
        if args.verb != "verify" or args.suite_arg not in verify.SUITES:
            ap.error(f"unexpected argument {args.suite_arg!r}")
        args.suite = args.suite or args.suite_arg
    try:
        payload, status = VERBS[args.verb](args)
    except (InvalidJob, SiegelEisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
