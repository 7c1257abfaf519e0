"""Exact Fourier coefficients of Siegel Eisenstein series, their p-stabilization and Lambda-adic families."""

from .characters import DirichletCharacter, kronecker, twist
from .eisenstein import (
    EisensteinParams,
    FourierTable,
    build_table,
    classical_coefficient,
    stabilization_polys,
    stabilize_via_operator,
    stabilized_coefficient,
    u_pn_apply,
)
from .exactnum import CyclotomicNumber
from .lambda_adic import (
    B_poly,
    LambdaElement,
    LambdaFraction,
    PadicInt,
    dirichlet_Lbar_series,
    integral_lambda_coefficient,
    lambda_coefficient,
)
from .lvalues import L_at_negative, L_depleted, gen_bernoulli
from .quadforms import HalfIntegralMatrix, enumerate_indices
from .siegelseries import F_from_b, b_series_bruteforce, siegel_series_poly

__all__ = [
    "B_poly", "CyclotomicNumber", "DirichletCharacter", "EisensteinParams", "F_from_b", "FourierTable",
    "HalfIntegralMatrix", "L_at_negative", "L_depleted", "LambdaElement", "LambdaFraction", "PadicInt",
    "b_series_bruteforce", "build_table", "classical_coefficient", "dirichlet_Lbar_series", "enumerate_indices",
    "gen_bernoulli", "integral_lambda_coefficient", "kronecker", "lambda_coefficient", "siegel_series_poly",
    "stabilization_polys", "stabilize_via_operator", "stabilized_coefficient", "twist", "u_pn_apply",
]
