"""dkratio: exact and asymptotic analysis of D_k(n) = d_k(n)/k^omega(n).

The package evaluates the multiplicative ratio D_k of the k-fold divisor
function to its unitary analogue, sums it exactly over ranges,
coprimality classes and arithmetic progressions with a segmented sieve,
decomposes progression sums through Dirichlet characters, and evaluates
the Euler-product densities (A_k, G_k(q), G_k(q)/phi(q)) that govern the
asymptotics.  A verification harness reproduces the published reference
tables and checks the empirical error exponents.
"""

__version__ = "1.0.0"

from .arith import (
    ExactRational,
    Factorization,
    SpfTable,
    euler_phi,
    factorize,
    is_powerful,
    legendre_totient,
    mobius,
    omega,
    powerful_numbers_up_to,
    sieve_spf,
)
from .backend import BACKEND_NAME
from .characters import (
    Character,
    CharacterGroup,
    ap_sum_via_characters,
    char_partial_sum,
    char_value,
    character_group,
    orthogonality_indicator,
    pv_ratio,
    twisted_sum,
)
from .divisors import D_k, DivisorParams, d_k, d_star, g_k, g_k_by_inversion
from .errors import (
    DkratioError,
    DomainError,
    InsufficientDataError,
    NumericalError,
    OverflowRangeError,
    ResourceError,
)
from .euler import (
    EulerProductValue,
    ap_leading_coefficient,
    compute_A_k,
    compute_G_k,
    compute_G_kq1,
    local_factor_A,
)
from .experiments import (
    DEFAULT_X_GRID,
    ErrorCurve,
    ExponentFit,
    error_curve,
    fit_error_exponent,
    growth_check_abs_g,
    powerful_density_check,
    reproduce_A_table,
    reproduce_G_table,
)
from .sieve import (
    DEFAULT_CONFIG,
    EngineConfig,
    SumRequest,
    SumResult,
    bulk_D_k,
    residue_class_sums,
    sum_abs_g_k,
    sum_coprime,
    sum_full,
    sum_g_over_d,
    sum_g_over_d_float,
    sum_progression,
)
from .verify import CriterionResult, run_verification

__all__ = [
    "__version__",
    "BACKEND_NAME",
    # arith
    "ExactRational", "Factorization", "SpfTable", "euler_phi", "factorize",
    "is_powerful", "legendre_totient", "mobius", "omega",
    "powerful_numbers_up_to", "sieve_spf",
    # divisors
    "D_k", "DivisorParams", "d_k", "d_star", "g_k", "g_k_by_inversion",
    # sieve
    "DEFAULT_CONFIG", "EngineConfig", "SumRequest", "SumResult", "bulk_D_k",
    "residue_class_sums", "sum_abs_g_k", "sum_coprime", "sum_full",
    "sum_g_over_d", "sum_g_over_d_float", "sum_progression",
    # characters
    "Character", "CharacterGroup", "ap_sum_via_characters",
    "char_partial_sum", "char_value", "character_group",
    "orthogonality_indicator", "pv_ratio", "twisted_sum",
    # euler
    "EulerProductValue", "ap_leading_coefficient", "compute_A_k",
    "compute_G_k", "compute_G_kq1", "local_factor_A",
    # experiments
    "DEFAULT_X_GRID", "ErrorCurve", "ExponentFit", "error_curve",
    "fit_error_exponent", "growth_check_abs_g", "powerful_density_check",
    "reproduce_A_table", "reproduce_G_table",
    # verify
    "CriterionResult", "run_verification",
    # errors
    "DkratioError", "DomainError", "InsufficientDataError", "NumericalError",
    "OverflowRangeError", "ResourceError",
]
