"""Sparse polynomial exact division and divisibility testing.

Randomized quasi-linear exact division of sparse polynomials over finite
fields and the integers, plus polynomial-time divisibility tests for
divisors with large exponent gaps.
"""

from .errors import (
    BudgetExceeded,
    DivisionFailure,
    NonExactIntegerStep,
    NotCoprime,
    NotInvertible,
    ParseError,
    SparseDivError,
    ZeroPolynomial,
)
from .ff import ExtFieldCtx, IntegerRing, PrimeFieldCtx, ZZ, build_ext_field
from .sparse_poly import (
    SparsePoly,
    classic_divrem,
    derivative,
    dilate_reduce,
    evaluate,
    height,
    mul_naive,
    normalize,
    reciprocal,
    strip_x_power,
)
from .cyclic import CyclicPoly, cyclic_inv, cyclic_mul
from .primes import PrimePool, first_n_primes, primes_in_interval, random_probable_prime
from .probe import ProbePair, quotient_probe
from .interp_div import (
    LargeCharParams,
    SmallCharParams,
    crt_lift,
    div_large_char,
    div_small_char,
    dlift,
    exact_division,
    params_large_char,
    params_small_char,
    verify_product,
)
from .zdiv import exact_division_z, height_bound
from .divtest import (
    GapShape,
    SparsityBudget,
    bounded_series_quotient,
    detect_gap_structure,
    divides,
    divides_smallcases,
    divides_structured,
    quotient_sparsity_bound,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CyclicPoly",
    "DivisionFailure",
    "ExtFieldCtx",
    "GapShape",
    "IntegerRing",
    "LargeCharParams",
    "NonExactIntegerStep",
    "NotCoprime",
    "NotInvertible",
    "ParseError",
    "PrimeFieldCtx",
    "PrimePool",
    "ProbePair",
    "SmallCharParams",
    "SparseDivError",
    "SparsePoly",
    "SparsityBudget",
    "ZZ",
    "ZeroPolynomial",
    "bounded_series_quotient",
    "build_ext_field",
    "classic_divrem",
    "crt_lift",
    "cyclic_inv",
    "cyclic_mul",
    "derivative",
    "detect_gap_structure",
    "dilate_reduce",
    "div_large_char",
    "div_small_char",
    "divides",
    "divides_smallcases",
    "divides_structured",
    "dlift",
    "evaluate",
    "exact_division",
    "exact_division_z",
    "first_n_primes",
    "height",
    "height_bound",
    "mul_naive",
    "normalize",
    "params_large_char",
    "params_small_char",
    "primes_in_interval",
    "quotient_probe",
    "quotient_sparsity_bound",
    "random_probable_prime",
    "reciprocal",
    "strip_x_power",
    "verify_product",
]
