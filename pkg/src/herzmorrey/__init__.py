"""Variable-exponent Lebesgue and Herz-Morrey norms with a verification harness.

Modules:
  exponent  - variable exponents q(.), conjugation, log-Holder constants
  sampling  - truncated-box midpoint grids, dyadic balls and annuli, quadrature
  norms     - modular, Luxemburg, Herz and Herz-Morrey norms
  operators - maximal, fractional maximal, fractional integral, size conditions
  verify    - numerical checks of the norm and operator inequalities
  cli       - command-line front-end (norm / operator / verify)
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .exponent import (
    ExponentFunction,
    LogHolderReport,
    check_log_holder,
    conjugate_exponent,
    make_exponent,
)
from .norms import (
    HerzMorreyParams,
    herz_morrey_norm,
    herz_norm,
    luxemburg_norm,
    modular,
)
from .operators import (
    OperatorHandle,
    estimate_size_constant,
    fractional_integral,
    fractional_maximal,
    get_operator,
    maximal,
    register_operator,
    sobolev_exponent,
)
from .sampling import Grid, SampledFunction, integrate, l1_norm
from .verify import (
    DeltaEstimate,
    InequalityReport,
    decompose_annulus_terms,
    estimate_delta,
    verify_herz_morrey_fractional,
    verify_herz_morrey_sublinear,
)

__all__ = [
    "BACKEND",
    "__version__",
    "ExponentFunction",
    "LogHolderReport",
    "check_log_holder",
    "conjugate_exponent",
    "make_exponent",
    "HerzMorreyParams",
    "herz_morrey_norm",
    "herz_norm",
    "luxemburg_norm",
    "modular",
    "OperatorHandle",
    "estimate_size_constant",
    "fractional_integral",
    "fractional_maximal",
    "get_operator",
    "maximal",
    "register_operator",
    "sobolev_exponent",
    "Grid",
    "SampledFunction",
    "integrate",
    "l1_norm",
    "DeltaEstimate",
    "InequalityReport",
    "decompose_annulus_terms",
    "estimate_delta",
    "verify_herz_morrey_fractional",
    "verify_herz_morrey_sublinear",
]
