"""von Mises-Fisher distributions on the unit hypersphere.

Exact KL divergence, a closed-form upper bound, the uniform-prior
special case, exact sampling, and quadrature / Monte Carlo oracles that
audit all of the analytic paths.
"""

from .divergence import (
    KlReport,
    audit_grid,
    kl_exact,
    kl_exact_to_uniform,
    kl_report,
    kl_uniform_prior_formula,
    kl_upper_bound,
    mc_kl_estimate,
)
from .errors import DomainError, QuadratureConvergenceError, SamplingError
from .mc_oracle import QuadratureResult, quad_kl, quad_normalization
from .special_functions import (
    BesselBranch,
    IdentityAuditResult,
    LogBesselResult,
    audit_integral_identity,
    exp_integral_E,
    log_bessel_i,
    log_gamma,
    upper_incomplete_gamma_int,
)
from .vmf_core import (
    SampleBatch,
    UnitVector,
    VmfDistribution,
    log_norm_const,
    log_pdf,
    mean_resultant_length,
    sample,
    stiefel_area,
)

__version__ = "0.1.0"

__all__ = [
    "BesselBranch",
    "DomainError",
    "IdentityAuditResult",
    "KlReport",
    "LogBesselResult",
    "QuadratureConvergenceError",
    "QuadratureResult",
    "SampleBatch",
    "SamplingError",
    "UnitVector",
    "VmfDistribution",
    "audit_grid",
    "audit_integral_identity",
    "exp_integral_E",
    "kl_exact",
    "kl_exact_to_uniform",
    "kl_report",
    "kl_uniform_prior_formula",
    "kl_upper_bound",
    "log_bessel_i",
    "log_gamma",
    "log_norm_const",
    "log_pdf",
    "mc_kl_estimate",
    "mean_resultant_length",
    "quad_kl",
    "quad_normalization",
    "sample",
    "stiefel_area",
    "upper_incomplete_gamma_int",
    "__version__",
]
