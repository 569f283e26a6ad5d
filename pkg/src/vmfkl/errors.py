"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument falls outside a function's numerical domain."""


class QuadratureConvergenceError(RuntimeError):
    """Adaptive quadrature failed to reach its tolerance."""


class SamplingError(RuntimeError):
    """Rejection sampling exceeded its per-draw iteration cap."""
