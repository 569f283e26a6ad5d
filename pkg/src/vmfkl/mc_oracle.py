"""Brute-force verification layer: deterministic sphere quadrature.

Integrates the density and the KL integrand directly over the sphere,
with no use of the closed-form moment identities, so the analytic paths
in ``divergence`` can be certified against an independent route before
they are trusted. Low dimensions only; Monte Carlo covers the rest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import adaptive_quad
from .vmf_core import VmfDistribution, stiefel_area

# Azimuthal integrals use a uniform periodic grid; the integrand's
# azimuth dependence is a first-degree trigonometric polynomial, which
# the uniform rule integrates exactly at any m >= 3.
_AZIMUTH_NODES = 64


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    abs_error_estimate: float
    nodes_used: int


def quad_normalization(dist: VmfDistribution) -> QuadratureResult:
    """Integrate exp(log_pdf) over the sphere; the result should be 1.

    Reduces to one dimension through the colatitude against mu: with
    x . mu = cos(theta) the surface measure factors into
    sin(theta)^(d-2) dtheta times the area of the equatorial sphere
    S^(d-2). Supported for d in 2..8.
    """
    d = dist.dim
    if not 2 <= d <= 8:
        raise DomainError(f"quad_normalization supports d in 2..8, got {d}")
    ring = stiefel_area(d - 1, 1) if d > 2 else 2.0

    def f(theta):
        density = np.exp(dist.log_norm + dist.kappa * np.cos(theta))
        return density * np.sin(theta) ** (d - 2)

    value, err, nodes = adaptive_quad(f, 0.0, math.pi, abs_tol=5e-11, rel_tol=1e-12)
    return QuadratureResult(ring * value, ring * err, nodes)


def quad_kl(q: VmfDistribution, p: VmfDistribution) -> QuadratureResult:
    """KL(q || p) by direct quadrature of the integrand q log(q/p).

    d = 2 is a single angular integral. d = 3 is a genuine double
    integral over colatitude and azimuth in the frame with mu_q on the
    first axis and mu_p in the plane of the first two; no moment
    identity is used anywhere. Dimensions above 3 raise.
    """
    if q.dim != p.dim:
        raise DomainError(f"dimension mismatch: q has {q.dim}, p has {p.dim}")
    d = q.dim
    if d not in (2, 3):
        raise DomainError(f"quad_kl supports d in {{2, 3}}, got {d}")
    cos_psi = q.mu.dot(p.mu)
    psi = math.acos(max(-1.0, min(1.0, cos_psi)))
    delta = q.log_norm - p.log_norm
    kq, kp = q.kappa, p.kappa

    if d == 2:

        def f(theta):
            log_ratio = delta + kq * np.cos(theta) - kp * np.cos(theta - psi)
            return np.exp(q.log_norm + kq * np.cos(theta)) * log_ratio

        value, err, nodes = adaptive_quad(f, 0.0, 2.0 * math.pi, abs_tol=5e-10, rel_tol=1e-13)
        return QuadratureResult(value, err, nodes)

    phi = 2.0 * math.pi * np.arange(_AZIMUTH_NODES) / _AZIMUTH_NODES
    cos_phi = np.cos(phi)
    dphi = 2.0 * math.pi / _AZIMUTH_NODES

    def f(theta):
        ct = np.cos(theta)[:, None]
        st = np.sin(theta)[:, None]
        mp_dot_x = math.cos(psi) * ct + math.sin(psi) * st * cos_phi[None, :]
        log_ratio = delta + kq * ct - kp * mp_dot_x
        density = np.exp(q.log_norm + kq * ct)
        return (density * log_ratio).sum(axis=1) * dphi * np.sin(theta)

    value, err, nodes = adaptive_quad(f, 0.0, math.pi, abs_tol=5e-10, rel_tol=1e-13)
    return QuadratureResult(value, err, nodes * _AZIMUTH_NODES)
