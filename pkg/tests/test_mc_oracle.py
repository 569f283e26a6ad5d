"""Deterministic sphere quadrature against the analytic divergence path.

These agreements are the primary certification of the closed forms:
they must hold before any bound-audit output is taken seriously.
"""

import math

import numpy as np
import pytest

from vmfkl.divergence import kl_exact, kl_report, mc_kl_estimate
from vmfkl.errors import DomainError
from vmfkl.mc_oracle import quad_kl, quad_normalization
from vmfkl.vmf_core import UnitVector, VmfDistribution


def _dist(d, kappa, cos=None):
    coords = np.zeros(d)
    if cos is None:
        coords[0] = 1.0
    else:
        coords[0] = cos
        coords[1] = math.sqrt(max(0.0, 1.0 - cos * cos))
    return VmfDistribution(UnitVector(coords), kappa)


class TestQuadKl:
    def test_identical_distributions(self):
        q = _dist(3, 4.0)
        res = quad_kl(q, VmfDistribution(q.mu, 4.0))
        assert abs(res.value) <= 1e-12

    def test_d2_vs_exact(self):
        q = _dist(2, 1.0)
        p = _dist(2, 0.0)
        res = quad_kl(q, p)
        assert abs(res.value - kl_exact(q, p)) <= 1e-8
        assert res.abs_error_estimate < 1e-9
        assert res.nodes_used >= 15

    def test_d3_vs_exact(self):
        q = _dist(3, 10.0)
        p = _dist(3, 3.0, cos=0.5)
        res = quad_kl(q, p)
        assert abs(res.value - kl_exact(q, p)) <= 1e-8
        assert res.abs_error_estimate < 1e-9

    @pytest.mark.parametrize("d", [2, 3])
    @pytest.mark.parametrize("kq,kp,cos", [(0.5, 5.0, -1.0), (20.0, 0.5, 0.5), (100.0, 1.0, 0.0)])
    def test_grid_agreement(self, d, kq, kp, cos):
        q = _dist(d, kq)
        p = _dist(d, kp, cos=cos)
        res = quad_kl(q, p)
        assert abs(res.value - kl_exact(q, p)) <= 1e-7

    def test_agrees_with_monte_carlo(self):
        q = _dist(3, 2.0)
        p = _dist(3, 1.0, cos=-0.5)
        res = quad_kl(q, p)
        est, se = mc_kl_estimate(q, p, 100_000, seed=71)
        assert abs(res.value - est) <= 3.0 * se

    def test_unsupported_dimension(self):
        q = _dist(4, 1.0)
        with pytest.raises(DomainError):
            quad_kl(q, VmfDistribution(q.mu, 1.0))

    def test_dimension_mismatch(self):
        with pytest.raises(DomainError):
            quad_kl(_dist(2, 1.0), _dist(3, 1.0))


class TestQuadNormalization:
    def test_d2_uniform(self):
        res = quad_normalization(_dist(2, 0.0))
        assert abs(res.value - 1.0) <= 1e-10

    def test_d5_concentrated(self):
        res = quad_normalization(_dist(5, 25.0))
        assert abs(res.value - 1.0) <= 1e-8

    def test_d3_high_concentration(self):
        res = quad_normalization(_dist(3, 100.0))
        assert abs(res.value - 1.0) <= 1e-8

    @pytest.mark.parametrize("d", range(2, 9))
    @pytest.mark.parametrize("kappa", [0.0, 1.0, 10.0, 100.0])
    def test_full_grid(self, d, kappa):
        res = quad_normalization(_dist(d, kappa))
        assert abs(res.value - 1.0) <= 1e-8
        assert res.abs_error_estimate >= 0.0
        assert res.nodes_used >= 15

    def test_unsupported_dimension(self):
        with pytest.raises(DomainError):
            quad_normalization(_dist(9, 1.0))


def test_certification_precedes_audit_flags():
    # the audit's bound flag is only meaningful once the exact path is
    # certified; exercise both on the same parameters
    q = _dist(3, 5.0)
    p = _dist(3, 1.0, cos=0.0)
    assert abs(quad_kl(q, p).value - kl_exact(q, p)) <= 1e-8
    row = kl_report(3, 5.0, 1.0, 0.0, n_mc=2000, seed=0)
    assert row.bound is not None
