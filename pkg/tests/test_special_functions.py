"""Special-function kernels against frozen oracle values, independent
quadrature (scipy's QUADPACK), high-precision references (mpmath), and
the invariants they must satisfy.

Frozen constants were produced by the oracle stated next to each one,
evaluated at 50 significant digits; the cheap oracles are also re-run
inline so the constants cannot drift silently.
"""

import math

import mpmath as mp
import numpy as np
import pytest
import scipy.integrate as si
from hypothesis import given, settings
from hypothesis import strategies as st

from vmfkl.errors import DomainError
from vmfkl.special_functions import (
    BesselBranch,
    _log_bessel_quadrature,
    audit_integral_identity,
    exp_integral_E,
    log_bessel_i,
    log_gamma,
    upper_incomplete_gamma_int,
)
from vmfkl._kernels import _log_bessel_asymptotic_py, _log_bessel_series_py

mp.mp.dps = 50

# oracle: 50-digit quadrature of t^(x-1) e^(-t) over (0, inf) at x = 0.5
LOG_GAMMA_HALF = 0.5723649429247001
# oracle: 50-digit quadrature of t^2 e^(-t) over (2, inf)
GAMMA_3_2 = 1.3533528323661269
# oracle: half-integer closed form sqrt(2/(pi z)) sinh z at z = 1,
# cross-checked against the 200-term power series at 50 digits
LOG_I_HALF_1 = -0.0643519910735318
# oracle: 61-term power series at 50 digits, argument z = 2, order 1
LOG_I_1_2 = 0.46413447354615974
# oracle: 50-digit quadrature of e^(-t) t over (1, inf)
E_MINUS1_1 = 0.7357588823428846
# oracle: 50-digit quadrature of e^(-t/2) t^2 over (1, inf)
E_MINUS2_HALF = 15.769797152528469


class TestLogGamma:
    def test_at_one(self):
        assert log_gamma(1.0) == 0.0

    def test_at_five_is_log_24(self):
        assert math.isclose(log_gamma(5.0), math.log(24.0), rel_tol=1e-14)

    def test_at_half_frozen_oracle(self):
        assert math.isclose(log_gamma(0.5), LOG_GAMMA_HALF, rel_tol=1e-12)
        # re-run the quadrature oracle at double precision
        ref, _ = si.quad(lambda t: t**-0.5 * math.exp(-t), 0.0, np.inf, epsabs=1e-13)
        assert math.isclose(log_gamma(0.5), math.log(ref), rel_tol=1e-10)

    @pytest.mark.parametrize("n", range(1, 20))
    def test_integer_factorial(self, n):
        assert math.isclose(log_gamma(n), math.log(math.factorial(n - 1)), rel_tol=1e-12) or (
            n <= 2 and abs(log_gamma(n)) < 1e-14
        )

    @pytest.mark.parametrize("x", [0.0, -1.0, -0.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestUpperIncompleteGamma:
    def test_s1_collapses(self):
        assert math.isclose(upper_incomplete_gamma_int(1, 3.0), math.exp(-3.0), rel_tol=1e-14)

    @pytest.mark.parametrize("s", range(1, 9))
    def test_at_zero_is_factorial(self, s):
        assert math.isclose(
            upper_incomplete_gamma_int(s, 0.0), math.factorial(s - 1), rel_tol=1e-14
        )

    def test_3_2_frozen_oracle(self):
        got = upper_incomplete_gamma_int(3, 2.0)
        assert math.isclose(got, GAMMA_3_2, rel_tol=1e-12)
        ref, _ = si.quad(lambda t: t**2 * math.exp(-t), 2.0, np.inf, epsabs=1e-14)
        assert math.isclose(got, ref, rel_tol=1e-12)
        assert math.isclose(got, 10.0 * math.exp(-2.0), rel_tol=1e-13)

    @pytest.mark.parametrize("s,z", [(12, 40.0), (8, 100.0), (15, 3.0)])
    def test_matches_quadrature(self, s, z):
        # epsabs=0 forces QUADPACK into pure relative mode; the deep-tail
        # cases have values around 1e-30 where any absolute floor lies
        ref, _ = si.quad(lambda t: t ** (s - 1) * math.exp(-t), z, np.inf,
                         epsabs=0.0, epsrel=1e-13)
        assert math.isclose(upper_incomplete_gamma_int(s, z), ref, rel_tol=1e-10)

    @given(
        s=st.integers(min_value=1, max_value=30),
        u=st.floats(min_value=0.5, max_value=3.0),
        dz=st.floats(min_value=0.5, max_value=10.0),
    )
    @settings(max_examples=80, deadline=None)
    def test_decreasing_and_bounded(self, s, u, dz):
        # strict decrease is only observable in doubles where the density
        # carries mass, i.e. z on the scale of s; far below that the
        # decrement sits beneath one ulp of Gamma(s)
        z1 = s * u
        g1 = upper_incomplete_gamma_int(s, z1)
        g2 = upper_incomplete_gamma_int(s, z1 + dz)
        assert g2 < g1
        assert g1 <= math.factorial(s - 1) * (1.0 + 1e-14)
        assert upper_incomplete_gamma_int(s, 0.1) <= upper_incomplete_gamma_int(s, 0.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            upper_incomplete_gamma_int(0, 1.0)
        with pytest.raises(DomainError):
            upper_incomplete_gamma_int(3, -0.1)


class TestLogBesselI:
    def test_half_order_frozen(self):
        res = log_bessel_i(0.5, 1.0)
        assert res.branch is BesselBranch.SERIES
        assert abs(res.value - LOG_I_HALF_1) < 1e-12

    def test_zero_argument(self):
        res = log_bessel_i(0.0, 0.0)
        assert res.value == 0.0
        assert res.branch is BesselBranch.SERIES

    def test_zero_argument_positive_order_sentinel(self):
        res = log_bessel_i(2.5, 0.0)
        assert res.value == -math.inf
        assert res.branch is BesselBranch.SERIES

    def test_order_one_frozen_series(self):
        assert abs(log_bessel_i(1.0, 2.0).value - LOG_I_1_2) < 1e-12

    def test_branch_selection(self):
        assert log_bessel_i(1.0, 3.0).branch is BesselBranch.SERIES
        assert log_bessel_i(1.0, 50.0).branch is BesselBranch.QUADRATURE
        assert log_bessel_i(1.0, 600.0).branch is BesselBranch.ASYMPTOTIC

    def test_asymptotic_stall_falls_back_to_quadrature(self):
        # order too large for the 1/z expansion at this argument: the
        # public function must detect the stall and switch branch
        res = log_bessel_i(100.0, 4001.0)
        assert res.branch is BesselBranch.QUADRATURE
        assert abs(res.value - float(mp.log(mp.besseli(100, 4001)))) < 1e-9

    @pytest.mark.parametrize(
        "alpha,z",
        [(0.0, 0.5), (0.0, 20.0), (0.2, 100.0), (3.7, 8.0), (14.5, 550.0), (2.0, 700.0)],
    )
    def test_against_mpmath(self, alpha, z):
        ref = float(mp.log(mp.besseli(alpha, z)))
        assert abs(log_bessel_i(alpha, z).value - ref) < 1e-10 * max(1.0, abs(ref))

    def test_series_quadrature_overlap_band(self):
        # both branches are valid on z in [8, 20] for alpha <= 6, where
        # log I stays above ~0.8 so the relative measure is well posed
        rng = np.random.default_rng(2718)
        worst = 0.0
        for _ in range(50):
            alpha = rng.uniform(0.0, 6.0)
            z = rng.uniform(8.0, 20.0)
            s, _ = _log_bessel_series_py(alpha, z)
            q = _log_bessel_quadrature(alpha, z)
            worst = max(worst, abs(s - q) / abs(q))
        assert worst <= 1e-9

    def test_quadrature_asymptotic_overlap_band(self):
        rng = np.random.default_rng(3141)
        worst = 0.0
        for _ in range(50):
            alpha = rng.uniform(0.0, 10.0)
            z = rng.uniform(520.0, 700.0)
            a, converged, _ = _log_bessel_asymptotic_py(alpha, z)
            assert converged
            q = _log_bessel_quadrature(alpha, z)
            worst = max(worst, abs(a - q) / abs(q))
        assert worst <= 1e-8

    def test_recurrence(self):
        # I_(a-1)(z) - I_(a+1)(z) = (2a/z) I_a(z), after exponentiating
        rng = np.random.default_rng(577)
        for _ in range(40):
            alpha = rng.uniform(1.0, 10.0)
            z = rng.uniform(0.1, 50.0)
            lo = math.exp(log_bessel_i(alpha - 1.0, z).value)
            hi = math.exp(log_bessel_i(alpha + 1.0, z).value)
            mid = math.exp(log_bessel_i(alpha, z).value)
            assert math.isclose(lo - hi, (2.0 * alpha / z) * mid, rel_tol=1e-8)

    @given(
        alpha=st.floats(min_value=0.0, max_value=20.0),
        z=st.floats(min_value=1e-3, max_value=900.0),
        dz=st.floats(min_value=1e-3, max_value=100.0),
    )
    @settings(max_examples=100, deadline=None)
    def test_strictly_increasing_in_z(self, alpha, z, dz):
        assert log_bessel_i(alpha, z + dz).value > log_bessel_i(alpha, z).value

    def test_domain(self):
        with pytest.raises(DomainError):
            log_bessel_i(-0.1, 1.0)
        with pytest.raises(DomainError):
            log_bessel_i(1.0, -1.0)


class TestExpIntegral:
    def test_order_zero(self):
        assert math.isclose(exp_integral_E(0, 2.0), math.exp(-2.0) / 2.0, rel_tol=1e-13)

    def test_minus_one_frozen(self):
        got = exp_integral_E(-1, 1.0)
        assert math.isclose(got, E_MINUS1_1, rel_tol=1e-12)
        assert math.isclose(got, 2.0 * math.exp(-1.0), rel_tol=1e-13)

    def test_minus_two_frozen(self):
        got = exp_integral_E(-2, 0.5)
        assert math.isclose(got, E_MINUS2_HALF, rel_tol=1e-12)
        ref, _ = si.quad(lambda t: math.exp(-0.5 * t) * t**2, 1.0, np.inf, epsabs=1e-13)
        assert math.isclose(got, ref, rel_tol=1e-10)

    @pytest.mark.parametrize("alpha", [0, -1, -3, -6])
    @pytest.mark.parametrize("z", [0.5, 2.0, 7.5, 20.0])
    def test_matches_quadrature(self, alpha, z):
        ref, _ = si.quad(
            lambda t: math.exp(-z * t) * t ** (-alpha), 1.0, np.inf, epsabs=1e-16
        )
        assert math.isclose(exp_integral_E(alpha, z), ref, rel_tol=1e-9)

    def test_order_one_quadrature_fallback(self):
        import scipy.special as sp

        assert math.isclose(exp_integral_E(1, 3.0), float(sp.exp1(3.0)), rel_tol=1e-10)

    def test_unsupported_orders(self):
        with pytest.raises(DomainError):
            exp_integral_E(2, 1.0)
        with pytest.raises(DomainError):
            exp_integral_E(0, 0.0)
        with pytest.raises(DomainError):
            exp_integral_E(0, -1.0)


class TestIdentityAudit:
    def test_frozen_values_d1_k1(self):
        res = audit_integral_identity(1.0, 1.0)
        assert math.isclose(res.lhs, math.e - 3.0 / math.e, rel_tol=1e-11)
        assert math.isclose(res.rhs, -0.2759095808785817, rel_tol=1e-11)
        assert res.abs_diff == abs(res.lhs - res.rhs)

    @pytest.mark.parametrize("d,kappa", [(2.0, 0.5), (1.0, 10.0), (0.5, 1.0)])
    def test_reports_both_sides(self, d, kappa):
        res = audit_integral_identity(d, kappa)
        ref, _ = si.quad(lambda t: (1.0 - t) ** d * math.exp(kappa * t), -1.0, 1.0,
                         epsabs=1e-13)
        assert math.isclose(res.lhs, ref, rel_tol=1e-9)
        assert math.isfinite(res.rhs)
        # the printed right side has the opposite sign of the integral
        assert res.lhs > 0.0 > res.rhs

    def test_domain(self):
        with pytest.raises(DomainError):
            audit_integral_identity(0.0, 1.0)
        with pytest.raises(DomainError):
            audit_integral_identity(1.0, 0.0)


class TestInequalityLemmas:
    def test_factorial_bounds(self):
        # n log(n/e) + 1 <= log n! <= (n+1) log((n+1)/e) + 1 on 1..60
        for n in range(1, 61):
            log_fact = math.lgamma(n + 1.0)
            lower = n * (math.log(n) - 1.0) + 1.0
            upper = (n + 1.0) * (math.log(n + 1.0) - 1.0) + 1.0
            assert lower <= log_fact <= upper

    def test_log_bounds(self):
        # n >= log(1+n) >= n/(1+n) for n > -1
        rng = np.random.default_rng(8128)
        samples = rng.uniform(-0.999, 60.0, size=200)
        for n in samples:
            log_term = math.log1p(n)
            assert n >= log_term
            assert log_term >= n / (1.0 + n)
