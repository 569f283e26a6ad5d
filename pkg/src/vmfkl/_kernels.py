"""Hot numeric kernels.

Each kernel is written as a plain scalar-loop function and compiled with
numba when available. Set the environment variable ``VMFKL_NO_NUMBA=1`` to
force the interpreted numpy path (the public name then points at the plain
function). The ``*_py`` references always hold the uncompiled versions so
the two paths can be compared directly, e.g. by ``benchmarks/bench_kernels.py``.

Kernels consume scalar draws from a ``numpy.random.Generator``; the compiled
and interpreted paths advance the generator identically and return
bit-identical results.
"""

import math
import os

import numpy as np

_NO_NUMBA_FLAG = os.environ.get("VMFKL_NO_NUMBA", "").strip().lower()
NUMBA_ENABLED = _NO_NUMBA_FLAG in ("", "0", "false")

if NUMBA_ENABLED:
    try:
        from numba import njit
    except ImportError:
        NUMBA_ENABLED = False


def _sample_cosines_py(rng, n, dim, kappa, cap):
    """Draw n cosines against the mean direction by rejection.

    Target density on [-1, 1] is proportional to
    (1 - w^2)^((dim-3)/2) * exp(kappa * w). Proposal is the symmetric
    Beta((dim-1)/2, (dim-1)/2) mapped through the standard envelope
    transform, which keeps the acceptance rate bounded away from zero
    for every dim >= 2 and kappa >= 0 (kappa = 0 degenerates to always
    accepting, giving the uniform-sphere cosine law).

    Returns (w, status); status 1 means some draw exceeded ``cap``
    rejections and the caller must raise.
    """
    dm1 = dim - 1.0
    a = 0.5 * dm1
    b = dm1 / (math.sqrt(4.0 * kappa * kappa + dm1 * dm1) + 2.0 * kappa)
    x0 = (1.0 - b) / (1.0 + b)
    c = kappa * x0 + dm1 * math.log1p(-x0 * x0)
    d0 = a - 1.0 / 3.0
    c0 = 1.0 / math.sqrt(9.0 * d0)
    out = np.empty(n)
    status = 0
    for i in range(n):
        iters = 0
        while True:
            iters += 1
            if iters > cap:
                status = 1
                out[i] = np.nan
                break
            # z ~ Beta(a, a); closed forms for dim 2 and 3, two
            # Marsaglia-Tsang Gamma(a) draws otherwise (a >= 1.5 there).
            if dim == 2:
                s = math.sin(0.5 * math.pi * rng.random())
                z = s * s
            elif dim == 3:
                z = rng.random()
            else:
                g0 = 0.0
                g1 = 0.0
                for k in range(2):
                    while True:
                        xn = rng.standard_normal()
                        v = 1.0 + c0 * xn
                        if v <= 0.0:
                            continue
                        v = v * v * v
                        u = rng.random()
                        x2 = xn * xn
                        if u < 1.0 - 0.0331 * x2 * x2:
                            break
                        if math.log(u) < 0.5 * x2 + d0 * (1.0 - v + math.log(v)):
                            break
                    if k == 0:
                        g0 = d0 * v
                    else:
                        g1 = d0 * v
                z = g0 / (g0 + g1)
            w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z)
            u = rng.random()
            if kappa * w + dm1 * math.log(1.0 - x0 * w) - c >= math.log(u):
                out[i] = w
                break
        if status == 1:
            break
    return out, status


def _log_bessel_series_py(alpha, z):
    """Power series for log I_alpha(z), term-by-term in the log domain.

    Terms are accumulated through a streaming log-sum-exp with Kahan
    compensation on the mantissa sum. Stops once a term drops 40 nats
    below the running sum (capped at 500 terms, enough for z up to ~750).

    Returns (log_value, terms_used).
    """
    lhalf = math.log(0.5 * z)
    run_max = alpha * lhalf - math.lgamma(alpha + 1.0)
    s = 1.0
    comp = 0.0
    log_sum = run_max
    m = 1
    while m <= 500:
        t = (2.0 * m + alpha) * lhalf - math.lgamma(m + 1.0) - math.lgamma(m + alpha + 1.0)
        if t > run_max:
            scale = math.exp(run_max - t)
            s = s * scale + 1.0
            comp *= scale
            run_max = t
        else:
            y = math.exp(t - run_max) - comp
            tt = s + y
            comp = (tt - s) - y
            s = tt
        log_sum = run_max + math.log(s)
        if t < log_sum - 40.0:
            break
        m += 1
    return log_sum, m


def _log_bessel_asymptotic_py(alpha, z):
    """Large-argument expansion of log I_alpha(z).

    log I = z - 0.5*log(2 pi z) + log(S) with S the alternating
    correction series in 1/z. The series is truncated at its smallest
    term; converged is 0 if the terms started growing before reaching
    1e-15 relative, in which case the caller should fall back to
    quadrature.

    Returns (log_value, converged, terms_used).
    """
    mu = 4.0 * alpha * alpha
    s = 1.0
    term = 1.0
    prev = 1.0
    converged = 0
    k = 1
    while k <= 40:
        term *= -(mu - (2.0 * k - 1.0) ** 2) / (8.0 * k * z)
        if abs(term) >= prev:
            # terms stopped shrinking: expansion invalid at this (alpha, z)
            break
        s += term
        prev = abs(term)
        if abs(term) < 1e-15 * abs(s):
            converged = 1
            break
        k += 1
    if s <= 0.0:
        return math.nan, 0, k
    return z - 0.5 * math.log(2.0 * math.pi * z) + math.log(s), converged, k


if NUMBA_ENABLED:
    _sample_cosines = njit(cache=True)(_sample_cosines_py)
    _log_bessel_series = njit(cache=True)(_log_bessel_series_py)
    _log_bessel_asymptotic = njit(cache=True)(_log_bessel_asymptotic_py)
else:
    _sample_cosines = _sample_cosines_py
    _log_bessel_series = _log_bessel_series_py
    _log_bessel_asymptotic = _log_bessel_asymptotic_py
