"""KL divergence between von Mises-Fisher distributions.

Four routes to the same quantity, kept deliberately separate so they can
audit one another:

* ``kl_exact``          closed form via the log normalizers and the
                        first-moment scale A_d(kappa);
* ``kl_upper_bound``    a closed-form upper-bound expression (odd
                        dimensions; even d is lifted by a null
                        coordinate);
* ``kl_uniform_prior_formula``
                        the simplified closed form for a uniform prior;
* ``mc_kl_estimate``    Monte Carlo mean of the log density ratio.

Whether the upper-bound expression actually dominates the exact value,
and whether the uniform-prior shortcut agrees with the exact uniform
limit, are outputs of ``audit_grid``, not assumptions: violations are
flagged in the report rows, never raised.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .vmf_core import (
    UnitVector,
    VmfDistribution,
    log_pdf,
    mean_resultant_length,
    sample,
    stiefel_area,
)

_MASK64 = 0xFFFFFFFFFFFFFFFF

# A corollary value is flagged as deviating from the exact uniform-prior
# divergence when the gap exceeds this scale-aware tolerance.
_COROLLARY_TOL = 1e-9


@dataclass(frozen=True)
class KlReport:
    """Every view of one divergence: exact, bound, shortcut, Monte Carlo.

    ``bound``, ``corollary``, ``mc`` and ``mc_stderr`` are None when not
    computable for the row (e.g. the bound needs both concentrations
    positive, the corollary applies only to a uniform prior).
    ``padded_dim`` is the lifted dimension when the bound padded an even
    d, else None. ``flags`` lists audit findings for the row.
    """

    q: VmfDistribution
    p: VmfDistribution
    exact: float
    bound: float | None = None
    corollary: float | None = None
    mc: float | None = None
    mc_stderr: float | None = None
    padded_dim: int | None = None
    flags: tuple[str, ...] = ()

    @property
    def cos_theta(self) -> float:
        return self.q.mu.dot(self.p.mu)


def kl_exact(q: VmfDistribution, p: VmfDistribution) -> float:
    """Exact KL(q || p) between two distributions of equal dimension.

    Taking the expectation of the log density ratio under q, with
    E_q[x] = A_d(kappa_q) mu_q, gives

        log c(kq) - log c(kp) + (kq - kp * mu_p.mu_q) * A_d(kq).
    """
    _check_pair(q, p)
    cos = q.mu.dot(p.mu)
    return q.log_norm - p.log_norm + (q.kappa - p.kappa * cos) * mean_resultant_length(
        q.dim, q.kappa
    )


def kl_upper_bound(q: VmfDistribution, p: VmfDistribution) -> tuple[float, int | None]:
    """Closed-form upper-bound expression for KL(q || p).

    Requires both concentrations positive (the expression contains log
    kappa terms). Defined for odd d; an even d is lifted to d + 1 by
    appending a zero coordinate to both means, which leaves mu_p.mu_q
    unchanged, and the lifted dimension is returned for transparency.
    With dd = (d-3)/2 and db = (d-1)/2:

        kq - kp cos + db log(kq) + sum_{m=1}^{dd} kq^m / m!
        - ((d^2 - 2d + 1)/4) log(kp) + dd (dd+1) log(dd) - dd^2 + 1

    using the conventions 0 log 0 = 0 (d = 3) and an empty sum for
    dd < 1. The expression is evaluated verbatim; whether it bounds
    ``kl_exact`` is audited downstream, not assumed here.
    """
    _check_pair(q, p)
    if q.kappa <= 0.0 or p.kappa <= 0.0:
        raise DomainError("kl_upper_bound requires kappa_q > 0 and kappa_p > 0")
    cos = q.mu.dot(p.mu)
    d = q.dim
    padded: int | None = None
    if d % 2 == 0:
        d += 1
        padded = d
    dd = 0.5 * (d - 3.0)
    db = 0.5 * (d - 1.0)
    kq, kp = q.kappa, p.kappa
    series = 0.0
    term = 1.0
    for m in range(1, int(dd) + 1):
        term *= kq / m
        series += term
    dd_log = dd * (dd + 1.0) * math.log(dd) if dd > 0.0 else 0.0
    bound = (
        kq
        - kp * cos
        + db * math.log(kq)
        + series
        - 0.25 * (d * d - 2.0 * d + 1.0) * math.log(kp)
        + dd_log
        - dd * dd
        + 1.0
    )
    return bound, padded


def kl_uniform_prior_formula(q: VmfDistribution) -> float:
    """Simplified closed form for KL(q || uniform): kappa_q - (d/2 - 1) log 2.

    This is the printed shortcut for the uniform-prior special case. It
    generally differs from ``kl_exact_to_uniform``; the audit reports
    the gap rather than deciding which to trust.
    """
    return q.kappa - (0.5 * q.dim - 1.0) * math.log(2.0)


def kl_exact_to_uniform(q: VmfDistribution) -> float:
    """Exact KL(q || uniform) assembled from the normalizer and sphere area.

    Equals kl_exact(q, p) with kappa_p = 0, since the uniform log
    density is -log(area).
    """
    return (
        q.kappa * mean_resultant_length(q.dim, q.kappa)
        + q.log_norm
        + math.log(stiefel_area(q.dim, 1))
    )


def mc_kl_estimate(
    q: VmfDistribution, p: VmfDistribution, n: int, seed: int
) -> tuple[float, float]:
    """Monte Carlo estimate of KL(q || p) with its standard error.

    Draws n points from q and averages the log density ratio; the
    stderr is the sample standard deviation over sqrt(n). Deterministic
    given the seed.
    """
    _check_pair(q, p)
    if n < 2:
        raise DomainError(f"mc_kl_estimate requires n >= 2, got {n}")
    pts = sample(q, n, seed).points
    diffs = log_pdf(q, pts) - log_pdf(p, pts)
    est = float(np.mean(diffs))
    stderr = float(np.std(diffs, ddof=1) / math.sqrt(n))
    return est, stderr


def kl_report(
    dim: int,
    kappa_q: float,
    kappa_p: float,
    cos_theta: float,
    n_mc: int = 0,
    seed: int = 0,
) -> KlReport:
    """Assemble the full KlReport for one parameter combination.

    Mean directions are constructed deterministically in the plane of
    the first two axes: mu_q = e1 and mu_p = cos e1 + sin e2. Fields
    that are not computable for the combination are left as None. The
    ``bound_below_exact`` flag fires when the upper-bound expression
    falls below exact - 3 * mc_stderr (or below exact when no Monte
    Carlo was requested); ``corollary_deviates`` fires when the
    uniform-prior shortcut differs from the exact uniform value by more
    than 1e-9 relative to scale.
    """
    if not -1.0 <= cos_theta <= 1.0:
        raise DomainError(f"cos_theta must lie in [-1, 1], got {cos_theta}")
    mu_q = np.zeros(dim)
    mu_q[0] = 1.0
    mu_p = np.zeros(dim)
    mu_p[0] = cos_theta
    mu_p[1] = math.sqrt(max(0.0, 1.0 - cos_theta * cos_theta))
    q = VmfDistribution(UnitVector(mu_q), kappa_q)
    p = VmfDistribution(UnitVector(mu_p), kappa_p)

    exact = kl_exact(q, p)
    bound = padded = None
    if kappa_q > 0.0 and kappa_p > 0.0:
        bound, padded = kl_upper_bound(q, p)
    corollary = kl_uniform_prior_formula(q) if kappa_p == 0.0 else None
    mc = stderr = None
    if n_mc >= 2:
        mc, stderr = mc_kl_estimate(q, p, n_mc, seed)

    flags = []
    slack = 3.0 * stderr if stderr is not None else 0.0
    if bound is not None and bound < exact - slack:
        flags.append("bound_below_exact")
    if corollary is not None:
        reference = kl_exact_to_uniform(q)
        if abs(corollary - reference) > _COROLLARY_TOL * max(1.0, abs(reference)):
            flags.append("corollary_deviates")
    return KlReport(
        q=q,
        p=p,
        exact=exact,
        bound=bound,
        corollary=corollary,
        mc=mc,
        mc_stderr=stderr,
        padded_dim=padded,
        flags=tuple(flags),
    )


def audit_grid(
    dims,
    kappas_q,
    kappas_p,
    cosines,
    n_mc: int = 0,
    seed: int = 0,
) -> list[KlReport]:
    """Evaluate every combination of the parameter grids into KlReports.

    Rows are generated in itertools.product order over
    (dims, kappas_q, kappas_p, cosines). Each row derives its Monte
    Carlo seed as ``seed XOR row_index`` so rows are independent and
    reproducible regardless of evaluation order. A row that raises is
    captured as a report with NaN exact value and an ``error:`` flag;
    the grid never aborts.
    """
    if not (len(dims) and len(kappas_q) and len(kappas_p) and len(cosines)):
        raise DomainError("audit_grid requires nonempty parameter grids")
    for c in cosines:
        if not -1.0 <= c <= 1.0:
            raise DomainError(f"cosine {c} outside [-1, 1]")
    reports = []
    combos = itertools.product(dims, kappas_q, kappas_p, cosines)
    for index, (d, kq, kp, cos) in enumerate(combos):
        row_seed = (int(seed) ^ index) & _MASK64
        try:
            reports.append(kl_report(d, kq, kp, cos, n_mc=n_mc, seed=row_seed))
        except Exception as exc:  # captured per row by contract
            mu = np.zeros(max(int(d), 2))
            mu[0] = 1.0
            fallback = VmfDistribution(UnitVector(mu), 0.0)
            reports.append(
                KlReport(
                    q=fallback,
                    p=fallback,
                    exact=math.nan,
                    flags=(f"error: {exc}",),
                )
            )
    return reports


def _check_pair(q: VmfDistribution, p: VmfDistribution) -> None:
    if q.dim != p.dim:
        raise DomainError(f"dimension mismatch: q has {q.dim}, p has {p.dim}")


# -- serialization ----------------------------------------------------------

_CSV_HEADER = "d,kappa_q,kappa_p,cos_theta,exact,bound,corollary,mc,mc_stderr,padded_dim,flags"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def reports_to_csv(reports) -> str:
    lines = [_CSV_HEADER]
    for r in reports:
        lines.append(
            ",".join(
                [
                    str(r.q.dim),
                    repr(float(r.q.kappa)),
                    repr(float(r.p.kappa)),
                    repr(r.cos_theta),
                    _cell(r.exact),
                    _cell(r.bound),
                    _cell(r.corollary),
                    _cell(r.mc),
                    _cell(r.mc_stderr),
                    _cell(r.padded_dim),
                    ";".join(r.flags),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def report_to_dict(r: KlReport) -> dict:
    return {
        "d": r.q.dim,
        "kappa_q": r.q.kappa,
        "kappa_p": r.p.kappa,
        "cos_theta": r.cos_theta,
        "exact": r.exact,
        "bound": r.bound,
        "corollary": r.corollary,
        "mc": r.mc,
        "mc_stderr": r.mc_stderr,
        "padded_dim": r.padded_dim,
        "flags": list(r.flags),
    }


def reports_to_json(reports) -> str:
    return json.dumps({"reports": [report_to_dict(r) for r in reports]})
