"""Command-line front door.

Subcommands: ``special`` (scalar special functions), ``kl`` (full
divergence report for one parameter set), ``bound`` (the closed-form
upper bound alone), ``sample`` (draw a point batch), ``figure`` (the
three reference point clouds on the 3-sphere), and ``audit`` (divergence
report grid from a JSON spec, optionally preceded by oracle
certification).

Exit codes: 0 on success, 2 on argument errors, 3 on numerical domain
or convergence failures. All output is deterministic given the argv and
seed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import divergence, mc_oracle, special_functions as sf, vmf_core
from .errors import DomainError, QuadratureConvergenceError, SamplingError

# Mean directions for the three reference clouds (kappa 1, 10, 100):
# unit vectors 120 degrees apart in the x-z plane.
FIGURE_KAPPAS = (1.0, 10.0, 100.0)
FIGURE_MUS = (
    (0.0, 0.0, 1.0),
    (math.sqrt(3.0) / 2.0, 0.0, -0.5),
    (-math.sqrt(3.0) / 2.0, 0.0, -0.5),
)
FIGURE_N = 1000

_CERTIFY_KL_TOL = 1e-7
_CERTIFY_NORM_TOL = 1e-8


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report_pretty(r: divergence.KlReport) -> str:
    lines = [
        f"d={r.q.dim} kappa_q={r.q.kappa} kappa_p={r.p.kappa} cos_theta={r.cos_theta}",
        f"exact      = {r.exact!r}",
        f"bound      = {r.bound!r} (padded_dim={r.padded_dim})",
        f"corollary  = {r.corollary!r}",
        f"mc         = {r.mc!r}",
        f"mc_stderr  = {r.mc_stderr!r}",
        f"flags      = {';'.join(r.flags) or '-'}",
    ]
    return "\n".join(lines) + "\n"


def _cmd_special(args) -> int:
    fn = args.fn

    def need(*names):
        missing = [n for n in names if getattr(args, n) is None]
        if missing:
            raise DomainError(f"--fn {fn} requires --" + ", --".join(missing))

    if fn == "log_gamma":
        need("x")
        value = sf.log_gamma(args.x)
        payload = {"fn": fn, "x": args.x, "value": value}
        text = f"log_gamma(x={args.x}) = {value!r}\n"
    elif fn == "upper_incomplete_gamma":
        need("s", "z")
        value = sf.upper_incomplete_gamma_int(int(args.s), args.z)
        payload = {"fn": fn, "s": int(args.s), "z": args.z, "value": value}
        text = f"upper_incomplete_gamma(s={int(args.s)}, z={args.z}) = {value!r}\n"
    elif fn == "log_bessel_i":
        need("alpha", "z")
        res = sf.log_bessel_i(args.alpha, args.z)
        payload = {
            "fn": fn,
            "alpha": args.alpha,
            "z": args.z,
            "value": res.value,
            "branch": res.branch.value,
        }
        text = (
            f"log_bessel_i(alpha={args.alpha}, z={args.z}) = {res.value!r} "
            f"branch={res.branch.value}\n"
        )
    elif fn == "exp_integral_e":
        need("alpha", "z")
        value = sf.exp_integral_E(int(args.alpha), args.z)
        payload = {"fn": fn, "alpha": int(args.alpha), "z": args.z, "value": value}
        text = f"exp_integral_e(alpha={int(args.alpha)}, z={args.z}) = {value!r}\n"
    else:  # identity_audit
        need("d", "kappa")
        res = sf.audit_integral_identity(args.d, args.kappa)
        payload = {
            "fn": fn,
            "d": args.d,
            "kappa": args.kappa,
            "lhs": res.lhs,
            "rhs": res.rhs,
            "abs_diff": res.abs_diff,
            "rel_diff": res.rel_diff,
        }
        text = (
            f"identity_audit(d={args.d}, kappa={args.kappa}): lhs={res.lhs!r} "
            f"rhs={res.rhs!r} abs_diff={res.abs_diff!r} rel_diff={res.rel_diff!r}\n"
        )
    _emit(json.dumps(payload) + "\n" if args.format == "json" else text, args.out)
    return 0


def _cmd_kl(args) -> int:
    report = divergence.kl_report(
        args.d, args.kq, args.kp, args.cos, n_mc=args.mc, seed=args.seed
    )
    if args.format == "json":
        text = json.dumps(divergence.report_to_dict(report)) + "\n"
    elif args.format == "csv":
        text = divergence.reports_to_csv([report])
    else:
        text = _report_pretty(report)
    _emit(text, args.out)
    return 0


def _cmd_bound(args) -> int:
    if not -1.0 <= args.cos <= 1.0:
        raise DomainError(f"cos must lie in [-1, 1], got {args.cos}")
    mu_q = np.zeros(args.d)
    mu_q[0] = 1.0
    mu_p = np.zeros(args.d)
    mu_p[0] = args.cos
    mu_p[1] = math.sqrt(max(0.0, 1.0 - args.cos * args.cos))
    q = vmf_core.VmfDistribution(vmf_core.UnitVector(mu_q), args.kq)
    p = vmf_core.VmfDistribution(vmf_core.UnitVector(mu_p), args.kp)
    bound, padded = divergence.kl_upper_bound(q, p)
    if args.format == "json":
        text = json.dumps({"bound": bound, "padded_dim": padded}) + "\n"
    else:
        text = f"bound = {bound!r} padded_dim={padded}\n"
    _emit(text, args.out)
    return 0


def _parse_mu(spec: str, d: int) -> vmf_core.UnitVector:
    parts = [float(tok) for tok in spec.split(",")]
    if len(parts) != d:
        raise DomainError(f"--mu has {len(parts)} components, expected {d}")
    return vmf_core.UnitVector(parts)


def _cmd_sample(args) -> int:
    if args.mu is not None:
        mu = _parse_mu(args.mu, args.d)
    else:
        coords = np.zeros(args.d)
        coords[0] = 1.0
        mu = vmf_core.UnitVector(coords)
    dist = vmf_core.VmfDistribution(mu, args.kappa)
    batch = vmf_core.sample(dist, args.n, args.seed)
    text = (
        vmf_core.sample_batch_to_json(batch) + "\n"
        if args.format == "json"
        else vmf_core.sample_batch_to_csv(batch)
    )
    _emit(text, args.out)
    if args.out:
        resultant = float(np.linalg.norm(batch.points.mean(axis=0)))
        sys.stdout.write(
            f"n={args.n} d={args.d} kappa={args.kappa!r} seed={args.seed} "
            f"mean_resultant={resultant!r}\n"
        )
    return 0


def _cmd_figure(args) -> int:
    clouds = []
    for index, (kappa, mu) in enumerate(zip(FIGURE_KAPPAS, FIGURE_MUS)):
        dist = vmf_core.VmfDistribution(vmf_core.UnitVector(mu), kappa)
        cloud_seed = args.seed ^ index
        clouds.append((kappa, mu, cloud_seed, vmf_core.sample(dist, FIGURE_N, cloud_seed)))
    if args.format == "json":
        payload = {
            "seed": args.seed,
            "clouds": [
                {
                    "kappa": kappa,
                    "mu": list(mu),
                    "seed": cloud_seed,
                    "points": [list(map(float, row)) for row in batch.points],
                }
                for kappa, mu, cloud_seed, batch in clouds
            ],
        }
        text = json.dumps(payload) + "\n"
    else:
        lines = ["kappa,kind,x1,x2,x3"]
        for kappa, mu, _, batch in clouds:
            lines.append(f"{kappa!r},mu," + ",".join(repr(float(v)) for v in mu))
            for row in batch.points:
                lines.append(f"{kappa!r},point," + ",".join(repr(float(v)) for v in row))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    if args.out:
        for kappa, _, _, batch in clouds:
            resultant = float(np.linalg.norm(batch.points.mean(axis=0)))
            sys.stdout.write(f"kappa={kappa!r} n={FIGURE_N} mean_resultant={resultant!r}\n")
    return 0


def _run_certification() -> list[str]:
    lines = []
    worst_kl = 0.0
    for d in (2, 3):
        for kq in (0.0, 1.0, 10.0):
            for kp in (0.0, 1.0, 10.0):
                for cos in (-1.0, 0.5):
                    report = divergence.kl_report(d, kq, kp, cos)
                    res = mc_oracle.quad_kl(report.q, report.p)
                    worst_kl = max(worst_kl, abs(res.value - report.exact))
    lines.append(f"certify quad_kl: max |quad - exact| = {worst_kl!r}")
    worst_norm = 0.0
    for d in range(2, 9):
        for kappa in (0.0, 1.0, 10.0, 100.0):
            mu = np.zeros(d)
            mu[0] = 1.0
            dist = vmf_core.VmfDistribution(vmf_core.UnitVector(mu), kappa)
            res = mc_oracle.quad_normalization(dist)
            worst_norm = max(worst_norm, abs(res.value - 1.0))
    lines.append(f"certify quad_normalization: max |integral - 1| = {worst_norm!r}")
    if worst_kl > _CERTIFY_KL_TOL or worst_norm > _CERTIFY_NORM_TOL:
        raise QuadratureConvergenceError(
            f"oracle certification failed: kl diff {worst_kl!r}, norm diff {worst_norm!r}"
        )
    return lines


def _cmd_audit(args) -> int:
    try:
        spec = json.loads(Path(args.grid_spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise DomainError(f"cannot read grid spec {args.grid_spec}: {exc}") from exc
    for key in ("dims", "kappas_q", "kappas_p", "cosines"):
        if key not in spec:
            raise DomainError(f"grid spec missing key {key!r}")
    certification = _run_certification() if args.certify else []
    reports = divergence.audit_grid(
        spec["dims"],
        spec["kappas_q"],
        spec["kappas_p"],
        spec["cosines"],
        n_mc=int(spec.get("n_mc", 0)),
        seed=int(spec.get("seed", 0)),
    )
    if args.format == "json":
        payload = json.loads(divergence.reports_to_json(reports))
        if certification:
            payload["certification"] = certification
        text = json.dumps(payload) + "\n"
    else:
        text = divergence.reports_to_csv(reports)
    _emit(text, args.out)
    n_bound = sum(1 for r in reports if "bound_below_exact" in r.flags)
    n_cor = sum(1 for r in reports if "corollary_deviates" in r.flags)
    n_err = sum(1 for r in reports if any(f.startswith("error:") for f in r.flags))
    for line in certification:
        sys.stdout.write(line + "\n")
    sys.stdout.write(
        f"rows={len(reports)} bound_below_exact={n_bound} "
        f"corollary_deviates={n_cor} errors={n_err}\n"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vmfkl",
        description="von Mises-Fisher divergences, bounds, sampling, and audits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("special", help="evaluate a scalar special function")
    p.add_argument(
        "--fn",
        required=True,
        choices=[
            "log_gamma",
            "upper_incomplete_gamma",
            "log_bessel_i",
            "exp_integral_e",
            "identity_audit",
        ],
    )
    p.add_argument("--x", type=float)
    p.add_argument("--s", type=int)
    p.add_argument("--z", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--d", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--format", choices=["pretty", "json"], default="pretty")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_special)

    p = sub.add_parser("kl", help="full divergence report for one parameter set")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--kq", type=float, required=True)
    p.add_argument("--kp", type=float, required=True)
    p.add_argument("--cos", type=float, required=True)
    p.add_argument("--mc", type=int, default=0, help="Monte Carlo sample count (0 = skip)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["pretty", "csv", "json"], default="pretty")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_kl)

    p = sub.add_parser("bound", help="closed-form upper bound for one parameter set")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--kq", type=float, required=True)
    p.add_argument("--kp", type=float, required=True)
    p.add_argument("--cos", type=float, required=True)
    p.add_argument("--format", choices=["pretty", "json"], default="pretty")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("sample", help="draw a batch of points")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mu", help="comma-separated mean direction (default e1)")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("figure", help="emit the three reference clouds (d=3)")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.set_defaults(func=_cmd_figure)

    p = sub.add_parser("audit", help="divergence report grid from a JSON spec")
    p.add_argument("--grid-spec", required=True)
    p.add_argument("--certify", action="store_true", help="run oracle certification first")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_audit)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, QuadratureConvergenceError, SamplingError) as exc:
        print(f"vmfkl: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
