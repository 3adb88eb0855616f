"""Command-line interface.

Subcommands: ``nfunc check`` (validate a gauge), ``orlicz`` (sequence norm
of a CSV sample matrix), ``simulate`` (paths with optional truncation and
elongation), ``distance`` (empirical Wasserstein distance to N(0,1)),
``verify`` (distance vs. bound right-hand sides over an n-grid), and
``rates`` (sweep + log-log rate fit + optional SVG plot).

Exit codes: 0 on success, 2 for configuration/domain errors (bad flags,
invalid parameter ranges), 3 for data errors (unreadable or malformed
inputs).
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys

import numpy as np

from .errors import ConfigError, DataError, DomainError
from .harness import (ExperimentConfig, distance_points, fit_rate, plot_rates,
                      ratio_points, run_experiment)
from .mds import MODEL_KINDS, make_model, simulate_path
from .modify import elongate
from .nfunc import check_nfunction, default_check_grid, from_spec
from .orlicz import SampleMatrix, lyapunov, orlicz_norm
from .rng import derive_seed
from .wasserstein import wr_vs_normal, wr_vs_normal_batched


def _fmt(value: float) -> str:
    return "%.17g" % float(value)


def _load_matrix(path: str, min_dim: int = 2) -> np.ndarray:
    try:
        data = np.loadtxt(path, delimiter=",", ndmin=min_dim)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise DataError(f"{path} is not numeric CSV: {exc}") from exc
    if data.size == 0:
        raise DataError(f"{path} holds no values")
    return data


def _cmd_nfunc_check(args) -> int:
    spec = args.kind if args.params is None else f"{args.kind}:{args.params}"
    nf = from_spec(spec)
    report = check_nfunction(nf, default_check_grid(args.grid_points))
    print(report)
    return 0


def _cmd_orlicz(args) -> int:
    nf = from_spec(args.nfunc)
    sample = SampleMatrix.from_values(_load_matrix(args.input))
    norm = orlicz_norm(nf, sample)
    print(f"norm {_fmt(norm)} (R={sample.R}, n={sample.n})")
    if args.sn is not None:
        print(f"L_phi {_fmt(lyapunov(nf, sample, args.sn))}")
    return 0


def _parse_modify(text: str) -> float:
    if not text.startswith("alpha="):
        raise ConfigError("--modify expects alpha=<value>")
    try:
        alpha = float(text[len("alpha="):])
    except ValueError as exc:
        raise ConfigError(f"bad truncation level in {text!r}") from exc
    if not alpha > 0:
        raise ConfigError("truncation level alpha must be positive")
    return alpha


def _cmd_simulate(args) -> int:
    model = make_model(args.model, args.n, variance=args.variance,
                       scale=args.scale)
    alpha = _parse_modify(args.modify) if args.modify else None
    columns = ["rep", "i", "y", "sigma2", "x"]
    if alpha is not None:
        columns += ["z", "sigma2_z", "t_stop", "y_hat", "sigma2_hat"]
    lines = [",".join(columns)]
    for rep in range(args.reps):
        path = simulate_path(model, derive_seed(args.seed, rep, "path"))
        cells = [path.y, path.sigma2, path.x]
        if alpha is None:
            for i in range(model.n):
                lines.append(f"{rep},{i + 1}," +
                             ",".join(_fmt(col[i]) for col in cells))
            continue
        mod = elongate(model, path, alpha, derive_seed(args.seed, rep, "xi"))
        for i in range(model.n):
            lines.append(
                f"{rep},{i + 1}," + ",".join(_fmt(col[i]) for col in cells) +
                f",{_fmt(mod.z[i])},{_fmt(mod.sigma2_z[i])},{mod.t_stop}," +
                f"{_fmt(mod.y_hat[i])},{_fmt(mod.sigma2_hat[i])}")
        lines.append(f"{rep},{model.n + 1},,,,,,{mod.t_stop}," +
                     f"{_fmt(mod.y_hat[model.n])},{_fmt(mod.sigma2_hat[model.n])}")
    text = "\n".join(lines) + "\n"
    if args.out:
        try:
            with open(args.out, "w") as handle:
                handle.write(text)
        except OSError as exc:
            raise DataError(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    return 0


def _cmd_distance(args) -> int:
    data = _load_matrix(args.input, min_dim=1).ravel()
    if args.batches >= 2 and len(data) >= args.batches:
        est = wr_vs_normal_batched(data, args.r, args.batches)
    else:
        est = wr_vs_normal(np.sort(data), args.r)
    print(f"value {_fmt(est.value)} stderr {_fmt(est.stderr)} m {est.m}")
    return 0


def _config_from_args(args) -> ExperimentConfig:
    if args.config:
        config = ExperimentConfig.from_json(args.config)
        overrides = {}
        if args.threads is not None:
            overrides["threads"] = args.threads
        if getattr(args, "out", None):
            overrides["output"] = args.out
        return dataclasses.replace(config, **overrides) if overrides else config
    if getattr(args, "model", None) is None or getattr(args, "n", None) is None:
        raise ConfigError("either --config or both --model and --n are required")
    return ExperimentConfig(
        model=args.model, n_grid=(args.n,), replications=args.reps,
        batches=args.batches, r=args.r, nfunc=args.nfunc,
        bounds=tuple(args.bound or ()), master_seed=args.seed,
        output=args.out, threads=args.threads or 1, q=args.q, p=args.p)


def _cmd_verify(args) -> int:
    rows = run_experiment(_config_from_args(args))
    for row in rows:
        msg = (f"model={row['model']} n={row['n']} r={row['r']} "
               f"w={row['w_value']:.6g} stderr={row['w_stderr']:.3g}")
        if row["bound"] != "none":
            msg += (f" bound={row['bound']} rhs={row['rhs_value']:.6g} "
                    f"ratio={row['ratio']:.4g}")
        print(msg)
    return 0


def _cmd_rates(args) -> int:
    config = ExperimentConfig.from_json(args.config)
    if args.threads is not None:
        config = dataclasses.replace(config, threads=args.threads)
    rows = run_experiment(config)
    fit = fit_rate(distance_points(rows))
    print(f"distance slope {fit.slope:.4f} +- {fit.slope_stderr:.4f} "
          f"(intercept {fit.intercept:.4f})")
    for bound_id in config.bounds:
        pts = [(n, ratio) for n, ratio in ratio_points(rows, bound_id)
               if ratio > 0 and math.isfinite(ratio)]
        if len(pts) >= 3:
            rfit = fit_rate(pts)
            print(f"ratio slope vs {bound_id}: {rfit.slope:.4f} "
                  f"+- {rfit.slope_stderr:.4f}")
    if args.plot:
        plot_rates(rows, args.plot)
        print(f"plot written to {args.plot}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="martclt",
        description="Martingale CLT simulation and Wasserstein-rate checks")
    sub = parser.add_subparsers(dest="command", required=True)

    nfunc = sub.add_parser("nfunc", help="N-function utilities")
    nfunc_sub = nfunc.add_subparsers(dest="nfunc_command", required=True)
    check = nfunc_sub.add_parser("check", help="validate a gauge on a log grid")
    check.add_argument("--kind", required=True,
                       help="power, power_log, exp_poly, exp_power, log_power,"
                            " or tabulated")
    check.add_argument("--params", default=None,
                       help="numeric parameter, or CSV path for tabulated")
    check.add_argument("--grid-points", type=int, default=200)
    check.set_defaults(handler=_cmd_nfunc_check)

    orlicz = sub.add_parser("orlicz", help="sequence Orlicz norm of a CSV matrix")
    orlicz.add_argument("--nfunc", required=True, help="gauge spec, e.g. power:3")
    orlicz.add_argument("--input", required=True, help="CSV, R rows x n columns")
    orlicz.add_argument("--sn", type=float, default=None,
                        help="s_n for the Lyapunov coefficient")
    orlicz.set_defaults(handler=_cmd_orlicz)

    simulate = sub.add_parser("simulate", help="simulate model paths to CSV")
    simulate.add_argument("--model", required=True, choices=MODEL_KINDS)
    simulate.add_argument("--n", type=int, required=True)
    simulate.add_argument("--reps", type=int, default=1)
    simulate.add_argument("--seed", type=int, default=0)
    simulate.add_argument("--out", default=None, help="CSV path (default stdout)")
    simulate.add_argument("--modify", default=None, metavar="alpha=VALUE",
                          help="append truncated/elongated columns")
    simulate.add_argument("--variance", type=float, default=None,
                          help="per-step variance for iid_gaussian")
    simulate.add_argument("--scale", type=float, default=None,
                          help="per-step scale for iid_rademacher")
    simulate.set_defaults(handler=_cmd_simulate)

    distance = sub.add_parser("distance",
                              help="empirical Wasserstein distance to N(0,1)")
    distance.add_argument("--input", required=True, help="CSV of sample values")
    distance.add_argument("--r", type=float, default=1.0)
    distance.add_argument("--batches", type=int, default=20)
    distance.set_defaults(handler=_cmd_distance)

    verify = sub.add_parser("verify",
                            help="measured distance vs bound right-hand sides")
    verify.add_argument("--config", default=None, help="JSON experiment config")
    verify.add_argument("--model", choices=MODEL_KINDS, default=None)
    verify.add_argument("--n", type=int, default=None)
    verify.add_argument("--reps", type=int, default=100_000)
    verify.add_argument("--batches", type=int, default=20)
    verify.add_argument("--r", type=float, default=1.0)
    verify.add_argument("--nfunc", default="power:3")
    verify.add_argument("--bound", action="append", default=None,
                        help="bound id (repeatable)")
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--q", type=float, default=1.0,
                        help="norm order for prior bounds")
    verify.add_argument("--p", type=float, default=None,
                        help="polynomial order override")
    verify.add_argument("--out", default=None, help="CSV report path")
    verify.add_argument("--threads", type=int, default=None)
    verify.set_defaults(handler=_cmd_verify)

    rates = sub.add_parser("rates", help="n-grid sweep with log-log rate fit")
    rates.add_argument("--config", required=True, help="JSON experiment config")
    rates.add_argument("--plot", default=None, help="SVG output path")
    rates.add_argument("--threads", type=int, default=None)
    rates.set_defaults(handler=_cmd_rates)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
