"""Command-line entry point.

Exit codes: 0 success, 1 verification failure, 2 validation error,
3 insufficient sample. Times are unit-free; the bundled defaults read them
as months.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import analysis, config, forecasts, montecarlo, simulation
from .errors import InsufficientSampleError, JumpcastError
from .model_core import classify_critical, derive, near_zero_beta

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_INVALID, EXIT_INSUFFICIENT = 0, 1, 2, 3

# flag -> dotted config key
OVERRIDES = {
    "--model.alpha": "model.alpha",
    "--model.sigma": "model.sigma",
    "--model.lambda": "model.lambda",
    "--model.nu": "model.nu",
    "--model.tau2": "model.tau2",
    "--model.p0": "model.p0",
    "--horizon.t_obs": "horizon.t_obs",
    "--horizon.s_target": "horizon.s_target",
    "--jumps": "jumps",
    "--seed": "seed",
    "--n": "n",
    "--out": "out",
    "--z-threshold": "z_threshold",
}


def _dest(flag: str) -> str:
    return "ov_" + flag.lstrip("-").replace(".", "_").replace("-", "_")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1,
                   help="parallel workers for Monte Carlo (results do not depend on it)")
    for flag in OVERRIDES:
        p.add_argument(flag, dest=_dest(flag), default=None, metavar="X")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="jumpcast",
        description="Forecasts of jump-diffusion returns: closed forms, sweeps and Monte Carlo checks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("derive", parents=[common], help="beta, mu, gamma and the critical relation")

    p = sub.add_parser("simulate", parents=[common], help="write a sample path (and optional pairs) as CSV")
    p.add_argument("--dt", type=float, default=0.01, help="path grid spacing")
    p.add_argument("--pairs", action="store_true", help="also write n terminal pairs")
    p.add_argument("--format", choices=["csv", "svg"], default="csv")

    p = sub.add_parser("forecast", parents=[common], help="all four forecasts for an observed p_T")
    p.add_argument("--p-t", dest="p_t", type=float, required=True, help="observed return p_T")

    p = sub.add_parser("mse", parents=[common], help="closed-form MSE table")
    p.add_argument("--format", choices=["csv", "json"], default="json")

    p = sub.add_parser("verify", parents=[common], help="Monte Carlo check of every closed-form MSE")
    p.add_argument("--format", choices=["csv", "json"], default="json")
    p.add_argument("--corrupt-theory", action="store_true",
                   help="inflate closed forms by 10%% (harness self-test; should fail)")

    p = sub.add_parser("moments", parents=[common], help="Monte Carlo check of first and second moments")
    p.add_argument("--times", type=float, nargs="+", help="time grid (default: T, (T+S)/2, S)")

    p = sub.add_parser("sweep", parents=[common], help="relative performance against relative volatility")
    p.add_argument("--figure", type=int, choices=[1, 2], help="use the preset gamma range of figure 1 or 2")
    p.add_argument("--gamma-min", type=float)
    p.add_argument("--gamma-max", type=float)
    p.add_argument("--step", type=float)
    p.add_argument("--format", choices=["csv", "json", "svg"], action="append",
                   help="output format; repeatable (default: csv and svg)")
    return parser


def _load_config(args) -> config.RunConfig:
    overrides = {key: getattr(args, _dest(flag)) for flag, key in OVERRIDES.items()}
    return config.load(args.config, overrides)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=False)


def _write(path: Path, data) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    if isinstance(data, str):
        data = data.encode()
    path.write_bytes(data)
    return path


def cmd_derive(cfg: config.RunConfig, args) -> int:
    d = derive(cfg.model)
    out = {
        "beta": d.beta,
        "mu": d.mu,
        "gamma": d.gamma,
        "gamma2": d.gamma2,
        "t_obs": cfg.horizon.t_obs,
        "s_target": cfg.horizon.s_target,
        "near_zero_beta": near_zero_beta(d, cfg.horizon),
    }
    if d.gamma is None:
        out["relation"] = None
        out["message"] = "beta = 0: gamma is undefined and all forecasts coincide with p_T"
    else:
        v = classify_critical(cfg.horizon, d)
        out.update(
            relation=v.relation.value,
            critical_time=v.critical_time,
            critical_volatility=v.critical_volatility,
        )
    print(_dump(out))
    return EXIT_OK


def cmd_simulate(cfg: config.RunConfig, args) -> int:
    if not args.dt > 0:
        raise JumpcastError("--dt must be > 0")
    s = cfg.horizon.s_target
    grid = np.unique(np.append(np.arange(0.0, s, args.dt), [cfg.horizon.t_obs, s]))
    path = simulation.simulate_path(cfg.model, cfg.jump_spec, grid, cfg.master_seed)
    written = [_write(cfg.output_dir / f"path_seed{cfg.master_seed}.csv", path.to_csv())]
    if args.format == "svg":
        from .plotting import figure_bytes, path_figure

        written.append(_write(cfg.output_dir / f"path_seed{cfg.master_seed}.svg",
                              figure_bytes(path_figure(path))))
    if args.pairs:
        batch = simulation.batch_pairs(cfg.model, cfg.jump_spec, cfg.horizon, cfg.n,
                                       cfg.master_seed, args.workers)
        written.append(_write(cfg.output_dir / f"pairs_seed{cfg.master_seed}.csv", batch.to_csv()))
    for p in written:
        print(p)
    return EXIT_OK


def cmd_forecast(cfg: config.RunConfig, args) -> int:
    d = derive(cfg.model)
    h = cfg.horizon
    values = {k.value: forecasts.predict(k, args.p_t, h, d) for k in forecasts.ALL_KINDS}
    table = [r.to_dict() for r in forecasts.mse_table(h, d)]
    for row in table:
        row["forecast"] = values[row["kind"]]
    print(_dump({"p_T": args.p_t, "t_obs": h.t_obs, "s_target": h.s_target,
                 "beta_zero": d.beta == 0, "table": table}))
    return EXIT_OK


def cmd_mse(cfg: config.RunConfig, args) -> int:
    rows = forecasts.mse_table(cfg.horizon, derive(cfg.model))
    if args.format == "csv":
        sys.stdout.write(forecasts.breakdowns_to_csv(rows))
    else:
        print(forecasts.breakdowns_to_json(rows))
    return EXIT_OK


def cmd_verify(cfg: config.RunConfig, args) -> int:
    reports = montecarlo.verify_all(
        cfg.model, cfg.jump_spec, cfg.horizon, cfg.n, cfg.master_seed,
        z_threshold=cfg.z_threshold, workers=args.workers,
        theory_bias=0.1 if args.corrupt_theory else 0.0,
    )
    as_json = montecarlo.reports_to_json(reports)
    as_csv = montecarlo.reports_to_csv(reports)
    _write(cfg.output_dir / "verify.json", as_json + "\n")
    _write(cfg.output_dir / "verify.csv", as_csv)
    if args.format == "csv":
        sys.stdout.write(as_csv)
    else:
        print(as_json)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def cmd_moments(cfg: config.RunConfig, args) -> int:
    h = cfg.horizon
    times = args.times or [h.t_obs, 0.5 * (h.t_obs + h.s_target), h.s_target]
    if cfg.n < montecarlo.MIN_SAMPLE:
        raise InsufficientSampleError(f"n = {cfg.n} is below {montecarlo.MIN_SAMPLE}")
    report = montecarlo.moment_check(cfg.model, cfg.jump_spec, times, cfg.n, cfg.master_seed,
                                     cfg.z_threshold, args.workers)
    text = _dump(report.to_dict())
    _write(cfg.output_dir / "moments.json", text + "\n")
    print(text)
    return EXIT_OK if report.passed else EXIT_VERIFY_FAILED


def cmd_sweep(cfg: config.RunConfig, args) -> int:
    gmin, gmax, step = analysis.FIGURE_2_RANGE if args.figure == 2 else analysis.FIGURE_1_RANGE
    gmin = args.gamma_min if args.gamma_min is not None else gmin
    gmax = args.gamma_max if args.gamma_max is not None else gmax
    step = args.step if args.step is not None else step
    h = cfg.horizon
    table = analysis.gamma_sweep(h, gmin, gmax, step)
    written = []
    for fmt in args.format or ["csv", "svg"]:
        if fmt == "json":
            data = _dump({"t_obs": table.t_obs, "s_target": table.s_target,
                          "crossing": analysis.crossing_point(h),
                          "rows": [r._asdict() for r in table.rows]}) + "\n"
        else:
            data = analysis.emit_figure(table, fmt)
        written.append(_write(cfg.output_dir / analysis.sweep_filename(h, fmt), data))
    for p in written:
        print(p)
    return EXIT_OK


COMMANDS = {
    "derive": cmd_derive,
    "simulate": cmd_simulate,
    "forecast": cmd_forecast,
    "mse": cmd_mse,
    "verify": cmd_verify,
    "moments": cmd_moments,
    "sweep": cmd_sweep,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.workers < 1:
            raise JumpcastError("--workers must be >= 1")
        cfg = _load_config(args)
        return COMMANDS[args.command](cfg, args)
    except InsufficientSampleError as exc:
        print(f"insufficient sample: {exc}", file=sys.stderr)
        return EXIT_INSUFFICIENT
    except (JumpcastError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
