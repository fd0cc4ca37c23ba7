"""Command-line front end.

    ratelab sweep --config cfg.txt [--out sweep.csv] [--seed N]
                  [--trials N] [--workers N] [--emit-plot plot.gp]
    ratelab calibrate --preset fig3|fig4 [--k-grid a:b:step] [--trials N]
                  [--seed N] [--out residuals.csv]
    ratelab discrepancy --preset fig3|fig4 [--k K] [--rho-grid a:b:step]
                  [--out table.csv]

Exit codes: 0 success, 1 configuration/validation error, 2 runtime or
convergence error.  The environment variable RATELAB_SEED overrides the
config-file seed; an explicit --seed flag beats both.
"""

import argparse
import os
import sys
from dataclasses import replace

from .errors import ConvergenceError, DomainError, InvalidSplit, ParseError, RateLabError, ValidationError
from .sweep import (
    PRESETS,
    calibrate_k,
    discrepancy_report,
    emit_plot_script,
    parse_config,
    render_calibration_csv,
    render_csv,
    render_discrepancy_csv,
    run_sweep,
)
from .channel import NetworkGeometry, make_link

_EXIT_OK = 0
_EXIT_CONFIG = 1
_EXIT_RUNTIME = 2


def _parse_grid(text: str, what: str):
    try:
        if ":" in text:
            start, stop, step = (float(p) for p in text.split(":"))
            if step <= 0:
                raise ValueError("step must be > 0")
            out = []
            v = start
            while v <= stop + 1e-9:
                out.append(round(v, 12))
                v += step
            return out
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ValidationError(f"{what}: expected start:stop:step or a comma list ({exc})") from exc


def _resolve_seed(args, config_seed: int) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("RATELAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(f"RATELAB_SEED must be an integer, got {env!r}") from exc
    return config_seed


def _write(path: str | None, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _cmd_sweep(args) -> int:
    with open(args.config) as fh:
        config = parse_config(fh.read())
    config = replace(config, seed=_resolve_seed(args, config.seed))
    if args.trials is not None:
        if args.trials < 1:
            raise ValidationError("--trials must be >= 1")
        config = replace(config, trials=args.trials)
    if args.workers is not None:
        if args.workers < 1:
            raise ValidationError("--workers must be >= 1")
        config = replace(config, workers=args.workers)
    out_path = args.out or config.output_path
    result = run_sweep(config)
    _write(out_path, render_csv(result))
    if args.emit_plot:
        _write(args.emit_plot, emit_plot_script(result, csv_path=out_path))
    return _EXIT_OK


def _cmd_calibrate(args) -> int:
    seed = args.seed if args.seed is not None else int(os.environ.get("RATELAB_SEED", 42))
    k_grid = _parse_grid(args.k_grid, "--k-grid") if args.k_grid else None
    result = calibrate_k(args.preset, k_grid=k_grid, trials=args.trials, seed=seed,
                         workers=args.workers or 1)
    _write(args.out, render_calibration_csv(result))
    if args.out not in (None, "-"):
        sys.stdout.write(f"best_k = {result.best_k}\n")
    return _EXIT_OK


def _cmd_discrepancy(args) -> int:
    omegas = PRESETS[args.preset]
    geometry = NetworkGeometry(
        sr=make_link(args.k, omegas["omega_sr"]),
        rd=make_link(args.k, omegas["omega_rd"]),
        sd=make_link(args.k, omegas["omega_sd"]),
    )
    grid = _parse_grid(args.rho_grid, "--rho-grid") if args.rho_grid else list(range(0, 31, 5))
    rows = discrepancy_report(geometry, grid)
    _write(args.out, render_discrepancy_csv(rows, geometry))
    return _EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratelab",
        description="Achievable-rate laboratory for cooperative NOMA relaying over Rician fading",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run an SNR sweep from a config document")
    p_sweep.add_argument("--config", required=True, help="path to the config document")
    p_sweep.add_argument("--out", help="output CSV path (default: config output path)")
    p_sweep.add_argument("--seed", type=int, help="override the config seed")
    p_sweep.add_argument("--trials", type=int, help="override the Monte-Carlo trial count")
    p_sweep.add_argument("--workers", type=int, help="Monte-Carlo worker threads (result-invariant)")
    p_sweep.add_argument("--emit-plot", metavar="PATH", help="also write a gnuplot script")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_cal = sub.add_parser("calibrate", help="fit the unreported Rician K to published rates")
    p_cal.add_argument("--preset", required=True, choices=sorted(PRESETS))
    p_cal.add_argument("--k-grid", help="K grid as start:stop:step or comma list (default 0:10:0.5)")
    p_cal.add_argument("--trials", type=int, default=10**6)
    p_cal.add_argument("--seed", type=int)
    p_cal.add_argument("--workers", type=int)
    p_cal.add_argument("--out", help="residual-table CSV path (default: stdout)")
    p_cal.set_defaults(func=_cmd_calibrate)

    p_dis = sub.add_parser(
        "discrepancy", help="literal vs corrected analytic rate table with the oracle"
    )
    p_dis.add_argument("--preset", required=True, choices=sorted(PRESETS))
    p_dis.add_argument("--k", type=float, default=0.0, help="Rician K on all links (default 0)")
    p_dis.add_argument("--rho-grid", help="dB grid as start:stop:step (default 0:30:5)")
    p_dis.add_argument("--out", help="output CSV path (default: stdout)")
    p_dis.set_defaults(func=_cmd_discrepancy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValidationError, DomainError, InvalidSplit, FileNotFoundError) as exc:
        print(f"ratelab: error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except (ConvergenceError, OSError, RateLabError) as exc:
        print(f"ratelab: runtime error: {exc}", file=sys.stderr)
        return _EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())
