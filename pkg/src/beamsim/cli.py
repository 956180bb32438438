"""Command line interface.

    beamsim run <config> [--out FILE] [--workers N]
    beamsim sweep <config> --param NAME --values V1,V2,... [--out FILE] [--workers N]
    beamsim figure <id> [--trials N] [--seed S] [--out DIR] [--workers N]
    beamsim validate [--strict]

BEAMSIM_SEED in the environment overrides the config seed (an explicit
--seed flag still wins).  Exit codes: 0 success, 1 validation failure,
2 config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace

from .configio import parse_config, write_csv
from .errors import ConfigError
from .experiments import (
    DEFAULT_TRIALS,
    FIGURE_IDS,
    SweepAxis,
    expand_sweep,
    figure_preset,
    result_row,
    run_experiment,
)
from .validation import run_validation

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _env_seed() -> int | None:
    raw = os.environ.get("BEAMSIM_SEED")
    if raw is None:
        return None
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"BEAMSIM_SEED must be an integer, got {raw!r}") from exc


def _run_points(configs, workers: int, out_path: str | None) -> None:
    rows = []
    for config in configs:
        print(f"running {config.name} ({config.trials} trials)", file=sys.stderr)
        result = run_experiment(config, workers=workers)
        rows.append(result_row(config, result.summary))
    if out_path is None or out_path == "-":
        write_csv(rows, sys.stdout)
    else:
        write_csv(rows, out_path)


def _cmd_run(args) -> int:
    config = parse_config(args.config)
    seed = _env_seed()
    if seed is not None:
        config = replace(config, master_seed=seed)
    _run_points(expand_sweep(config), args.workers, args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    config = parse_config(args.config)
    seed = _env_seed()
    if seed is not None:
        config = replace(config, master_seed=seed)
    try:
        values = tuple(float(v) for v in args.values.split(",") if v.strip())
    except ValueError as exc:
        raise ConfigError(f"bad --values list {args.values!r}") from exc
    if not values:
        raise ConfigError("--values must list at least one number")
    config = replace(config, sweep=SweepAxis(param=args.param, values=values))
    _run_points(expand_sweep(config), args.workers, args.out)
    return EXIT_OK


def _cmd_figure(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    kwargs = {"trials": args.trials}
    if seed is not None:
        kwargs["master_seed"] = seed
    configs = figure_preset(args.id, **kwargs)
    os.makedirs(args.out, exist_ok=True)
    out_path = os.path.join(args.out, f"{args.id}.csv")
    _run_points(configs, args.workers, out_path)
    print(f"wrote {out_path}", file=sys.stderr)
    return EXIT_OK


def _cmd_validate(args) -> int:
    results = run_validation(strict=args.strict)
    for res in results:
        print(res.line())
    failures = sum(not r.passed for r in results)
    print(f"{len(results) - failures}/{len(results)} checks passed")
    return EXIT_OK if failures == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beamsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment config (sweep section honored)")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="CSV path; '-' or omitted for stdout")
    p_run.add_argument("--workers", type=int, default=1)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter of a config")
    p_sweep.add_argument("config")
    p_sweep.add_argument("--param", required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated numbers")
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_fig = sub.add_parser("figure", help="run a built-in figure preset")
    p_fig.add_argument("id", choices=FIGURE_IDS)
    p_fig.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    p_fig.add_argument("--seed", type=int, default=None)
    p_fig.add_argument("--out", default=".")
    p_fig.add_argument("--workers", type=int, default=1)
    p_fig.set_defaults(func=_cmd_figure)

    p_val = sub.add_parser("validate", help="run the invariant self-check suite")
    p_val.add_argument("--strict", action="store_true", help="include large-array checks")
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
