"""Command-line driver.

Subcommands:

- ``sweep <config-file>``: run the sweep described by a key=value config
  file and write the CSV/JSON series file.
- ``preset <name> --out <path>``: run a stored figure preset (fig2a..fig6b).
- ``compare <config-file>``: run the analytic-vs-Monte-Carlo comparison at
  every axis point and write the z-score table.

Exit codes: 0 on success, 2 on configuration errors, 3 on I/O errors.
``--plot`` renders a PNG next to the output file.  The environment
variable WVMETRO_THREADS caps worker parallelism.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from .errors import ConfigError, UnknownPreset, WvmetroError
from .plotting import figure_path_for, render_figure
from .sweep import (
    Mode,
    figure_preset,
    load_config,
    preset_names,
    run_compare,
    run_sweep,
    write_result,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wvmetro",
        description="Weak-measurement metrology sweeps: analytic curves, "
                    "Monte Carlo cross-checks, and figure presets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a sweep from a config file")
    p_sweep.add_argument("config", help="path to the key=value sweep config")
    p_sweep.add_argument("--out", help="override the configured output path")
    p_sweep.add_argument("--plot", action="store_true",
                         help="also render a PNG next to the data file")

    p_preset = sub.add_parser("preset", help="run a stored figure preset")
    p_preset.add_argument("name", help="preset name: " + ", ".join(preset_names()))
    p_preset.add_argument("--out", help="output path (default: <name>.<format>)")
    p_preset.add_argument("--mode", choices=[m.value for m in Mode],
                          help="analytic, montecarlo, or both")
    p_preset.add_argument("--seed", type=int, help="master seed")
    p_preset.add_argument("--trials", type=int, help="Monte Carlo trials per point")
    p_preset.add_argument("--particles", type=int, help="particles per trial")
    p_preset.add_argument("--plot", action="store_true",
                          help="also render a PNG next to the data file")

    p_cmp = sub.add_parser("compare",
                           help="analytic vs Monte Carlo comparison per axis point")
    p_cmp.add_argument("config", help="path to the key=value sweep config")
    p_cmp.add_argument("--out", help="override the configured output path")
    return parser


def _run_sweep_command(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    result = run_sweep(config)
    target = write_result(result, args.out)
    print(f"wrote {target} ({len(result.rows)} rows)")
    if args.plot:
        png = render_figure(result, figure_path_for(target))
        print(f"wrote {png}")
    return EXIT_OK


def _run_preset_command(args: argparse.Namespace) -> int:
    config = figure_preset(args.name)
    updates = {}
    if args.mode:
        updates["mode"] = Mode(args.mode)
    if args.seed is not None:
        updates["seed"] = args.seed
    if args.trials is not None:
        updates["trials"] = args.trials
    if args.particles is not None:
        updates["particles"] = args.particles
    if args.out:
        updates["output"] = args.out
    if updates:
        config = replace(config, **updates)
    result = run_sweep(config)
    target = write_result(result)
    print(f"wrote {target} ({len(result.rows)} rows)")
    if args.plot:
        png = render_figure(result, figure_path_for(target), title=args.name)
        print(f"wrote {png}")
    return EXIT_OK


def _run_compare_command(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    result = run_compare(config)
    target = write_result(result, args.out)
    passed_col = result.columns.index("passed")
    n_pass = sum(1 for row in result.rows if row[passed_col])
    print(f"wrote {target}: {n_pass}/{len(result.rows)} points within "
          f"5 standard errors on every quantity")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "sweep":
            return _run_sweep_command(args)
        if args.command == "preset":
            return _run_preset_command(args)
        return _run_compare_command(args)
    except (ConfigError, UnknownPreset) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except WvmetroError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
