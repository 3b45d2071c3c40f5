"""Command-line front end.

    abpackets two-packet [--config FILE] [--set key=value ...] [--out DIR]
    abpackets comb | evolve | verify | sweep ...

Exit codes: 0 success, 1 an invariant or check failed, 2 invalid config.
The default output directory comes from ``$ABPACKETS_OUT``.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import (EXPERIMENTS, FAULTS, ConfigError, ExperimentConfig, default_out_dir,
                          read_config, run_comb, run_evolve, run_sweep, run_two_packet,
                          run_verify, write_result)

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="abpackets",
        description="Momentum distributions of wavepacket superpositions under "
                    "Aharonov-Bohm phase programs.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in EXPERIMENTS:
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, help="key=value config file (or a previous sidecar)")
        p.add_argument("--set", dest="overrides", action="append", default=[],
                       metavar="KEY=VALUE", help="override one config key (repeatable)")
        p.add_argument("--out", type=Path, help="output directory (default: $ABPACKETS_OUT)")
        p.add_argument("--grid-dx", type=str, help="grid step")
        p.add_argument("--pmax", type=str, help="half-width of the emitted momentum band")
        if name == "verify":
            p.add_argument("--fault", choices=FAULTS,
                           help="test hook: perturb one packet phase before the suite runs")
        if name == "sweep":
            p.add_argument("--jobs", type=int, default=None, help="worker processes")
    return parser


def _config_from_args(args) -> ExperimentConfig:
    cfg = ExperimentConfig()
    if args.config is not None:
        cfg = read_config(args.config, cfg)
    cfg.experiment = args.command
    for item in args.overrides:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        cfg.set(*item.split("=", 1))
    if args.grid_dx is not None:
        cfg.set("dx", args.grid_dx)
    if args.pmax is not None:
        cfg.set("pmax", args.pmax)
    if getattr(args, "fault", None):
        cfg.fault = args.fault
    if getattr(args, "jobs", None):
        cfg.jobs = args.jobs
    if args.out is not None:
        cfg.out = str(args.out)
    return cfg


def _report(result, out_dir: Path, stream) -> None:
    for name, ok in result.checks.items():
        print(f"{'PASS' if ok else 'FAIL'}  {name}", file=stream)
    for name, value in result.metrics.items():
        print(f"      {name} = {value}", file=stream)
    print(f"results written to {out_dir}", file=stream)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        out_dir = Path(cfg.out) if cfg.out else default_out_dir()
        if args.command == "two-packet":
            result = run_two_packet(cfg)
        elif args.command == "comb":
            result = run_comb(cfg)
        elif args.command == "evolve":
            result = run_evolve(cfg)
        elif args.command == "verify":
            result = run_verify(cfg)
        else:
            result = run_sweep(cfg, out_dir)
    except ConfigError as exc:
        print(f"abpackets: invalid config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        print(f"abpackets: invalid input: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    write_result(result, out_dir)
    _report(result, out_dir, sys.stdout)
    return EXIT_OK if result.passed else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
