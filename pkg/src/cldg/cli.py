"""Command-line interface: cldg run | converge | project-study | selftest."""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, parse_config
from .runner import run as run_experiment
from .selftest import run_selftest


def _add_config_arg(parser):
    parser.add_argument("config", help="path to a flat key=value config file")
    parser.add_argument("--out", default=None, help="output directory override")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cldg",
        description="Conservative local DG solver for the 1D nonlinear "
        "Schrodinger equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment named in the config")
    _add_config_arg(p_run)
    p_run.add_argument(
        "--paper-scale", action="store_true",
        help="run the accuracy sweep at full scale (tau=1e-5, T=1)",
    )

    p_conv = sub.add_parser("converge", help="accuracy sweep (experiment=converge)")
    _add_config_arg(p_conv)
    p_conv.add_argument("--paper-scale", action="store_true")

    p_proj = sub.add_parser("project-study", help="projection order study")
    _add_config_arg(p_proj)

    sub.add_parser("selftest", help="run the invariant suite; exit 0 iff all pass")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "selftest":
        return run_selftest()

    forced = {"converge": "converge", "project-study": "project_study"}.get(args.command)
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"stage=config error={exc}", file=sys.stderr)
        return 1
    try:
        cfg = parse_config(text, experiment=forced)
    except ConfigError as exc:
        print(f"stage=config error={exc}", file=sys.stderr)
        return 1
    paper_scale = getattr(args, "paper_scale", False)
    return run_experiment(cfg, out_dir=args.out, paper_scale=paper_scale)


if __name__ == "__main__":
    sys.exit(main())
