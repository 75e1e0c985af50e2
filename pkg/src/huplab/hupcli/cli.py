"""hupcli: command-line front end.

Exit codes: 0 completed, 2 inconclusive, 1 error.
"""
from __future__ import annotations

import argparse
import sys

from .commands import COMMANDS, EXIT_ERROR
from .config import ConfigError, load_config, output_dir


def build_parser():
    p = argparse.ArgumentParser(prog="hupcli", description="Heisenberg uniqueness pair laboratory")
    sub = p.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        s = sub.add_parser(name, help=(fn.__doc__ or "").split("\n")[0])
        s.add_argument("--config", metavar="PATH", help="INI experiment config")
        s.add_argument("--out", metavar="DIR", help="output directory (default: $OUTPUT_DIR or ./hup_out)")
        s.add_argument("--seed", type=int, help="override [run] seed")
        s.add_argument("--nodes", type=int, help="override [run] nodes (quadrature nodes per piece)")
        s.add_argument("--jobs", type=int, help="override [run] jobs (worker threads)")
        s.add_argument("--figures", action="store_true", help="also write SVG figures")
    return p


def _summary(report):
    keys = ("command", "family", "verdict", "checks_pass", "rho1", "candidates", "max_abs", "max_jump",
            "count", "file")
    for k in keys:
        if k in report:
            v = report[k]
            if isinstance(v, list):
                v = ",".join(repr(float(x)) for x in v)
            print(f"{k}\t{v}")


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        cfg.override("run", "seed", args.seed)
        cfg.override("run", "nodes", args.nodes)
        cfg.override("run", "jobs", args.jobs)
        cfg.validate()
        out = output_dir(args.out)
        report, code = COMMANDS[args.command](cfg, out)
        if args.figures:
            from .figures import FIGURES
            FIGURES[args.command](report, out)
    except (ConfigError, ValueError, ArithmeticError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _summary(report)
    return code


if __name__ == "__main__":
    sys.exit(main())
