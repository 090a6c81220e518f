"""Command line entry point.

    securenc run --scenario secret_bit_error --C 3 --ZI 1 --ZO 1 --q 2^4 --trials 1000

Exit status: 0 on success, 2 for a bad configuration, 3 when results cannot
be written.  SECURENC_OUT_DIR sets the directory used when --out is absent.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .sim import ConfigError, build_config, emit, read_config_file, run, summary_path, write_summary

OUT_DIR_ENV = "SECURENC_OUT_DIR"
EXIT_OK, EXIT_CONFIG, EXIT_IO = 0, 2, 3

# CLI flag -> configuration key
_FLAGS = {"scenario": "scenario", "C": "C", "ZI": "ZI", "ZO": "ZO", "q": "q", "n": "n",
          "trials": "trials", "seed": "seed", "adversary": "adversary", "out": "out",
          "format": "format", "bit": "bit", "mu": "mu", "delta": "delta", "modulus": "modulus"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="securenc", description="Secure network coding experiments.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    r = sub.add_parser("run", help="run one scenario and write its records")
    r.add_argument("--config", type=Path, help="flat key = value file; flags override it")
    r.add_argument("--scenario")
    r.add_argument("--C", type=int)
    r.add_argument("--ZI", type=int)
    r.add_argument("--ZO", type=int)
    r.add_argument("--q", help="field size as 2^m, or 'sqrt' for 2^floor(sqrt(n))")
    r.add_argument("--modulus", help="base field modulus in hex, e.g. 0x11b")
    r.add_argument("--n", type=int, help="packet length (default depends on the scenario)")
    r.add_argument("--trials", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--adversary", help="none, random_jam, cut_attack, mixed or mimic")
    r.add_argument("--bit", type=int, help="fix the transmitted bit (default: scenario choice)")
    r.add_argument("--mu", type=int)
    r.add_argument("--delta", type=int)
    r.add_argument("--out", help="record file (default: $%s/<scenario>.<format>)" % OUT_DIR_ENV)
    r.add_argument("--format", choices=("csv", "jsonl"))
    r.add_argument("--plot", action="store_true", help="also render a PNG figure next to the records")
    r.add_argument("--quiet", action="store_true")
    return parser


def _merged_values(args) -> dict:
    values = dict(read_config_file(args.config)) if args.config else {}
    for flag, key in _FLAGS.items():
        v = getattr(args, flag)
        if v is not None:
            values[key] = v
    return values


def cmd_run(args) -> int:
    default_dir = Path(os.environ.get(OUT_DIR_ENV, "results"))
    try:
        cfg = build_config(_merged_values(args), default_dir)
        result = run(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        # an unreadable --config file
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        out = emit(result.records, result.columns, cfg.output_path, cfg.fmt)
        written = [out, write_summary(result.summary, summary_path(out))]
        if args.plot:
            from .report import render
            written.append(render(result, out.with_suffix(".png")))
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    if not args.quiet:
        s = result.summary
        keys = [k for k in ("empirical", "bound", "bound_label", "attack_success_rate", "net_rate") if k in s]
        print(" ".join(f"{k}={s[k]}" for k in keys), f"pass={s['pass']}")
        for path in written:
            print(f"wrote {path}")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run":
        return cmd_run(args)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
