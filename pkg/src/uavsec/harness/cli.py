"""Command-line front end: run sweeps, summarize results, emit presets.

Exit codes: 0 success, 2 configuration or schema error, 3 when every trial
in a run came back infeasible.
"""

import argparse
import os
import sys

from ..exceptions import ConfigError, SchemaError
from . import runner
from .config import dump_config, load_config, preset_configs


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="uavsec",
        description="Seeded Monte-Carlo sweeps of the secrecy-rate solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a sweep configuration")
    run_p.add_argument("config", help="YAML sweep configuration")
    run_p.add_argument("--out", default="results.csv", help="results CSV path")
    run_p.add_argument("--trials", type=int, default=None, help="override trial count")
    run_p.add_argument("--seed", type=int, default=None, help="override base seed")
    run_p.add_argument("--threads", type=int, default=1, help="parallel trial workers")

    sum_p = sub.add_parser("summarize", help="aggregate a results CSV")
    sum_p.add_argument("results", help="results CSV produced by 'run'")
    sum_p.add_argument("--out", default="summary.csv", help="summary CSV path")

    pre_p = sub.add_parser("presets", help="write the three standard sweep presets")
    pre_p.add_argument("--out", default="presets", help="directory for preset YAML files")
    return parser


def cmd_run(args):
    spec = load_config(args.config)
    spec = spec.with_overrides(trials=args.trials, base_seed=args.seed)
    rows = runner.run_sweep(spec, args.out, threads=max(1, args.threads))
    infeasible = sum(1 for r in rows if r.status == "Infeasible")
    print(f"wrote {len(rows)} rows to {args.out} ({infeasible} infeasible)")
    if rows and infeasible == len(rows):
        return 3
    return 0


def cmd_summarize(args):
    summary = runner.summarize(args.results, args.out)
    print(f"wrote {len(summary)} summary rows to {args.out}")
    return 0


def cmd_presets(args):
    os.makedirs(args.out, exist_ok=True)
    for name, config in preset_configs().items():
        path = os.path.join(args.out, f"{name}.yaml")
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(dump_config(config))
        print(path)
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "summarize":
            return cmd_summarize(args)
        if args.command == "presets":
            return cmd_presets(args)
    except (ConfigError, SchemaError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
