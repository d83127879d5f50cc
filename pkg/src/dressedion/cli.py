"""xsim: command-line runner for the preset experiments."""
from __future__ import annotations

import argparse
import sys

from .experiments import ConfigError, apply_override, list_presets, load_config, preset_config, run_experiment
from .propagate import default_workers


def _parser():
    p = argparse.ArgumentParser(prog="xsim", description="Dressed-state trapped-ion gate simulations")
    sub = p.add_subparsers(dest="command", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="base seed for all noise streams")
    common.add_argument("--workers", type=int, help="worker processes (default: $XSIM_WORKERS or 1)")
    common.add_argument("--out", help="output directory")
    common.add_argument("--trajectories", type=int, help="trajectories per noisy point (overrides preset runs)")
    common.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                        help="set a config entry, dotted keys allowed (repeatable)")
    common.add_argument("--timing", action="store_true", help="write wall times into results.csv")
    r = sub.add_parser("run", parents=[common], help="run a YAML/JSON config or a saved manifest")
    r.add_argument("config")
    pr = sub.add_parser("preset", parents=[common], help="run a named preset")
    pr.add_argument("name")
    sub.add_parser("list", help="list presets")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list":
        for name, desc in list_presets():
            print(f"{name:16s} {desc}")
        return 0
    try:
        cfg = load_config(args.config) if args.command == "run" else preset_config(args.name)
        for item in args.override:
            apply_override(cfg, item)
        if args.seed is not None:
            cfg["base_seed"] = args.seed
        if args.out:
            cfg["outputs"] = args.out
        if args.trajectories is not None:
            cfg["trajectories"] = args.trajectories
        if args.timing:
            cfg["timing"] = True
        workers = args.workers if args.workers is not None else default_workers()
        cfg["workers"] = workers
        summary = run_experiment(cfg, workers=workers)
    except (ConfigError, KeyError, ValueError, OSError) as e:
        print(f"xsim: error: {e}", file=sys.stderr)
        return 2
    for w in summary["warnings"]:
        print(f"xsim: warning: {w}", file=sys.stderr)
    print(f"wrote {summary['outputs']}/results.csv, manifest.json, plot.svg")
    return 0


if __name__ == "__main__":
    sys.exit(main())
