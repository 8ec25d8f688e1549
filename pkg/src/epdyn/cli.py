"""Command-line entry point.

`epdyn run <config>` executes a scenario config (a YAML file or the name of a
shipped preset) and writes CSVs plus rendered figures; `epdyn compare <a> <b>`
prints population-error statistics between two CSVs on matching time grids.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import scenarios

PRESET_DIR = os.path.join(os.path.dirname(__file__), "presets")


def preset_names() -> list[str]:
    return sorted(f[:-5] for f in os.listdir(PRESET_DIR) if f.endswith(".yaml"))


def resolve_config(name_or_path: str) -> str:
    """A path to an existing file, or the name of a shipped preset."""
    if os.path.exists(name_or_path):
        return name_or_path
    candidate = os.path.join(PRESET_DIR, name_or_path + ".yaml")
    if os.path.exists(candidate):
        return candidate
    raise FileNotFoundError(
        f"no config file {name_or_path!r} and no preset of that name "
        f"(presets: {', '.join(preset_names())})")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="epdyn",
        description="Trotterized circuit simulation of exciton-phonon dynamics")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a scenario config or preset")
    p_run.add_argument("config", help="YAML config path or preset name")
    p_run.add_argument("--out", default=".", help="output directory")
    p_run.add_argument("--seed", type=int, default=0, help="base seed")
    p_run.add_argument("--jobs", type=int, default=1,
                       help="concurrent sweep points")
    p_run.add_argument("--allow-large", action="store_true",
                       help="lift the 26-qubit statevector cap")

    p_cmp = sub.add_parser("compare",
                           help="population error between two CSVs")
    p_cmp.add_argument("a", help="engine CSV")
    p_cmp.add_argument("b", help="reference CSV (superset time grid)")

    args = parser.parse_args(argv)

    if args.command == "run":
        try:
            path = resolve_config(args.config)
            cfg = scenarios.load_config(path)
        except (OSError, ValueError) as exc:
            print(json.dumps({"errors": [str(exc)]}), file=sys.stderr)
            return 2
        errors = scenarios.validate_config(cfg)
        if errors:
            print(json.dumps({"errors": errors}), file=sys.stderr)
            return 2
        written = scenarios.run_scenario(cfg, args.out, seed=args.seed,
                                         jobs=args.jobs,
                                         allow_large=args.allow_large)
        for f in written:
            print(f)
        return 0

    summary = scenarios.compare(args.a, args.b)
    print(json.dumps(summary, indent=2))
    return 0


if __name__ == "__main__":
    sys.exit(main())
