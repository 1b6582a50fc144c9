"""Command-line entry point.

Subcommands:
    run      one mission, headless or attached to a control center
    surface  export the (front, right) -> angle control surface as CSV
    batch    repeated loops on one battery charge
    replay   re-simulate a trace and verify it reproduces byte-identically

Exit codes for `run`: 0 LOOP_COMPLETE, 2 ALARM, 3 COLLISION, 4 TIMEOUT,
5 BATTERY_OUT, 1 usage or configuration error.  `replay` exits 0 on an
exact match and 6 on divergence.
"""
from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from .config import (
    ConfigError,
    ScenarioConfig,
    config_from_pairs,
    default_scenario_config,
    load_scenario_config,
)
from .runner import EXIT_CODES, run_and_write, run_batch, run_scenario
from .surface import surface_csv
from .trace import format_tick, read_trace


def _load_config(args) -> ScenarioConfig:
    cfg = (load_scenario_config(args.config) if args.config
           else default_scenario_config())
    updates = {}
    if getattr(args, "map", None):
        updates["map_ref"] = args.map
    if getattr(args, "seed", None) is not None:
        updates["seed"] = args.seed
    if getattr(args, "out", None):
        updates["output_dir"] = Path(args.out)
    if getattr(args, "duration", None):
        updates["duration_limit"] = args.duration
    if getattr(args, "center", None):
        updates["center"] = dataclasses.replace(
            cfg.center, endpoint=args.center,
            linger=bool(getattr(args, "linger", False)))
    elif getattr(args, "linger", False):
        updates["center"] = dataclasses.replace(cfg.center, linger=True)
    return dataclasses.replace(cfg, **updates) if updates else cfg


def cmd_run(args) -> int:
    cfg = _load_config(args)
    if cfg.center.endpoint:
        from .attached import run_attached

        summary = run_attached(cfg, realtime=args.realtime)
    else:
        summary = run_and_write(cfg).summary
    for key, value in summary.pairs():
        print(f"{key}={value}")
    return EXIT_CODES.get(summary.outcome, 1)


def cmd_surface(args) -> int:
    cfg = _load_config(args)
    text = surface_csv(cfg.fuzzy, step=args.step)
    if args.out_file:
        Path(args.out_file).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out_file).write_text(text, encoding="utf-8")
        print(f"wrote {args.out_file}")
    else:
        sys.stdout.write(text)
    return 0


def cmd_batch(args) -> int:
    cfg = _load_config(args)
    report = run_batch(cfg, loops=args.loops)
    for key, value in report.pairs():
        print(f"{key}={value}")
    return 0


def cmd_replay(args) -> int:
    trace = read_trace(Path(args.trace))
    cfg = config_from_pairs(trace.config_pairs)
    result = run_scenario(cfg)
    fresh = [format_tick(r) for r in result.records]
    recorded = [format_tick(r) for r in trace.records]
    if fresh == recorded:
        print(f"replay ok: {len(fresh)} ticks reproduced exactly")
        return 0
    limit = min(len(fresh), len(recorded))
    for i in range(limit):
        if fresh[i] != recorded[i]:
            print(f"divergence at tick {i}:")
            print(f"  recorded: {recorded[i]}")
            print(f"  replayed: {fresh[i]}")
            return 6
    print(f"length mismatch: recorded {len(recorded)} ticks, replayed {len(fresh)}")
    return 6


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="patrolbot",
        description="Patrol-robot simulation suite",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one mission")
    run_p.add_argument("--config", help="scenario INI file")
    run_p.add_argument("--map", help="map name or path (overrides config)")
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--out", help="output directory")
    run_p.add_argument("--duration", type=float, help="sim time limit, s")
    run_p.add_argument("--center", help="host:port of a control center")
    run_p.add_argument("--realtime", type=float, default=0.0, metavar="SPEED",
                       help="pace the sim at SPEED x real time (0 = flat out)")
    run_p.add_argument("--linger", action="store_true",
                       help="stay connected after the mission ends")
    run_p.set_defaults(func=cmd_run)

    surf_p = sub.add_parser("surface", help="export the control surface")
    surf_p.add_argument("--config", help="scenario INI file")
    surf_p.add_argument("--step", type=float, default=1.0, help="grid step, cm")
    surf_p.add_argument("--out-file", help="CSV path (default: stdout)")
    surf_p.set_defaults(func=cmd_surface)

    batch_p = sub.add_parser("batch", help="repeated loops on one charge")
    batch_p.add_argument("--config", help="scenario INI file")
    batch_p.add_argument("--map", help="map name or path")
    batch_p.add_argument("--loops", type=int, default=10)
    batch_p.add_argument("--seed", type=int, default=None)
    batch_p.set_defaults(func=cmd_batch)

    replay_p = sub.add_parser("replay", help="verify a recorded trace")
    replay_p.add_argument("trace", help="trace file to re-simulate")
    replay_p.set_defaults(func=cmd_replay)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
