"""Trace files: one self-describing key=value record per simulation tick.

The header embeds every config pair that determines the run, so a trace is
replayable on its own.  Floats are written with repr() and therefore
round-trip exactly; two runs of the same scenario produce byte-identical
files.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..pilot import PatrolMode
from ..worldsim import MotionCommand, Pose

TRACE_MAGIC = "patrolbot-trace v1"


@dataclass(frozen=True)
class TickRecord:
    t: float
    pose: Pose
    sonar_left: float
    sonar_front: float
    sonar_right: float
    hms_left: bool
    hms_right: bool
    battery: float
    mode: PatrolMode
    command: MotionCommand
    collision: bool
    odometer: float
    wall_distance: float      # ground-truth shell-to-wall, cm
    wall_interior: bool       # nearest wall point lies inside a segment


def format_tick(rec: TickRecord) -> str:
    parts = [
        f"t={rec.t!r}",
        f"x={rec.pose.x!r}",
        f"y={rec.pose.y!r}",
        f"h={rec.pose.heading!r}",
        f"sl={rec.sonar_left!r}",
        f"sf={rec.sonar_front!r}",
        f"sr={rec.sonar_right!r}",
        f"hl={int(rec.hms_left)}",
        f"hr={int(rec.hms_right)}",
        f"batt={rec.battery!r}",
        f"mode={rec.mode.value}",
        f"cmd={rec.command.kind}",
        f"val={rec.command.value!r}",
        f"col={int(rec.collision)}",
        f"odo={rec.odometer!r}",
        f"wd={rec.wall_distance!r}",
        f"wi={int(rec.wall_interior)}",
    ]
    return "tick " + " ".join(parts)


def parse_kv(body: str) -> dict[str, str]:
    out = {}
    for token in body.split():
        key, _, value = token.partition("=")
        out[key] = value
    return out


def parse_tick(line: str) -> TickRecord:
    kv = parse_kv(line.removeprefix("tick "))
    return TickRecord(
        t=float(kv["t"]),
        pose=Pose(float(kv["x"]), float(kv["y"]), float(kv["h"])),
        sonar_left=float(kv["sl"]),
        sonar_front=float(kv["sf"]),
        sonar_right=float(kv["sr"]),
        hms_left=kv["hl"] == "1",
        hms_right=kv["hr"] == "1",
        battery=float(kv["batt"]),
        mode=PatrolMode(kv["mode"]),
        command=MotionCommand(kv["cmd"], float(kv["val"])),
        collision=kv["col"] == "1",
        odometer=float(kv["odo"]),
        wall_distance=float(kv["wd"]),
        wall_interior=kv["wi"] == "1",
    )


def write_trace(path: Path, config_pairs, records, summary_pairs) -> None:
    lines = [TRACE_MAGIC]
    lines += [f"config {key}={value}" for key, value in config_pairs]
    lines += [format_tick(r) for r in records]
    lines.append("summary " + " ".join(f"{k}={v}" for k, v in summary_pairs))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


@dataclass
class ParsedTrace:
    config_pairs: list[tuple[str, str]]
    records: list[TickRecord]
    summary: dict[str, str]


def read_trace(path: Path) -> ParsedTrace:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or lines[0] != TRACE_MAGIC:
        raise ValueError(f"{path}: not a patrolbot trace")
    pairs: list[tuple[str, str]] = []
    records: list[TickRecord] = []
    summary: dict[str, str] = {}
    for line in lines[1:]:
        if line.startswith("config "):
            key, _, value = line.removeprefix("config ").partition("=")
            pairs.append((key, value))
        elif line.startswith("tick "):
            records.append(parse_tick(line))
        elif line.startswith("summary "):
            summary = parse_kv(line.removeprefix("summary "))
    return ParsedTrace(pairs, records, summary)
