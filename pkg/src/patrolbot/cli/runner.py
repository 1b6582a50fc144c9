"""Headless scenario runner: wires world, pilot, and fuzzy engine together
and produces a trace plus a run summary."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from ..fuzzy import FuzzyEngine
from ..pilot import PatrolMode, PatrolState, patrol_tick
from ..worldsim import (
    STOP,
    RobotState,
    WorldMap,
    point_segment_nearest,
    sense,
    step,
)
from .config import ScenarioConfig, describe_config
from .trace import TickRecord, write_trace

LOOP_COMPLETE = "LOOP_COMPLETE"
ALARM = "ALARM"
COLLISION = "COLLISION"
TIMEOUT = "TIMEOUT"
BATTERY_OUT = "BATTERY_OUT"

#: Ticks only count toward wall regulation once the robot has settled in.
REGULATION_WARMUP_CM = 200.0

EXIT_CODES = {
    LOOP_COMPLETE: 0,
    ALARM: 2,
    COLLISION: 3,
    TIMEOUT: 4,
    BATTERY_OUT: 5,
}


@dataclass(frozen=True)
class RunSummary:
    outcome: str
    sim_duration: float
    distance: float
    min_wall_distance: float
    mean_abs_wall_error: float
    wall_band_fraction: float  # share of regulated ticks within +/-8 cm
    tick_count: int
    collision_count: int
    loops_completed: int
    alarm_cause: str = ""
    telemetry_drops: int = 0

    def pairs(self) -> list[tuple[str, str]]:
        return [
            ("outcome", self.outcome),
            ("sim_duration", repr(self.sim_duration)),
            ("distance", repr(self.distance)),
            ("min_wall_distance", repr(self.min_wall_distance)),
            ("mean_abs_wall_error", repr(self.mean_abs_wall_error)),
            ("wall_band_fraction", repr(self.wall_band_fraction)),
            ("tick_count", str(self.tick_count)),
            ("collision_count", str(self.collision_count)),
            ("loops_completed", str(self.loops_completed)),
            ("alarm_cause", self.alarm_cause or "-"),
            ("telemetry_drops", str(self.telemetry_drops)),
        ]


@dataclass
class RunResult:
    summary: RunSummary
    records: list[TickRecord]
    final_state: RobotState
    final_pilot: PatrolState
    events: list = field(default_factory=list)


def wall_clearance(world: WorldMap, point, body_radius: float) -> tuple[float, bool]:
    """Ground-truth shell-to-wall distance and whether the nearest wall
    point is a segment interior (i.e. the robot is beside a straight run,
    not rounding a corner)."""
    best = math.inf
    interior = False
    for w in world.walls:
        d, s = point_segment_nearest(point, w.p1, w.p2)
        if d < best:
            best = d
            interior = 1e-9 < s < 1.0 - 1e-9
    return best - body_radius, interior


def run_scenario(
    config: ScenarioConfig,
    world: WorldMap | None = None,
    state: RobotState | None = None,
    pilot: PatrolState | None = None,
    start_time: float = 0.0,
    on_tick=None,
) -> RunResult:
    """Run one mission to a terminal outcome.

    world/state/pilot/start_time allow batch runs to continue from where
    the previous loop ended; on_tick(record, state_after, events) feeds the
    optional center link without the simulation ever blocking on it.
    """
    world = world or config.load_world()
    state = state or config.robot.initial_state(world)
    pilot = pilot or PatrolState(config=config.pilot)
    engine = FuzzyEngine(config.fuzzy)
    rng = random.Random(config.seed) if config.robot.sonar_jitter else None

    t = start_time
    records: list[TickRecord] = []
    all_events: list = []
    collision_count = 0
    wall_min = math.inf
    reg_errors: list[float] = []
    reg_in_band = 0
    outcome = TIMEOUT

    while True:
        if t - start_time >= config.duration_limit:
            outcome = TIMEOUT
            break
        frame = sense(world, state, t, rng)
        pilot, cmd, events = patrol_tick(pilot, frame, engine)
        all_events.extend(events)

        if cmd.kind == STOP:
            result_state, elapsed, collision = state, 0.0, False
        else:
            res = step(world, state, cmd)
            result_state, elapsed, collision = res.state, res.elapsed, res.collision

        clearance, interior = wall_clearance(
            world, result_state.pose.point, result_state.body_radius)
        wall_min = min(wall_min, clearance)
        if interior and result_state.odometer >= REGULATION_WARMUP_CM:
            err = abs(clearance - config.pilot.wall_setpoint)
            reg_errors.append(err)
            if err <= 8.0:
                reg_in_band += 1

        record = TickRecord(
            t=t, pose=frame.pose,
            sonar_left=frame.sonar_left, sonar_front=frame.sonar_front,
            sonar_right=frame.sonar_right,
            hms_left=frame.hms_left, hms_right=frame.hms_right,
            battery=frame.battery_remaining,
            mode=pilot.mode, command=cmd, collision=collision,
            odometer=result_state.odometer,
            wall_distance=clearance, wall_interior=interior,
        )
        records.append(record)
        if collision:
            collision_count += 1
        state = result_state
        t += elapsed
        if on_tick is not None:
            on_tick(record, state, events, t)

        if collision:
            outcome = COLLISION
            break
        if pilot.mode is PatrolMode.DONE:
            outcome = LOOP_COMPLETE
            break
        if pilot.mode is PatrolMode.ALARM:
            outcome = ALARM
            break
        if pilot.mode is PatrolMode.BATTERY_OUT:
            outcome = BATTERY_OUT
            break

    alarm_cause = ""
    for e in all_events:
        cause = getattr(e, "cause", None)
        if cause:
            alarm_cause = cause
    summary = RunSummary(
        outcome=outcome,
        sim_duration=t - start_time,
        distance=state.odometer - (records[0].odometer if records else 0.0),
        min_wall_distance=wall_min if records else math.inf,
        mean_abs_wall_error=(math.fsum(reg_errors) / len(reg_errors))
        if reg_errors else 0.0,
        wall_band_fraction=(reg_in_band / len(reg_errors)) if reg_errors else 1.0,
        tick_count=len(records),
        collision_count=collision_count,
        loops_completed=pilot.loops_completed,
        alarm_cause=alarm_cause,
    )
    return RunResult(summary, records, state, pilot, all_events)


def run_and_write(config: ScenarioConfig, out_dir: Path | None = None,
                  on_tick=None) -> RunResult:
    result = run_scenario(config, on_tick=on_tick)
    out = out_dir or config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    write_trace(out / "trace.txt", describe_config(config), result.records,
                result.summary.pairs())
    summary_lines = [f"{k}={v}" for k, v in result.summary.pairs()]
    (out / "summary.txt").write_text("\n".join(summary_lines) + "\n",
                                     encoding="utf-8")
    return result


@dataclass(frozen=True)
class BatchReport:
    loops_completed: int
    total_sim_time: float
    battery_remaining: float
    final_outcome: str
    per_loop_durations: tuple[float, ...]

    def pairs(self) -> list[tuple[str, str]]:
        return [
            ("loops_completed", str(self.loops_completed)),
            ("total_sim_time", repr(self.total_sim_time)),
            ("battery_remaining", repr(self.battery_remaining)),
            ("final_outcome", self.final_outcome),
            ("per_loop_durations",
             ",".join(f"{d:.1f}" for d in self.per_loop_durations)),
        ]


def run_batch(config: ScenarioConfig, loops: int) -> BatchReport:
    """Patrol repeatedly on one battery charge until it dies or the loop
    quota is reached.  Each completed loop resets the mission controller
    and continues from the pose the endpoint maneuver finished at."""
    if loops < 1:
        raise ValueError("loops must be >= 1")
    world = config.load_world()
    state = config.robot.initial_state(world)
    if state.battery_remaining <= 0.0:
        return BatchReport(0, 0.0, 0.0, BATTERY_OUT, ())
    completed = 0
    t = 0.0
    durations: list[float] = []
    outcome = BATTERY_OUT
    while completed < loops:
        result = run_scenario(config, world=world, state=state,
                              pilot=PatrolState(config=config.pilot),
                              start_time=t)
        state = result.final_state
        t += result.summary.sim_duration
        outcome = result.summary.outcome
        if result.summary.outcome != LOOP_COMPLETE:
            break
        completed += 1
        durations.append(result.summary.sim_duration)
        if state.battery_remaining <= 0.0:
            outcome = BATTERY_OUT
            break
    return BatchReport(completed, t, state.battery_remaining, outcome,
                       tuple(durations))
