"""Mission runner attached to a control center.

Same simulation loop as the headless runner plus: operator commands always
outrank autonomous control (the queue is drained before every decision),
telemetry streams at 10 Hz and video stubs at 15 Hz of sim time, and a
STOP switches to manual override where drive commands come only from the
operator.  Every executed motion command lands in commands.log with its
source, which is how operator priority is audited.
"""
from __future__ import annotations

import math
import time

from ..fuzzy import FuzzyEngine
from ..pilot import AlarmRaised, PatrolMode, PatrolState, patrol_tick
from ..protocol import (
    VIDEO_HEIGHT,
    VIDEO_WIDTH,
    AlarmSignal,
    TelemetryFrame,
    VideoFrameStub,
    cadence_marks,
    video_payload,
)
from ..worldsim import STOP, MotionCommand, Pose, forward, sense, step, turn
from .agentlink import CenterLink
from .config import ScenarioConfig, describe_config
from .runner import LOOP_COMPLETE, RunSummary, wall_clearance
from .trace import TickRecord, write_trace


class AttachedAgent:
    def __init__(self, config: ScenarioConfig):
        self.config = config
        self.link = CenterLink(config.center.endpoint, config.center.buffer)
        self.world = config.load_world()
        self.state = config.robot.initial_state(self.world)
        self.pilot = PatrolState(config=config.pilot)
        self.engine = FuzzyEngine(config.fuzzy)
        self.t = 0.0
        self.telemetry_seq = 0
        self.video_seq = 0
        self.manual = False
        self.finished = False  # mission over (terminal mode / collision / timeout)
        self.records: list[TickRecord] = []
        self.command_log_path = config.output_dir / "commands.log"
        config.output_dir.mkdir(parents=True, exist_ok=True)
        self.command_log_path.write_text("", encoding="utf-8")

    # ----- logging / emission ------------------------------------------------

    def log_command(self, source: str, cmd: MotionCommand) -> None:
        with open(self.command_log_path, "a", encoding="utf-8") as fh:
            fh.write(f"t={self.t!r} source={source} kind={cmd.kind} "
                     f"value={cmd.value!r}\n")

    def _mode_text(self) -> str:
        return "MANUAL" if self.manual else self.pilot.mode.value

    def _telemetry(self, t_sim: float, pose: Pose) -> TelemetryFrame:
        frame = sense(self.world, self.state, t_sim)
        msg = TelemetryFrame(
            seq=self.telemetry_seq, t_sim=t_sim,
            x=pose.x, y=pose.y, heading=pose.heading,
            sonar_left=frame.sonar_left, sonar_front=frame.sonar_front,
            sonar_right=frame.sonar_right,
            hms_left=frame.hms_left, hms_right=frame.hms_right,
            battery_remaining=self.state.battery_remaining,
            mode=self._mode_text(), odometer=self.state.odometer,
        )
        self.telemetry_seq += 1
        return msg

    def emit_stream(self, t0: float, t1: float, pose0: Pose, pose1: Pose) -> None:
        span = t1 - t0
        for mark in cadence_marks(t0, t1, self.config.center.telemetry_hz):
            f = (mark - t0) / span if span > 0 else 1.0
            pose = Pose(
                pose0.x + (pose1.x - pose0.x) * f,
                pose0.y + (pose1.y - pose0.y) * f,
                pose0.heading + (pose1.heading - pose0.heading) * f,
            )
            self.link.send(self._telemetry(mark, pose))
        for mark in cadence_marks(t0, t1, self.config.center.video_hz):
            self.link.send(VideoFrameStub(
                seq=self.video_seq, t_sim=mark,
                width=VIDEO_WIDTH, height=VIDEO_HEIGHT,
                payload=video_payload(self.video_seq)))
            self.video_seq += 1

    def keepalive(self) -> None:
        self.link.send(self._telemetry(self.t, self.state.pose))

    # ----- command handling ----------------------------------------------------

    def _execute(self, cmd: MotionCommand, source: str) -> None:
        pose0 = self.state.pose
        res = step(self.world, self.state, cmd)
        self.state = res.state
        t0, self.t = self.t, self.t + res.elapsed
        self.log_command(source, cmd)
        self.emit_stream(t0, self.t, pose0, self.state.pose)

    def _log_control(self, oc) -> None:
        with open(self.command_log_path, "a", encoding="utf-8") as fh:
            fh.write(f"t={self.t!r} source=operator:{oc.operator_id} "
                     f"kind={oc.kind} value={oc.value!r}\n")

    def handle_operator(self, commands) -> None:
        for oc in commands:
            if oc.kind == "STOP":
                self.manual = True
                self._log_control(oc)
                self.keepalive()
            elif oc.kind == "START_PATROL":
                self.manual = False
                self.finished = False
                self.pilot = PatrolState(config=self.config.pilot)
                self._log_control(oc)
            elif oc.kind == "MANUAL_FORWARD" and self.manual:
                self._execute(forward(oc.value), f"operator:{oc.operator_id}")
            elif oc.kind == "MANUAL_TURN" and self.manual:
                self._execute(turn(oc.value), f"operator:{oc.operator_id}")
            else:
                # CAMERA_PAN / ACK_ALARM, or manual drive outside override:
                # nothing to actuate, but the request is still audited
                self._log_control(oc)

    # ----- autonomous tick -------------------------------------------------------

    def autonomous_tick(self) -> bool:
        """One patrol decision; returns False once the mission is over."""
        if self.manual or self.finished:
            return False
        if self.t >= self.config.duration_limit:
            self.finished = True
            return False
        frame = sense(self.world, self.state, self.t)
        self.pilot, cmd, events = patrol_tick(self.pilot, frame, self.engine)
        for event in events:
            if isinstance(event, AlarmRaised):
                self.link.send(AlarmSignal(
                    t_sim=event.t, cause=event.cause,
                    x=event.pose.x, y=event.pose.y,
                    heading=event.pose.heading))
        pose0 = self.state.pose
        if cmd.kind == STOP:
            elapsed, collision = 0.0, False
        else:
            res = step(self.world, self.state, cmd)
            self.state, elapsed, collision = res.state, res.elapsed, res.collision
        self.log_command("pilot", cmd)
        clearance, interior = wall_clearance(
            self.world, self.state.pose.point, self.state.body_radius)
        self.records.append(TickRecord(
            t=self.t, pose=frame.pose,
            sonar_left=frame.sonar_left, sonar_front=frame.sonar_front,
            sonar_right=frame.sonar_right,
            hms_left=frame.hms_left, hms_right=frame.hms_right,
            battery=frame.battery_remaining, mode=self.pilot.mode,
            command=cmd, collision=collision,
            odometer=self.state.odometer,
            wall_distance=clearance, wall_interior=interior,
        ))
        t0, self.t = self.t, self.t + elapsed
        self.emit_stream(t0, self.t, pose0, self.state.pose)
        if collision or self.pilot.mode in (
                PatrolMode.ALARM, PatrolMode.DONE, PatrolMode.BATTERY_OUT):
            self.finished = True
            return False
        return True


def run_attached(config: ScenarioConfig, realtime: float = 0.0) -> RunSummary:
    """Run attached to a center; returns the mission summary.

    With linger set, the agent keeps serving telemetry and operator
    commands after the mission ends, until the process is interrupted.
    """
    agent = AttachedAgent(config)
    last_keepalive = time.monotonic()
    try:
        while True:
            agent.handle_operator(agent.link.poll_commands())
            if not agent.manual and not agent.finished:
                wall_before = time.monotonic()
                t_before = agent.t
                agent.autonomous_tick()
                if realtime > 0 and agent.t > t_before:
                    budget = (agent.t - t_before) / realtime
                    sleep_for = budget - (time.monotonic() - wall_before)
                    if sleep_for > 0:
                        time.sleep(sleep_for)
                continue
            # paused (manual override) or mission over
            if agent.finished and not agent.manual and not config.center.linger:
                break
            time.sleep(0.05)
            if time.monotonic() - last_keepalive > 0.25:
                agent.keepalive()
                last_keepalive = time.monotonic()
    except KeyboardInterrupt:
        pass
    finally:
        agent.link.close()

    # summarize what the autonomous portion did (manual moves excluded)
    headless_like = summarize(agent, config)
    out = config.output_dir
    out.mkdir(parents=True, exist_ok=True)
    write_trace(out / "trace.txt", describe_config(config), agent.records,
                headless_like.pairs())
    (out / "summary.txt").write_text(
        "\n".join(f"{k}={v}" for k, v in headless_like.pairs()) + "\n",
        encoding="utf-8")
    return headless_like


def summarize(agent: AttachedAgent, config: ScenarioConfig) -> RunSummary:
    records = agent.records
    outcome = "TIMEOUT"
    if records:
        mode = records[-1].mode
        if records[-1].collision:
            outcome = "COLLISION"
        elif mode is PatrolMode.DONE:
            outcome = LOOP_COMPLETE
        elif mode is PatrolMode.ALARM:
            outcome = "ALARM"
        elif mode is PatrolMode.BATTERY_OUT:
            outcome = "BATTERY_OUT"
    reg = [r for r in records
           if r.wall_interior and r.odometer >= 200.0]
    errors = [abs(r.wall_distance - config.pilot.wall_setpoint) for r in reg]
    cause = ""
    for r in records:
        if r.hms_left:
            cause = "HMS_LEFT"
        elif r.hms_right:
            cause = "HMS_RIGHT"
    return RunSummary(
        outcome=outcome,
        sim_duration=records[-1].t if records else 0.0,
        distance=records[-1].odometer if records else 0.0,
        min_wall_distance=min((r.wall_distance for r in records),
                              default=math.inf),
        mean_abs_wall_error=(math.fsum(errors) / len(errors)) if errors else 0.0,
        wall_band_fraction=(sum(1 for e in errors if e <= 8.0) / len(errors))
        if errors else 1.0,
        tick_count=len(records),
        collision_count=sum(1 for r in records if r.collision),
        loops_completed=agent.pilot.loops_completed,
        alarm_cause=cause,
        telemetry_drops=agent.link.drops,
    )
