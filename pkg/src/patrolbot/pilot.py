"""Patrol controller: wall following, fuzzy avoidance arbitration, endpoint
detection, and the alarm reaction.

The controller is a pure state-transition function: patrol_tick maps
(state, sensor frame) to (new state, motion command, events).  States are
frozen values, so snapshots can be logged or shipped across threads freely.

Behavioural contract, in priority order per tick:

1. A dead battery ends the mission (BATTERY_OUT, STOP).
2. Any human-motion bit forces STOP and the ALARM mode, no matter what the
   sonars say.
3. Directly after any TURN the robot drives a fixed straight step before
   acting on sensors again, so two turns are never issued back to back and
   the platform cannot wedge itself spinning in place.
4. Five consecutive no-echo readings on the wall-side sonar mean the
   endpoint gap: turn 90 degrees, one straight step, mission DONE.
5. Otherwise the fuzzy avoidance angle wins when it exceeds its deadband;
   wall following handles the rest.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .fuzzy import FuzzyEngine
from .worldsim import (
    NO_ECHO,
    TURN,
    MotionCommand,
    Pose,
    SensorFrame,
    forward,
    stop,
    turn,
)


class PatrolMode(str, Enum):
    FOLLOW = "FOLLOW"
    AVOID = "AVOID"
    ALARM = "ALARM"
    DONE = "DONE"
    BATTERY_OUT = "BATTERY_OUT"


TERMINAL_MODES = frozenset(
    {PatrolMode.ALARM, PatrolMode.DONE, PatrolMode.BATTERY_OUT}
)


class PilotContractError(RuntimeError):
    """patrol_tick was called in a terminal mode."""


@dataclass(frozen=True)
class PilotConfig:
    wall_setpoint: float = 30.0      # cm held to the followed wall
    wall_deadband: float = 2.0       # cm of tolerance before correcting
    follow_turn_step: float = 10.0   # degrees per wall-follow correction
    straight_step: float = 10.0      # cm driven after every turn
    avoid_deadband: float = 2.0      # degrees of fuzzy output ignored
    end_detect_count: int = 5        # consecutive no-echo reads for endpoint
    end_turn: float = 90.0           # final turn at the endpoint gap

    def __post_init__(self):
        values = (
            self.wall_setpoint, self.wall_deadband, self.follow_turn_step,
            self.straight_step, self.avoid_deadband, self.end_detect_count,
            self.end_turn,
        )
        if any(not v > 0 for v in values):
            raise ValueError("all pilot parameters must be positive")
        if not self.avoid_deadband < 20.0:
            raise ValueError("avoid_deadband must stay below 20 degrees")


class Intent(Enum):
    FOLLOW = "FOLLOW"
    AVOID = "AVOID"
    ALARM = "ALARM"


@dataclass(frozen=True)
class ModeChanged:
    t: float
    old: PatrolMode
    new: PatrolMode


@dataclass(frozen=True)
class AlarmRaised:
    t: float
    cause: str  # HMS_LEFT | HMS_RIGHT
    pose: Pose


@dataclass(frozen=True)
class PatrolState:
    mode: PatrolMode = PatrolMode.FOLLOW
    no_echo_count: int = 0
    loops_completed: int = 0
    last_command: MotionCommand | None = None
    ending: bool = False  # endpoint turn issued, final straight step pending
    config: PilotConfig = field(default_factory=PilotConfig)


def wall_follow_step(left_cm: float, cfg: PilotConfig) -> MotionCommand:
    """Hold the wall-side sonar at the setpoint.

    Too close turns away from the wall (positive), too far turns back
    toward it (negative); in the deadband the robot just drives on.  The
    straight step after each correction is issued by patrol_tick.
    """
    error = left_cm - cfg.wall_setpoint
    if abs(error) <= cfg.wall_deadband:
        return forward(cfg.straight_step)
    if error < 0:
        return turn(cfg.follow_turn_step)
    return turn(-cfg.follow_turn_step)


def arbitrate(frame: SensorFrame, fuzzy_out: float, cfg: PilotConfig) -> Intent:
    """Pick between wall following, obstacle avoidance, and the alarm."""
    if frame.hms_left or frame.hms_right:
        return Intent.ALARM
    if abs(fuzzy_out) > cfg.avoid_deadband:
        return Intent.AVOID
    return Intent.FOLLOW


_default_engine: FuzzyEngine | None = None


def _engine() -> FuzzyEngine:
    global _default_engine
    if _default_engine is None:
        _default_engine = FuzzyEngine()
    return _default_engine


def patrol_tick(
    state: PatrolState,
    frame: SensorFrame,
    engine: FuzzyEngine | None = None,
) -> tuple[PatrolState, MotionCommand, list]:
    """One decision cycle; see the module docstring for the priority order."""
    if state.mode in TERMINAL_MODES:
        raise PilotContractError(f"patrol_tick called in terminal mode {state.mode}")
    cfg = state.config
    events: list = []

    no_echo = state.no_echo_count + 1 if frame.sonar_left >= NO_ECHO else 0

    def transition(new_mode: PatrolMode, cmd: MotionCommand, **changes):
        if new_mode is not state.mode:
            events.append(ModeChanged(frame.t, state.mode, new_mode))
        new = replace(state, mode=new_mode, no_echo_count=no_echo,
                      last_command=cmd, **changes)
        return new, cmd, events

    if frame.battery_remaining <= 0.0:
        return transition(PatrolMode.BATTERY_OUT, stop())

    if frame.hms_left or frame.hms_right:
        cause = "HMS_LEFT" if frame.hms_left else "HMS_RIGHT"
        events.append(AlarmRaised(frame.t, cause, frame.pose))
        return transition(PatrolMode.ALARM, stop())

    mandatory_straight = (
        state.last_command is not None and state.last_command.kind == TURN
    )
    if mandatory_straight:
        cmd = forward(cfg.straight_step)
        if state.ending:
            return transition(
                PatrolMode.DONE, cmd,
                ending=False, loops_completed=state.loops_completed + 1,
            )
        return transition(state.mode, cmd)

    if no_echo >= cfg.end_detect_count:
        return transition(state.mode, turn(cfg.end_turn), ending=True)

    alpha = (engine or _engine()).avoidance_angle(frame.sonar_front, frame.sonar_right)
    intent = arbitrate(frame, alpha, cfg)
    if intent is Intent.AVOID:
        return transition(PatrolMode.AVOID, turn(alpha))
    return transition(PatrolMode.FOLLOW, wall_follow_step(frame.sonar_left, cfg))
