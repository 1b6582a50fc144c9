"""Robot state, discrete motion primitives, and the simulated sensor suite.

The simulation is advanced only through explicit step()/sense() calls and
contains no hidden state, so identical inputs always reproduce identical
trajectories.  Snapshots handed out (RobotState, SensorFrame) are frozen
values, safe to ship across threads.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import (
    Vec,
    distance,
    heading_of_vector,
    heading_vector,
    point_in_polygon,
    point_segment_distance,
    ray_circle,
    ray_segment,
    segments_intersect,
    wrap_angle,
)
from .worldmap import HUMAN_RADIUS, CircleObstacle, WorldMap

SONAR_MIN = 4.0
SONAR_MAX = 255.0
NO_ECHO = 255.0


class SimContractError(RuntimeError):
    """A simulation precondition was violated by the caller."""


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float  # degrees, clockwise-positive, 0 along +x

    def moved(self, dist: float) -> "Pose":
        dx, dy = heading_vector(self.heading)
        return Pose(self.x + dist * dx, self.y + dist * dy, self.heading)

    def turned(self, delta: float) -> "Pose":
        return Pose(self.x, self.y, (self.heading + delta) % 360.0)

    @property
    def point(self) -> Vec:
        return (self.x, self.y)


@dataclass(frozen=True)
class SonarMount:
    offset_deg: float      # relative to heading; -90 looks left, +60 right-forward
    half_width_deg: float  # fan half-angle
    rays: int              # rays cast evenly across the fan

    def __post_init__(self):
        if self.rays < 1:
            raise SimContractError("sonar mount needs at least one ray")
        if self.half_width_deg < 0:
            raise SimContractError("sonar half width must be >= 0")


@dataclass(frozen=True)
class HmsMount:
    offset_deg: float
    half_field_deg: float
    range_cm: float


DEFAULT_SONAR_MOUNTS = (
    SonarMount(-65.0, 20.0, 9),  # left, tilted 25 deg ahead of perpendicular
    SonarMount(0.0, 20.0, 9),    # front
    SonarMount(60.0, 20.0, 9),   # right-forward diagonal
)
DEFAULT_HMS_MOUNTS = (
    HmsMount(-45.0, 60.0, 150.0),  # left
    HmsMount(45.0, 60.0, 150.0),   # right
)

SONAR_LEFT, SONAR_FRONT, SONAR_RIGHT = 0, 1, 2
HMS_LEFT, HMS_RIGHT = 0, 1


@dataclass(frozen=True)
class RobotState:
    pose: Pose
    body_radius: float = 18.0
    battery_remaining: float = 5400.0  # seconds of drive time
    speed_forward: float = 10.0        # cm/s
    speed_turn: float = 30.0           # deg/s
    sonar_mounts: tuple[SonarMount, ...] = DEFAULT_SONAR_MOUNTS
    hms_mounts: tuple[HmsMount, ...] = DEFAULT_HMS_MOUNTS
    odometer: float = 0.0

    def __post_init__(self):
        if self.body_radius <= 0 or self.speed_forward <= 0 or self.speed_turn <= 0:
            raise SimContractError("radius and speeds must be positive")
        if self.battery_remaining < 0:
            raise SimContractError("battery cannot be negative")
        if len(self.sonar_mounts) != 3:
            raise SimContractError("exactly three sonar mounts (left, front, right)")
        if len(self.hms_mounts) != 2:
            raise SimContractError("exactly two HMS mounts (left, right)")


TURN = "TURN"
FORWARD = "FORWARD"
STOP = "STOP"


@dataclass(frozen=True)
class MotionCommand:
    kind: str
    value: float = 0.0

    def __post_init__(self):
        if self.kind == FORWARD and self.value < 0:
            raise SimContractError("FORWARD distance must be >= 0")
        if self.kind == TURN and not -180.0 <= self.value <= 180.0:
            raise SimContractError("TURN delta must lie in [-180, 180]")
        if self.kind not in (TURN, FORWARD, STOP):
            raise SimContractError(f"unknown command kind {self.kind!r}")


def turn(delta_deg: float) -> MotionCommand:
    return MotionCommand(TURN, float(delta_deg))


def forward(dist_cm: float) -> MotionCommand:
    return MotionCommand(FORWARD, float(dist_cm))


def stop() -> MotionCommand:
    return MotionCommand(STOP)


@dataclass(frozen=True)
class SensorFrame:
    t: float
    sonar_left: float
    sonar_front: float
    sonar_right: float
    hms_left: bool
    hms_right: bool
    battery_remaining: float
    pose: Pose  # ground truth, for logging only


@dataclass(frozen=True)
class StepResult:
    state: RobotState
    elapsed: float
    collision: bool
    battery_out: bool = False


def _ray_hit(world: WorldMap, t: float, origin: Vec, direction: Vec) -> float | None:
    best: float | None = None
    for w in world.walls:
        d = ray_segment(origin, direction, w.p1, w.p2)
        if d is not None and (best is None or d < best):
            best = d
    for ob in world.obstacles:
        if isinstance(ob, CircleObstacle):
            d = ray_circle(origin, direction, ob.center, ob.radius)
            if d is not None and (best is None or d < best):
                best = d
        else:
            pts = ob.points
            for i in range(len(pts)):
                d = ray_segment(origin, direction, pts[i], pts[(i + 1) % len(pts)])
                if d is not None and (best is None or d < best):
                    best = d
    for h in world.active_humans(t):
        d = ray_circle(origin, direction, h.position, HUMAN_RADIUS)
        if d is not None and (best is None or d < best):
            best = d
    return best


def sonar_read(world: WorldMap, state: RobotState, mount_index: int,
               t: float = 0.0, rng=None) -> float:
    """Fan-beam range reading in cm, clamped to [4, 255]; 255 means no echo.

    Rays fan out from the transducer point on the robot shell, so readings
    measure shell-to-surface distance.  The optional rng adds uniform
    +/-2 cm jitter to echoes (never to the no-echo value).
    """
    mount = state.sonar_mounts[mount_index]
    pose = state.pose
    axis = pose.heading + mount.offset_deg
    origin_dir = heading_vector(axis)
    origin = (
        pose.x + state.body_radius * origin_dir[0],
        pose.y + state.body_radius * origin_dir[1],
    )
    if mount.rays == 1:
        angles = [axis]
    else:
        step_deg = 2.0 * mount.half_width_deg / (mount.rays - 1)
        angles = [axis - mount.half_width_deg + i * step_deg for i in range(mount.rays)]
    best: float | None = None
    for ang in angles:
        d = _ray_hit(world, t, origin, heading_vector(ang))
        if d is not None and (best is None or d < best):
            best = d
    if best is None or best >= SONAR_MAX:
        return NO_ECHO
    if rng is not None:
        best += rng.uniform(-2.0, 2.0)
    return min(max(best, SONAR_MIN), SONAR_MAX)


def hms_read(world: WorldMap, state: RobotState, mount_index: int, t: float) -> bool:
    """True iff an active human is in range, inside the field, and visible."""
    mount = state.hms_mounts[mount_index]
    pose = state.pose
    for h in world.active_humans(t):
        if distance(pose.point, h.position) > mount.range_cm:
            continue
        bearing = heading_of_vector(h.position[0] - pose.x, h.position[1] - pose.y)
        rel = wrap_angle(bearing - (pose.heading + mount.offset_deg))
        if abs(rel) > mount.half_field_deg:
            continue
        if any(
            segments_intersect(pose.point, h.position, w.p1, w.p2)
            for w in world.walls
        ):
            continue
        return True
    return False


def sense(world: WorldMap, state: RobotState, t: float, rng=None) -> SensorFrame:
    """One tick's worth of sensor values; deterministic given (world, state, t)."""
    return SensorFrame(
        t=t,
        sonar_left=sonar_read(world, state, SONAR_LEFT, t, rng),
        sonar_front=sonar_read(world, state, SONAR_FRONT, t, rng),
        sonar_right=sonar_read(world, state, SONAR_RIGHT, t, rng),
        hms_left=hms_read(world, state, HMS_LEFT, t),
        hms_right=hms_read(world, state, HMS_RIGHT, t),
        battery_remaining=state.battery_remaining,
        pose=state.pose,
    )


def disc_overlaps(world: WorldMap, center: Vec, radius: float) -> bool:
    """True when a robot disc at center penetrates walls or obstacles.

    Exact tangency does not count; the sweep stops a robot at contact, not
    one granularity step short of it.
    """
    limit = radius - 1e-9
    for w in world.walls:
        if point_segment_distance(center, w.p1, w.p2) < limit:
            return True
    for ob in world.obstacles:
        if isinstance(ob, CircleObstacle):
            if distance(center, ob.center) < limit + ob.radius:
                return True
        else:
            pts = ob.points
            if point_in_polygon(center, pts):
                return True
            for i in range(len(pts)):
                if point_segment_distance(center, pts[i], pts[(i + 1) % len(pts)]) < limit:
                    return True
    return False


_SWEEP_STEP = 1.0  # cm granularity of the forward collision sweep


def step(world: WorldMap, state: RobotState, cmd: MotionCommand) -> StepResult:
    """Execute one motion primitive against the world.

    FORWARD sweeps the body disc in 1 cm increments and stops at the last
    free position on contact.  Battery drains by elapsed command time; a
    command that would outlast the battery is truncated at the depletion
    point and flagged battery_out.
    """
    if state.battery_remaining <= 0.0:
        raise SimContractError("battery exhausted; step() requires battery > 0")

    if cmd.kind == STOP:
        return StepResult(state, 0.0, False)

    if cmd.kind == TURN:
        wanted = abs(cmd.value)
        max_by_battery = state.battery_remaining * state.speed_turn
        applied = min(wanted, max_by_battery)
        battery_out = applied < wanted - 1e-12
        elapsed = applied / state.speed_turn
        new_heading_delta = math.copysign(applied, cmd.value) if cmd.value else 0.0
        new_state = replace(
            state,
            pose=state.pose.turned(new_heading_delta),
            battery_remaining=max(state.battery_remaining - elapsed, 0.0),
        )
        return StepResult(new_state, elapsed, False, battery_out)

    # FORWARD
    wanted = cmd.value
    max_by_battery = state.battery_remaining * state.speed_forward
    target = min(wanted, max_by_battery)
    direction = heading_vector(state.pose.heading)
    sx, sy = state.pose.x, state.pose.y
    traveled = 0.0
    collision = False
    reach = 0.0
    while reach < target - 1e-12:
        reach = min(reach + _SWEEP_STEP, target)
        candidate = (sx + reach * direction[0], sy + reach * direction[1])
        if disc_overlaps(world, candidate, state.body_radius):
            collision = True
            break
        traveled = reach
    elapsed = traveled / state.speed_forward
    battery_out = (not collision) and traveled < wanted - 1e-9 and (
        target < wanted - 1e-12
    )
    new_pose = Pose(sx + traveled * direction[0], sy + traveled * direction[1],
                    state.pose.heading)
    new_state = replace(
        state,
        pose=new_pose,
        battery_remaining=max(state.battery_remaining - elapsed, 0.0),
        odometer=state.odometer + traveled,
    )
    return StepResult(new_state, elapsed, collision, battery_out)
