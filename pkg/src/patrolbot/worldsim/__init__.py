"""Deterministic 2D world: walls, obstacles, humans, sensors, kinematics."""
from .geometry import (
    Vec,
    distance,
    heading_of_vector,
    heading_vector,
    point_segment_distance,
    point_segment_nearest,
    wrap_angle,
)
from .robot import (
    DEFAULT_HMS_MOUNTS,
    DEFAULT_SONAR_MOUNTS,
    FORWARD,
    HMS_LEFT,
    HMS_RIGHT,
    NO_ECHO,
    SONAR_FRONT,
    SONAR_LEFT,
    SONAR_MAX,
    SONAR_MIN,
    SONAR_RIGHT,
    STOP,
    TURN,
    HmsMount,
    MotionCommand,
    Pose,
    RobotState,
    SensorFrame,
    SimContractError,
    SonarMount,
    StepResult,
    disc_overlaps,
    forward,
    hms_read,
    sense,
    sonar_read,
    step,
    stop,
    turn,
)
from .worldmap import (
    HUMAN_RADIUS,
    CircleObstacle,
    Human,
    MapError,
    MapSyntaxError,
    MapValidationError,
    PolygonObstacle,
    Wall,
    WorldMap,
    bundled_map_path,
    load_bundled_map,
    load_map,
    parse_map,
)

__all__ = [name for name in dir() if not name.startswith("_")]
