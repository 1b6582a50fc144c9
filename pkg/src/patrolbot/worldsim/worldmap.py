"""World description and the line-oriented map file format.

One entity per line, `#` starts a comment, units are cm / seconds / degrees:

    wall x1 y1 x2 y2
    circle cx cy r
    poly x1 y1 x2 y2 x3 y3 ...
    human t x y duration
    start x y heading
    meta key value
"""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .geometry import (
    Vec,
    point_in_polygon,
    point_segment_distance,
    polygon_area,
)

#: Radius of the circle a human body presents to the sonar, cm.
HUMAN_RADIUS = 25.0


class MapError(ValueError):
    pass


class MapSyntaxError(MapError):
    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MapValidationError(MapError):
    def __init__(self, entity: str, message: str):
        super().__init__(f"{entity}: {message}")
        self.entity = entity


@dataclass(frozen=True)
class Wall:
    p1: Vec
    p2: Vec


@dataclass(frozen=True)
class CircleObstacle:
    center: Vec
    radius: float


@dataclass(frozen=True)
class PolygonObstacle:
    points: tuple[Vec, ...]


@dataclass(frozen=True)
class Human:
    appear_time: float
    position: Vec
    duration: float

    def active(self, t: float) -> bool:
        return self.appear_time <= t < self.appear_time + self.duration


@dataclass
class WorldMap:
    walls: list[Wall] = field(default_factory=list)
    obstacles: list = field(default_factory=list)
    humans: list[Human] = field(default_factory=list)
    start_pose: tuple[float, float, float] = (0.0, 0.0, 0.0)
    meta: dict[str, str] = field(default_factory=dict)

    def active_humans(self, t: float) -> list[Human]:
        return [h for h in self.humans if h.active(t)]

    def validate(self) -> None:
        for i, w in enumerate(self.walls):
            if w.p1 == w.p2:
                raise MapValidationError(f"wall #{i + 1}", "zero length")
        for i, ob in enumerate(self.obstacles):
            if isinstance(ob, CircleObstacle):
                if not ob.radius > 0:
                    raise MapValidationError(f"circle #{i + 1}", "radius must be > 0")
            else:
                if len(ob.points) < 3:
                    raise MapValidationError(f"poly #{i + 1}", "needs >= 3 vertices")
                if polygon_area(ob.points) <= 0.0:
                    raise MapValidationError(f"poly #{i + 1}", "zero area")
        for i, h in enumerate(self.humans):
            if not h.duration > 0:
                raise MapValidationError(f"human #{i + 1}", "duration must be > 0")
        sx, sy, _ = self.start_pose
        for i, ob in enumerate(self.obstacles):
            if isinstance(ob, CircleObstacle):
                dx, dy = sx - ob.center[0], sy - ob.center[1]
                if dx * dx + dy * dy < ob.radius * ob.radius:
                    raise MapValidationError("start", f"inside circle #{i + 1}")
            elif point_in_polygon((sx, sy), ob.points):
                raise MapValidationError("start", f"inside poly #{i + 1}")
        for i, w in enumerate(self.walls):
            if point_segment_distance((sx, sy), w.p1, w.p2) < 1e-9:
                raise MapValidationError("start", f"on wall #{i + 1}")


def _floats(line_no: int, parts: list[str], count: int | None = None) -> list[float]:
    if count is not None and len(parts) != count:
        raise MapSyntaxError(line_no, f"expected {count} numbers, got {len(parts)}")
    try:
        return [float(p) for p in parts]
    except ValueError:
        raise MapSyntaxError(line_no, f"non-numeric value in {' '.join(parts)!r}") from None


def parse_map(text: str) -> WorldMap:
    world = WorldMap()
    saw_start = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        keyword, *parts = line.split()
        if keyword == "wall":
            x1, y1, x2, y2 = _floats(line_no, parts, 4)
            world.walls.append(Wall((x1, y1), (x2, y2)))
        elif keyword == "circle":
            cx, cy, r = _floats(line_no, parts, 3)
            world.obstacles.append(CircleObstacle((cx, cy), r))
        elif keyword == "poly":
            vals = _floats(line_no, parts)
            if len(vals) < 6 or len(vals) % 2:
                raise MapSyntaxError(line_no, "poly needs >= 3 coordinate pairs")
            pts = tuple((vals[i], vals[i + 1]) for i in range(0, len(vals), 2))
            world.obstacles.append(PolygonObstacle(pts))
        elif keyword == "human":
            t, x, y, duration = _floats(line_no, parts, 4)
            world.humans.append(Human(t, (x, y), duration))
        elif keyword == "start":
            x, y, heading = _floats(line_no, parts, 3)
            world.start_pose = (x, y, heading % 360.0)
            saw_start = True
        elif keyword == "meta":
            if len(parts) < 2:
                raise MapSyntaxError(line_no, "meta needs a key and a value")
            world.meta[parts[0]] = " ".join(parts[1:])
        else:
            raise MapSyntaxError(line_no, f"unknown entity {keyword!r}")
    if not saw_start and (world.walls or world.obstacles):
        world.meta.setdefault("warning", "no start pose given")
    world.validate()
    return world


def load_map(path: str | Path) -> WorldMap:
    return parse_map(Path(path).read_text(encoding="utf-8"))


def bundled_map_path(name: str) -> Path:
    """Path of a map shipped with the package, e.g. 'corridor_g2.map'."""
    if not name.endswith(".map"):
        name += ".map"
    with resources.as_file(resources.files("patrolbot.maps") / name) as p:
        path = Path(p)
    if not path.exists():
        raise FileNotFoundError(f"no bundled map named {name!r}")
    return path


def load_bundled_map(name: str) -> WorldMap:
    return load_map(bundled_map_path(name))
