"""Plain-float 2D geometry for ray casting and disc collision checks.

Angles follow the robot convention used across the suite: headings are in
degrees and increase clockwise when the map is drawn x-right / y-up, so a
positive turn command swings the robot to its own right.  heading 0 points
along +x, 90 along -y, 180 along -x, 270 along +y.
"""
from __future__ import annotations

import math

Vec = tuple[float, float]

_PARALLEL_EPS = 1e-12


def heading_vector(heading_deg: float) -> Vec:
    r = math.radians(heading_deg)
    return (math.cos(r), -math.sin(r))


def heading_of_vector(dx: float, dy: float) -> float:
    """Inverse of heading_vector, normalized to [0, 360)."""
    return math.degrees(math.atan2(-dy, dx)) % 360.0


def wrap_angle(deg: float) -> float:
    """Normalize to (-180, 180]."""
    a = math.fmod(deg, 360.0)
    if a <= -180.0:
        a += 360.0
    elif a > 180.0:
        a -= 360.0
    return a


def distance(p: Vec, q: Vec) -> float:
    return math.hypot(q[0] - p[0], q[1] - p[1])


def ray_segment(origin: Vec, direction: Vec, a: Vec, b: Vec) -> float | None:
    """Distance along the ray to segment ab, or None.

    Rays running parallel to a segment miss it even when collinear; a
    zero-thickness edge seen exactly edge-on returns no echo, which is
    precisely how a thin obstacle fools a real range sensor.
    """
    ex, ey = b[0] - a[0], b[1] - a[1]
    denom = direction[0] * ey - direction[1] * ex
    if abs(denom) < _PARALLEL_EPS:
        return None
    aox, aoy = a[0] - origin[0], a[1] - origin[1]
    t = (aox * ey - aoy * ex) / denom
    s = (aox * direction[1] - aoy * direction[0]) / denom
    if t >= 0.0 and -1e-9 <= s <= 1.0 + 1e-9:
        return t
    return None


def ray_circle(origin: Vec, direction: Vec, center: Vec, radius: float) -> float | None:
    """Distance along the ray to a circle boundary, or None."""
    ox, oy = center[0] - origin[0], center[1] - origin[1]
    proj = ox * direction[0] + oy * direction[1]
    closest_sq = ox * ox + oy * oy - proj * proj
    rad_sq = radius * radius
    if closest_sq > rad_sq:
        return None
    half = math.sqrt(rad_sq - closest_sq)
    t = proj - half
    if t < 0.0:
        t = proj + half
    return t if t >= 0.0 else None


def point_segment_nearest(p: Vec, a: Vec, b: Vec) -> tuple[float, float]:
    """(distance, s) where s in [0, 1] parametrizes the nearest point."""
    ex, ey = b[0] - a[0], b[1] - a[1]
    px, py = p[0] - a[0], p[1] - a[1]
    seg_sq = ex * ex + ey * ey
    if seg_sq <= 0.0:
        return math.hypot(px, py), 0.0
    s = (px * ex + py * ey) / seg_sq
    s = 0.0 if s < 0.0 else 1.0 if s > 1.0 else s
    return math.hypot(px - s * ex, py - s * ey), s


def point_segment_distance(p: Vec, a: Vec, b: Vec) -> float:
    return point_segment_nearest(p, a, b)[0]


def segments_intersect(p1: Vec, p2: Vec, q1: Vec, q2: Vec) -> bool:
    """Proper or touching intersection of two segments."""
    def orient(a: Vec, b: Vec, c: Vec) -> float:
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0) or d1 == 0 or d2 == 0) and (
        (d3 > 0) != (d4 > 0) or d3 == 0 or d4 == 0
    ):
        # collinear / touching cases need the bounding-box check
        if d1 == 0 and d2 == 0 and d3 == 0 and d4 == 0:
            return (
                min(p1[0], p2[0]) <= max(q1[0], q2[0])
                and min(q1[0], q2[0]) <= max(p1[0], p2[0])
                and min(p1[1], p2[1]) <= max(q1[1], q2[1])
                and min(q1[1], q2[1]) <= max(p1[1], p2[1])
            )
        return True
    return False


def polygon_area(points: tuple[Vec, ...]) -> float:
    """Unsigned shoelace area."""
    total = 0.0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        total += x1 * y2 - x2 * y1
    return abs(total) / 2.0


def point_in_polygon(p: Vec, points: tuple[Vec, ...]) -> bool:
    """Crossing-number test; boundary points count as inside."""
    x, y = p
    inside = False
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        if point_segment_distance(p, (x1, y1), (x2, y2)) < 1e-9:
            return True
        if (y1 > y) != (y2 > y):
            xcross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xcross > x:
                inside = not inside
    return inside
