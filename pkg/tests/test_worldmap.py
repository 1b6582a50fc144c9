"""Map parsing, validation, and the bundled corridor geometry."""
import math

import pytest

from patrolbot.worldsim import (
    CircleObstacle,
    Human,
    MapSyntaxError,
    MapValidationError,
    PolygonObstacle,
    Wall,
    load_bundled_map,
    parse_map,
)


class TestParsing:
    def test_all_entities(self):
        world = parse_map(
            """
            # a comment line
            meta name demo
            wall 0 0 100 0   # trailing comment
            circle 50 50 10
            poly 0 10 10 10 10 20
            human 5 30 30 60
            start 20 20 180
            """
        )
        assert world.meta["name"] == "demo"
        assert world.walls == [Wall((0, 0), (100, 0))]
        assert world.obstacles[0] == CircleObstacle((50, 50), 10)
        assert world.obstacles[1] == PolygonObstacle(((0, 10), (10, 10), (10, 20)))
        assert world.humans == [Human(5, (30, 30), 60)]
        assert world.start_pose == (20, 20, 180)

    def test_empty_map_is_valid(self):
        world = parse_map("")
        assert world.walls == [] and world.obstacles == []

    def test_syntax_error_carries_line_number(self):
        with pytest.raises(MapSyntaxError) as err:
            parse_map("wall 0 0 100\n")
        assert err.value.line_no == 1
        with pytest.raises(MapSyntaxError) as err:
            parse_map("meta name x\nwall 0 0 ten 0\n")
        assert err.value.line_no == 2

    def test_unknown_keyword_rejected(self):
        with pytest.raises(MapSyntaxError):
            parse_map("pillar 1 2 3\n")

    def test_zero_area_polygon_rejected(self):
        with pytest.raises(MapValidationError) as err:
            parse_map("poly 0 0 10 0 20 0\nstart 50 50 0\n")
        assert "poly #1" in str(err.value)

    def test_zero_length_wall_rejected(self):
        with pytest.raises(MapValidationError):
            parse_map("wall 5 5 5 5\n")

    def test_start_inside_obstacle_rejected(self):
        with pytest.raises(MapValidationError):
            parse_map("circle 0 0 10\nstart 1 1 0\n")

    def test_human_duration_positive(self):
        with pytest.raises(MapValidationError):
            parse_map("human 0 5 5 0\n")

    def test_human_activity_window(self):
        h = Human(10.0, (0, 0), 5.0)
        assert not h.active(9.99)
        assert h.active(10.0)
        assert h.active(14.99)
        assert not h.active(15.0)


class TestBundledCorridor:
    def test_baseline_geometry(self):
        world = load_bundled_map("corridor_g2")
        inner = [w for w in world.walls
                 if all(-1 <= c <= 1501 for p in (w.p1, w.p2) for c in p)]
        outer = [w for w in world.walls if w not in inner]
        assert len(inner) == 5 and len(outer) == 4

        # inner rectangle spans 1500 x 1000 -> nominal perimeter 5000 cm,
        # of which the 60 cm endpoint gap is left open
        xs = [c for w in inner for c in (w.p1[0], w.p2[0])]
        ys = [c for w in inner for c in (w.p1[1], w.p2[1])]
        assert max(xs) - min(xs) == 1500
        assert max(ys) - min(ys) == 1000
        total = sum(math.dist(w.p1, w.p2) for w in inner)
        assert total == pytest.approx(5000 - 60)
        assert world.meta["corridor_width"] == "220"

        # the corridor between the rectangles is 220 cm wide on all sides
        ox = [c for w in outer for c in (w.p1[0], w.p2[0])]
        oy = [c for w in outer for c in (w.p1[1], w.p2[1])]
        assert min(xs) - min(ox) == 220 and max(ox) - max(xs) == 220
        assert min(ys) - min(oy) == 220 and max(oy) - max(ys) == 220

    def test_obstacle_map_adds_circle_on_path(self):
        world = load_bundled_map("corridor_obstacle")
        circles = [o for o in world.obstacles if isinstance(o, CircleObstacle)]
        assert len(circles) == 1
        assert circles[0].center[1] < 0  # on the south leg

    def test_intruder_map_has_active_human(self):
        world = load_bundled_map("corridor_intruder")
        assert len(world.humans) == 1
        assert world.humans[0].active(0.0)

    @pytest.mark.parametrize("name", [
        "corridor_g2", "corridor_obstacle", "corridor_intruder",
        "corridor_thin_edge", "corridor_narrow_right",
    ])
    def test_all_bundled_maps_load(self, name):
        world = load_bundled_map(name)
        assert world.start_pose != (0.0, 0.0, 0.0)
