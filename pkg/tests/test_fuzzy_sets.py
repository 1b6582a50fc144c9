"""Membership shapes, linguistic variables, fuzzification."""
import pytest
from hypothesis import given, strategies as st

from patrolbot.fuzzy import (
    FuzzyDefinitionError,
    LinguisticVariable,
    MembershipFunction,
    default_fuzzy_config,
    fuzzify,
    trapezoid,
    triangle,
)


class TestMembership:
    def test_triangle_apex(self):
        assert triangle(-10, 0, 10)(0) == 1.0

    def test_trapezoid_core_at_universe_edge(self):
        assert trapezoid(45, 70, 100, 100)(100) == 1.0

    def test_trapezoid_falling_edge(self):
        # (45 - 35) / (45 - 25)
        assert trapezoid(4, 4, 25, 45)(35) == pytest.approx(0.5)

    def test_outside_support_is_zero(self):
        mf = triangle(0, 5, 10)
        assert mf(-1) == 0.0
        assert mf(11) == 0.0

    def test_degenerate_left_step(self):
        mf = trapezoid(4, 4, 25, 45)
        assert mf(4) == 1.0
        assert mf(3.999) == 0.0

    def test_singleton_triangle(self):
        mf = triangle(5, 5, 5)
        assert mf(5) == 1.0
        assert mf(5.0001) == 0.0

    def test_rejects_decreasing_breakpoints(self):
        with pytest.raises(FuzzyDefinitionError):
            triangle(10, 5, 20)
        with pytest.raises(FuzzyDefinitionError):
            trapezoid(0, 10, 5, 20)

    def test_rejects_wrong_arity(self):
        with pytest.raises(FuzzyDefinitionError):
            MembershipFunction("triangle", (0, 1, 2, 3))
        with pytest.raises(FuzzyDefinitionError):
            MembershipFunction("trapezoid", (0, 1, 2))

    def test_rejects_unknown_kind(self):
        with pytest.raises(FuzzyDefinitionError):
            MembershipFunction("gaussian", (0, 1, 2))

    @given(
        st.floats(-50, 150),
        st.floats(-50, 150),
    )
    def test_degree_bounded_and_lipschitz(self, x, y):
        # degenerate step edges are discontinuous, so the slope bound is
        # only meaningful for shapes whose ramps all have finite slope
        for mf in (triangle(25, 45, 70), trapezoid(10, 20, 30, 44)):
            dx, dy = mf(x), mf(y)
            assert 0.0 <= dx <= 1.0
            assert abs(dx - dy) <= mf.max_slope * abs(x - y) + 1e-12

    @given(st.floats(-50, 150))
    def test_step_shape_stays_in_unit_interval(self, x):
        assert 0.0 <= trapezoid(4, 4, 25, 45)(x) <= 1.0

    @given(st.floats(-30, 70))
    def test_piecewise_linear_midpoint(self, x):
        # linear on each side of the core: midpoint value is the average
        mf = triangle(-20, -10, 0)
        for lo, hi in [(-20, -10), (-10, 0)]:
            if lo <= x <= hi - 1e-6:
                mid = (x + hi) / 2
                assert mf(mid) == pytest.approx((mf(x) + mf(hi)) / 2, abs=1e-9)


class TestLinguisticVariable:
    def test_support_must_fit_universe(self):
        with pytest.raises(FuzzyDefinitionError):
            LinguisticVariable("v", (0, 10), "cm", {"t": triangle(-1, 5, 10)})

    def test_interior_coverage_required(self):
        with pytest.raises(FuzzyDefinitionError):
            LinguisticVariable(
                "v", (0, 10), "cm",
                {"a": triangle(0, 1, 2), "b": triangle(8, 9, 10)},
            )

    def test_clamp(self):
        var = default_fuzzy_config().front
        assert var.clamp(255) == 100.0
        assert var.clamp(1) == 4.0
        assert var.clamp(50) == 50.0

    def test_canonical_input_coverage_everywhere(self):
        var = default_fuzzy_config().front
        lo, hi = var.universe
        for i in range(0, 1001):
            x = lo + (hi - lo) * i / 1000
            assert max(mf(x) for mf in var.terms.values()) > 0.0


class TestFuzzify:
    def test_no_echo_clamps_to_far(self):
        cfg = default_fuzzy_config()
        assert fuzzify(cfg.front, 255) == {"near": 0.0, "medium": 0.0, "far": 1.0}

    def test_near_core(self):
        cfg = default_fuzzy_config()
        assert fuzzify(cfg.front, 10) == {"near": 1.0, "medium": 0.0, "far": 0.0}

    def test_overlap_region(self):
        cfg = default_fuzzy_config()
        degrees = fuzzify(cfg.right, 55)
        assert degrees["near"] == 0.0
        assert degrees["medium"] == pytest.approx(0.6)
        assert degrees["far"] == pytest.approx(0.4)

    @given(st.floats(-100, 600, allow_nan=False))
    def test_always_some_activation(self, x):
        cfg = default_fuzzy_config()
        assert max(fuzzify(cfg.front, x).values()) > 0.0
