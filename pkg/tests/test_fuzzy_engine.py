"""Rule table, max-min inference, centroid defuzzification, full pipeline."""
import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from patrolbot.fuzzy import (
    AggregatedOutput,
    FuzzyContractError,
    FuzzyDefinitionError,
    FuzzyEngine,
    NoActivationError,
    Rule,
    RuleBase,
    RuleBaseError,
    avoidance_angle,
    default_fuzzy_config,
    default_rule_base,
    defuzz_centroid,
    fuzzify,
    infer,
    output_grid,
)

CFG = default_fuzzy_config()
ENGINE = FuzzyEngine(CFG)


class TestRuleBase:
    def test_default_is_total(self):
        rb = default_rule_base()
        rb.validate_total(("near", "medium", "far"), ("near", "medium", "far"),
                          ("small_left", "straight", "small_right",
                           "medium_right", "hard_right"))

    def test_default_table_contents(self):
        rb = default_rule_base()
        assert rb.consequent("near", "near") == "hard_right"
        assert rb.consequent("near", "medium") == "small_right"
        assert rb.consequent("near", "far") == "medium_right"
        assert rb.consequent("medium", "near") == "small_left"
        assert rb.consequent("far", "near") == "small_left"
        for f in ("medium", "far"):
            for r in ("medium", "far"):
                assert rb.consequent(f, r) == "straight"

    def test_duplicate_pair_rejected(self):
        with pytest.raises(RuleBaseError):
            RuleBase((Rule("a", "b", "x"), Rule("a", "b", "y")))

    def test_missing_pair_rejected(self):
        rb = RuleBase((Rule("near", "near", "straight"),))
        with pytest.raises(RuleBaseError):
            rb.validate_total(("near", "far"), ("near",), ("straight",))


class TestInfer:
    def test_two_rules_fire(self):
        agg = infer(CFG.rules, {"near": 1.0}, {"near": 0.3, "medium": 0.7},
                    CFG.turn, 0.5)
        # hard_right clipped at 0.3, small_right clipped at 0.7
        by_x = dict(zip(agg.grid, agg.degrees))
        assert by_x[45.0] == pytest.approx(0.3)   # hard_right core
        assert by_x[15.0] == pytest.approx(0.7)   # small_right peak
        assert by_x[-10.0] == 0.0                 # small_left silent

    def test_far_far_only_straight(self):
        agg = infer(CFG.rules, {"far": 1.0}, {"far": 1.0}, CFG.turn, 0.5)
        by_x = dict(zip(agg.grid, agg.degrees))
        assert by_x[0.0] == 1.0
        assert by_x[30.0] == 0.0
        assert by_x[-15.0] == 0.0

    def test_strengths_max_combined_per_consequent(self):
        # both (medium, near) and (far, near) feed small_left
        agg = infer(CFG.rules, {"medium": 0.5, "far": 0.5}, {"near": 1.0},
                    CFG.turn, 0.5)
        assert max(agg.degrees) == pytest.approx(0.5)
        by_x = dict(zip(agg.grid, agg.degrees))
        assert by_x[-10.0] == pytest.approx(0.5)
        assert by_x[20.0] == 0.0

    def test_unknown_term_rejected(self):
        with pytest.raises(FuzzyContractError):
            infer(CFG.rules, {"nearish": 1.0}, {"far": 1.0}, CFG.turn, 0.5)

    def test_grid_spans_output_universe(self):
        agg = infer(CFG.rules, {"far": 1.0}, {"far": 1.0}, CFG.turn, 0.5)
        assert agg.grid[0] == -20.0
        assert agg.grid[-1] == 60.0

    def test_matches_engine_fast_path_exactly(self):
        rng = random.Random(7)
        for _ in range(200):
            u2, u3 = rng.uniform(0, 120), rng.uniform(0, 120)
            agg = infer(CFG.rules, fuzzify(CFG.front, u2), fuzzify(CFG.right, u3),
                        CFG.turn, CFG.grid_step)
            assert defuzz_centroid(agg) == ENGINE.avoidance_angle(u2, u3)


class TestOutputGrid:
    def test_exact_endpoints(self):
        g = output_grid(-20.0, 60.0, 0.5)
        assert g[0] == -20.0 and g[-1] == 60.0
        assert len(g) == 161

    def test_uneven_step_still_covers(self):
        g = output_grid(0.0, 10.0, 3.0)
        assert g[0] == 0.0 and g[-1] == 10.0
        assert all(a < b for a, b in zip(g, g[1:]))

    def test_rejects_bad_step(self):
        with pytest.raises(FuzzyDefinitionError):
            output_grid(0, 1, 0)


class TestDefuzz:
    def test_singleton(self):
        agg = AggregatedOutput((0.0, 5.0, 10.0), (0.0, 1.0, 0.0))
        assert defuzz_centroid(agg) == 5.0

    def test_weighted_pair(self):
        agg = AggregatedOutput((0.0, 10.0), (0.2, 0.6))
        assert defuzz_centroid(agg) == pytest.approx(7.5)

    def test_symmetric_triangle_is_exactly_zero(self):
        grid = output_grid(-20.0, 60.0, 0.5)
        tri = CFG.turn.terms["straight"]
        agg = AggregatedOutput(grid, tuple(tri(x) for x in grid))
        assert defuzz_centroid(agg) == 0.0

    def test_all_zero_raises(self):
        agg = AggregatedOutput((0.0, 1.0), (0.0, 0.0))
        with pytest.raises(NoActivationError):
            defuzz_centroid(agg)

    def test_result_inside_grid(self):
        rng = random.Random(3)
        grid = output_grid(-20.0, 60.0, 0.5)
        for _ in range(50):
            degs = tuple(rng.random() for _ in grid)
            v = defuzz_centroid(AggregatedOutput(grid, degs))
            assert grid[0] <= v <= grid[-1]

    def test_grid_refinement_converges(self):
        rng = random.Random(11)
        for _ in range(40):
            strengths = {t: rng.random() for t in CFG.turn.terms}
            coarse = _centroid_at_step(strengths, CFG.grid_step)
            fine = _centroid_at_step(strengths, CFG.grid_step / 2)
            assert abs(coarse - fine) < 0.1

    def test_aggregated_output_validation(self):
        with pytest.raises(FuzzyDefinitionError):
            AggregatedOutput((0.0, 0.0), (0.1, 0.1))        # not increasing
        with pytest.raises(FuzzyDefinitionError):
            AggregatedOutput((0.0, 1.0), (0.5, 1.5))        # degree out of range


def _centroid_at_step(strengths, step):
    grid = output_grid(*CFG.turn.universe, step)
    degs = []
    for x in grid:
        degs.append(max(min(s, CFG.turn.terms[t](x)) for t, s in strengths.items()))
    return defuzz_centroid(AggregatedOutput(grid, tuple(degs)))


class TestAvoidanceAngle:
    def test_no_echo_pair_goes_straight(self):
        assert ENGINE.avoidance_angle(255, 255) == 0.0

    def test_blocked_both_sides_hard_right(self):
        angle = ENGINE.avoidance_angle(10, 10)
        assert 30.0 <= angle <= 60.0

    def test_front_blocked_right_half_open(self):
        # medium/far mix on the right: small_right @0.6 max medium_right @0.4
        angle = ENGINE.avoidance_angle(10, 55)
        agg = infer(CFG.rules, fuzzify(CFG.front, 10), fuzzify(CFG.right, 55),
                    CFG.turn, CFG.grid_step)
        assert angle == defuzz_centroid(agg)
        assert 0.0 < angle < 45.0

    def test_one_shot_helper_matches_engine(self):
        assert avoidance_angle(10, 55, CFG) == ENGINE.avoidance_angle(10, 55)

    @settings(max_examples=300)
    @given(st.floats(0, 500, allow_nan=False), st.floats(0, 500, allow_nan=False))
    def test_total_and_bounded(self, u2, u3):
        angle = ENGINE.avoidance_angle(u2, u3)
        assert math.isfinite(angle)
        assert -20.0 <= angle <= 60.0

    @settings(max_examples=200)
    @given(st.floats(70, 500, allow_nan=False), st.floats(100, 500, allow_nan=False))
    def test_monotone_fringe_exact_zero(self, u2, u3):
        # right fixed >= 100 and front past the far-core lower bound:
        # only the symmetric straight term fires
        assert ENGINE.avoidance_angle(u2, u3) == 0.0

    def test_empty_aggregate_means_straight(self):
        # a gappy custom variable can produce an all-zero aggregate
        from patrolbot.fuzzy import LinguisticVariable, triangle, FuzzyConfig, RuleBase, Rule

        holey = LinguisticVariable(
            "d", (0.0, 10.0), "cm",
            {"lo": triangle(0, 3, 6), "hi": triangle(4, 7, 10)},
        )
        turn = LinguisticVariable(
            "t", (-1.0, 1.0), "deg",
            {"z": triangle(-1, 0, 1)},
        )
        rules = RuleBase(tuple(
            Rule(f, r, "z") for f in ("lo", "hi") for r in ("lo", "hi")
        ))
        eng = FuzzyEngine(FuzzyConfig(front=holey, right=holey, turn=turn,
                                      rules=rules, grid_step=0.1))
        # degenerate strengths: both inputs clamp fine, but force zero by
        # feeding the uncovered seam of a term pair
        assert eng.avoidance_angle(200.0, 200.0) == pytest.approx(0.0)
