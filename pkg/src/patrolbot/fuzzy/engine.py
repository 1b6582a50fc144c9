"""Max-min inference and centroid defuzzification for the avoidance controller.

Pipeline per reading: fuzzify both sonar distances, fire every rule at the
minimum of its antecedent degrees, clip each consequent set at its rule
strength, take the pointwise maximum across consequents on a sampled output
grid, then return the centroid of the sampled aggregate.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from operator import mul
from typing import Mapping

from .rules import RuleBase, default_rule_base
from .sets import (
    FuzzyDefinitionError,
    LinguisticVariable,
    MembershipFunction,
    fuzzify,
    trapezoid,
    triangle,
)


class FuzzyContractError(ValueError):
    """Degree maps or rules referenced a term the variables do not define."""


class NoActivationError(RuntimeError):
    """Every aggregated degree is zero, so no centroid exists.

    Cannot happen with fully covering input variables and a total rule
    table; callers running custom term sets treat it as "keep straight".
    """


@dataclass(frozen=True)
class AggregatedOutput:
    """Clipped-and-maxed output set sampled on a strictly increasing grid."""

    grid: tuple[float, ...]
    degrees: tuple[float, ...]

    def __post_init__(self):
        grid = tuple(float(x) for x in self.grid)
        degrees = tuple(float(d) for d in self.degrees)
        if len(grid) != len(degrees) or len(grid) < 2:
            raise FuzzyDefinitionError("grid and degrees must align, length >= 2")
        if any(not a < b for a, b in zip(grid, grid[1:])):
            raise FuzzyDefinitionError("grid must be strictly increasing")
        if any(not 0.0 <= d <= 1.0 for d in degrees):
            raise FuzzyDefinitionError("degrees must lie in [0, 1]")
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "degrees", degrees)


#: Default defuzzification grid step, degrees.  The discrete centroid
#: carries a first-order error proportional to the step wherever a clipped
#: set ends in a step at the universe edge, so the step must stay well
#: under a tenth of a degree.  1/16 is also exactly representable, which
#: keeps grid points symmetric about zero and lets a symmetric aggregate
#: defuzzify to exactly 0.0.
DEFAULT_GRID_STEP = 0.0625


@dataclass(frozen=True)
class FuzzyConfig:
    """Everything the avoidance controller needs: variables, rules, grid."""

    front: LinguisticVariable
    right: LinguisticVariable
    turn: LinguisticVariable
    rules: RuleBase = field(default_factory=default_rule_base)
    grid_step: float = DEFAULT_GRID_STEP

    def __post_init__(self):
        if not self.grid_step > 0:
            raise FuzzyDefinitionError("grid_step must be positive")
        self.rules.validate_total(
            self.front.terms, self.right.terms, self.turn.terms
        )


def output_grid(lo: float, hi: float, step: float) -> tuple[float, ...]:
    """Sample points covering [lo, hi] with both endpoints included exactly."""
    if not step > 0:
        raise FuzzyDefinitionError("grid step must be positive")
    n = int(math.floor((hi - lo) / step + 1e-9))
    xs = [lo + i * step for i in range(n + 1)]
    if xs[-1] < hi - 1e-9:
        xs.append(hi)
    else:
        xs[-1] = hi
    return tuple(xs)


def _rule_strengths(
    rule_base: RuleBase,
    front_degrees: Mapping[str, float],
    right_degrees: Mapping[str, float],
    front_terms,
    right_terms,
) -> dict[str, float]:
    unknown = (set(front_degrees) - set(front_terms)) | (
        set(right_degrees) - set(right_terms)
    )
    if unknown:
        raise FuzzyContractError(f"unknown term names in degree maps: {sorted(unknown)}")
    strengths: dict[str, float] = {}
    for rule in rule_base.rules:
        s = min(front_degrees.get(rule.front, 0.0), right_degrees.get(rule.right, 0.0))
        if s > strengths.get(rule.turn, 0.0):
            strengths[rule.turn] = s
    return strengths


def infer(
    rule_base: RuleBase,
    front_degrees: Mapping[str, float],
    right_degrees: Mapping[str, float],
    turn: LinguisticVariable,
    grid_step: float,
) -> AggregatedOutput:
    """Max-min composition of the rule table onto the output grid.

    Missing terms in a degree map count as zero; unknown extra names are a
    contract violation.
    """
    strengths = _rule_strengths(
        rule_base, front_degrees, right_degrees,
        antecedent_terms(rule_base, "front"), antecedent_terms(rule_base, "right"),
    )
    grid = output_grid(*turn.universe, grid_step)
    degrees = []
    for x in grid:
        m = 0.0
        for term, s in strengths.items():
            v = min(s, turn.terms[term](x))
            if v > m:
                m = v
        degrees.append(m)
    return AggregatedOutput(grid, tuple(degrees))


def antecedent_terms(rule_base: RuleBase, side: str) -> tuple[str, ...]:
    """Antecedent term names the rule table uses on one input side."""
    seen: dict[str, None] = {}
    for r in rule_base.rules:
        seen.setdefault(r.front if side == "front" else r.right)
    return tuple(seen)


def defuzz_centroid(agg: AggregatedOutput) -> float:
    """Discrete centroid sum(x*mu) / sum(mu) over the sampled grid.

    math.fsum keeps symmetric aggregates exactly centered: a set mirrored
    about zero defuzzifies to 0.0, not to rounding noise.
    """
    den = math.fsum(agg.degrees)
    if den <= 0.0:
        raise NoActivationError("aggregated output is identically zero")
    num = math.fsum(map(mul, agg.grid, agg.degrees))
    return num / den


class FuzzyEngine:
    """Reusable pipeline with the output term samples precomputed.

    Building the engine once and calling avoidance_angle per reading keeps
    the per-tick cost to the rule sweep plus one pass over the grid.
    """

    def __init__(self, config: FuzzyConfig | None = None):
        self.config = config or default_fuzzy_config()
        cfg = self.config
        self.grid = output_grid(*cfg.turn.universe, cfg.grid_step)
        # per-term samples restricted to the term's support, so that a
        # reading firing one narrow consequent touches only its slice
        self._slices: dict[str, tuple[int, tuple[float, ...]]] = {}
        for term, mf in cfg.turn.terms.items():
            values = [mf(x) for x in self.grid]
            alive = [i for i, v in enumerate(values) if v > 0.0]
            i0, i1 = (alive[0], alive[-1] + 1) if alive else (0, 0)
            self._slices[term] = (i0, tuple(values[i0:i1]))

    def avoidance_angle(self, front_cm: float, right_cm: float) -> float:
        """Crisp turn angle for one pair of raw sonar readings.

        Readings are clamped into the input universe first, so "no echo"
        (255) behaves as maximum distance.  A custom term set that leaves
        the aggregate empty yields 0.0 (keep straight).
        """
        cfg = self.config
        dfront = fuzzify(cfg.front, front_cm)
        dright = fuzzify(cfg.right, right_cm)
        strengths: dict[str, float] = {}
        for rule in cfg.rules.rules:
            s = min(dfront[rule.front], dright[rule.right])
            if s > strengths.get(rule.turn, 0.0):
                strengths[rule.turn] = s
        agg = [0.0] * len(self.grid)
        lo = len(self.grid)
        hi = 0
        for term, s in strengths.items():
            if s <= 0.0:
                continue
            i0, samples = self._slices[term]
            for k, m in enumerate(samples):
                v = s if m > s else m
                i = i0 + k
                if v > agg[i]:
                    agg[i] = v
            lo = min(lo, i0)
            hi = max(hi, i0 + len(samples))
        if hi <= lo:
            return 0.0
        den = math.fsum(agg[lo:hi])
        if den <= 0.0:
            return 0.0
        return math.fsum(map(mul, self.grid[lo:hi], agg[lo:hi])) / den

    def aggregate(
        self,
        front_degrees: Mapping[str, float],
        right_degrees: Mapping[str, float],
    ) -> AggregatedOutput:
        """Aggregated output set for already-fuzzified inputs."""
        return infer(
            self.config.rules, front_degrees, right_degrees,
            self.config.turn, self.config.grid_step,
        )


def avoidance_angle(
    front_cm: float, right_cm: float, config: FuzzyConfig | None = None
) -> float:
    """One-shot pipeline; hot paths should hold a FuzzyEngine instead."""
    return FuzzyEngine(config).avoidance_angle(front_cm, right_cm)


def default_fuzzy_config(grid_step: float = DEFAULT_GRID_STEP) -> FuzzyConfig:
    """Stock configuration: distances on [4, 100] cm, turns on [-20, 60] deg.

    Positive angles turn the robot rightward, away from the wall it
    follows on its left; the asymmetric output range mirrors the
    front/right sensor band the controller reacts to.
    """
    def distance_terms() -> dict[str, MembershipFunction]:
        return {
            "near": trapezoid(4, 4, 25, 45),
            "medium": triangle(25, 45, 70),
            "far": trapezoid(45, 70, 100, 100),
        }

    front = LinguisticVariable("front_distance", (4.0, 100.0), "cm", distance_terms())
    right = LinguisticVariable("right_distance", (4.0, 100.0), "cm", distance_terms())
    turn = LinguisticVariable(
        "turn_angle",
        (-20.0, 60.0),
        "deg",
        {
            "small_left": triangle(-20, -10, 0),
            "straight": triangle(-10, 0, 10),
            "small_right": triangle(0, 15, 30),
            "medium_right": triangle(15, 30, 45),
            "hard_right": trapezoid(30, 45, 60, 60),
        },
    )
    return FuzzyConfig(front=front, right=right, turn=turn,
                       rules=default_rule_base(), grid_step=grid_step)
