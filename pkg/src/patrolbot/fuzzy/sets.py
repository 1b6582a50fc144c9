"""Piecewise-linear fuzzy sets and the linguistic variables built from them."""
from __future__ import annotations

from dataclasses import dataclass, field


class FuzzyDefinitionError(ValueError):
    """A fuzzy set or variable was built from inconsistent parameters."""


TRIANGLE = "triangle"
TRAPEZOID = "trapezoid"


@dataclass(frozen=True)
class MembershipFunction:
    """Triangular or trapezoidal membership function.

    Breakpoints must be non-decreasing: (a, b, c) for a triangle with its
    peak at b, (a, b, c, d) for a trapezoid with core [b, c].  Equal
    adjacent breakpoints collapse a ramp into a step, so shapes pinned to
    a universe edge (e.g. trapezoid(45, 70, 100, 100)) evaluate cleanly
    without dividing by zero.
    """

    kind: str
    breakpoints: tuple[float, ...]

    def __post_init__(self):
        expected = {TRIANGLE: 3, TRAPEZOID: 4}.get(self.kind)
        if expected is None:
            raise FuzzyDefinitionError(f"unknown membership kind {self.kind!r}")
        pts = tuple(float(p) for p in self.breakpoints)
        if len(pts) != expected:
            raise FuzzyDefinitionError(
                f"{self.kind} needs {expected} breakpoints, got {len(pts)}"
            )
        if any(not lo <= hi for lo, hi in zip(pts, pts[1:])):
            raise FuzzyDefinitionError(f"breakpoints not non-decreasing: {pts}")
        object.__setattr__(self, "breakpoints", pts)

    @property
    def support(self) -> tuple[float, float]:
        return self.breakpoints[0], self.breakpoints[-1]

    @property
    def core(self) -> tuple[float, float]:
        if self.kind == TRIANGLE:
            return self.breakpoints[1], self.breakpoints[1]
        return self.breakpoints[1], self.breakpoints[2]

    @property
    def max_slope(self) -> float:
        """Steepest ramp slope; infinite ramps (steps) are excluded."""
        slopes = []
        a, last = self.support
        lo, hi = self.core
        if lo > a:
            slopes.append(1.0 / (lo - a))
        if last > hi:
            slopes.append(1.0 / (last - hi))
        return max(slopes, default=0.0)

    def __call__(self, x: float) -> float:
        a, last = self.support
        lo, hi = self.core
        if x < a or x > last:
            return 0.0
        if lo <= x <= hi:
            return 1.0
        if x < lo:
            return (x - a) / (lo - a)
        return (last - x) / (last - hi)


def triangle(a: float, b: float, c: float) -> MembershipFunction:
    return MembershipFunction(TRIANGLE, (a, b, c))


def trapezoid(a: float, b: float, c: float, d: float) -> MembershipFunction:
    return MembershipFunction(TRAPEZOID, (a, b, c, d))


@dataclass(frozen=True)
class LinguisticVariable:
    """Named family of overlapping terms covering a closed real interval.

    Construction checks that every term's support lies inside the
    universe and that the terms jointly cover it: every sampled interior
    point must carry positive membership in at least one term.  The exact
    endpoints are exempt so that a triangle foot may sit on the boundary.
    """

    name: str
    universe: tuple[float, float]
    units: str
    terms: dict[str, MembershipFunction] = field(compare=False)

    _COVERAGE_SAMPLES = 257

    def __post_init__(self):
        lo, hi = float(self.universe[0]), float(self.universe[1])
        if not lo < hi:
            raise FuzzyDefinitionError(f"{self.name}: empty universe [{lo}, {hi}]")
        object.__setattr__(self, "universe", (lo, hi))
        if not self.terms:
            raise FuzzyDefinitionError(f"{self.name}: no terms defined")
        for term, mf in self.terms.items():
            s0, s1 = mf.support
            if s0 < lo or s1 > hi:
                raise FuzzyDefinitionError(
                    f"{self.name}.{term}: support [{s0}, {s1}] outside universe"
                )
        n = self._COVERAGE_SAMPLES
        for i in range(1, n):
            x = lo + (hi - lo) * i / n
            if all(mf(x) == 0.0 for mf in self.terms.values()):
                raise FuzzyDefinitionError(
                    f"{self.name}: no term covers x={x:.4g}"
                )

    def clamp(self, x: float) -> float:
        lo, hi = self.universe
        return lo if x < lo else hi if x > hi else x


def fuzzify(var: LinguisticVariable, x: float) -> dict[str, float]:
    """Membership degree of x in every term, after clamping to the universe.

    Out-of-range readings are legal inputs: a sonar "no echo" (255) lands
    on the universe maximum, anything below the minimum lands on it.
    """
    cx = var.clamp(float(x))
    return {term: mf(cx) for term, mf in var.terms.items()}
