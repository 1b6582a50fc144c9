"""Control-surface export: avoidance angle over the full input grid."""
from __future__ import annotations

from ..fuzzy import FuzzyConfig, FuzzyEngine


def surface_rows(config: FuzzyConfig, step: float = 1.0):
    """Yield (u2, u3, alpha_deg) over the input universe at the given step.

    u2 is the front reading, u3 the right reading; both grids include the
    universe endpoints.
    """
    if not step > 0:
        raise ValueError("surface step must be positive")
    engine = FuzzyEngine(config)
    lo, hi = config.front.universe
    values = []
    x = lo
    while x < hi - 1e-9:
        values.append(x)
        x += step
    values.append(hi)
    for u2 in values:
        for u3 in values:
            yield u2, u3, engine.avoidance_angle(u2, u3)


def surface_csv(config: FuzzyConfig, step: float = 1.0) -> str:
    lines = ["u2,u3,alpha_deg"]
    for u2, u3, alpha in surface_rows(config, step):
        lines.append(f"{u2:g},{u3:g},{alpha!r}")
    return "\n".join(lines) + "\n"
