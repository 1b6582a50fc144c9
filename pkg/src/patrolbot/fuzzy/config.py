"""Build a FuzzyConfig from a declarative key-value section.

The section uses the same grammar as the scenario config (INI keys).
Recognised keys:

    grid_step       = 0.5
    input_range     = 4 100
    output_range    = -20 60
    input_term.NAME = tri|trap breakpoints...
    output_term.NAME= tri|trap breakpoints...
    rule.FRONT.RIGHT= OUTPUT_TERM

Any key left out falls back to the stock configuration value, so a file
may override just the rule table, or just one membership shape.
"""
from __future__ import annotations

from typing import Mapping

from .engine import FuzzyConfig, default_fuzzy_config
from .rules import Rule, RuleBase
from .sets import FuzzyDefinitionError, LinguisticVariable, MembershipFunction


_SHAPES = {"tri": "triangle", "triangle": "triangle",
           "trap": "trapezoid", "trapezoid": "trapezoid"}


def _parse_shape(key: str, text: str) -> MembershipFunction:
    parts = text.split()
    if not parts or parts[0] not in _SHAPES:
        raise FuzzyDefinitionError(f"{key}: expected 'tri a b c' or 'trap a b c d'")
    try:
        points = tuple(float(p) for p in parts[1:])
    except ValueError as exc:
        raise FuzzyDefinitionError(f"{key}: non-numeric breakpoint in {text!r}") from exc
    return MembershipFunction(_SHAPES[parts[0]], points)


def _parse_range(key: str, text: str) -> tuple[float, float]:
    parts = text.split()
    if len(parts) != 2:
        raise FuzzyDefinitionError(f"{key}: expected two numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def fuzzy_config_from_mapping(section: Mapping[str, str]) -> FuzzyConfig:
    base = default_fuzzy_config()
    grid_step = float(section.get("grid_step", base.grid_step))
    input_range = base.front.universe
    output_range = base.turn.universe
    input_terms = dict(base.front.terms)
    output_terms = dict(base.turn.terms)
    rule_table = {(r.front, r.right): r.turn for r in base.rules.rules}

    custom_inputs: dict[str, MembershipFunction] = {}
    custom_outputs: dict[str, MembershipFunction] = {}
    custom_rules: dict[tuple[str, str], str] = {}
    for key, value in section.items():
        if key == "grid_step":
            continue
        if key == "input_range":
            input_range = _parse_range(key, value)
        elif key == "output_range":
            output_range = _parse_range(key, value)
        elif key.startswith("input_term."):
            custom_inputs[key.split(".", 1)[1]] = _parse_shape(key, value)
        elif key.startswith("output_term."):
            custom_outputs[key.split(".", 1)[1]] = _parse_shape(key, value)
        elif key.startswith("rule."):
            parts = key.split(".")
            if len(parts) != 3:
                raise FuzzyDefinitionError(f"bad rule key {key!r}")
            custom_rules[(parts[1], parts[2])] = value.strip()
        else:
            raise FuzzyDefinitionError(f"unknown fuzzy config key {key!r}")

    if custom_inputs:
        input_terms = custom_inputs
    if custom_outputs:
        output_terms = custom_outputs
    if custom_rules:
        rule_table = custom_rules

    front = LinguisticVariable("front_distance", input_range, "cm", dict(input_terms))
    right = LinguisticVariable("right_distance", input_range, "cm", dict(input_terms))
    turn = LinguisticVariable("turn_angle", output_range, "deg", dict(output_terms))
    rules = RuleBase(tuple(Rule(f, r, t) for (f, r), t in rule_table.items()))
    return FuzzyConfig(front=front, right=right, turn=turn,
                       rules=rules, grid_step=grid_step)
