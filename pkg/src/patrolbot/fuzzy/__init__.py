"""Stateless fuzzy-inference core for the obstacle-avoidance controller.

Everything here is a pure function of its inputs: safe to share across
threads, reproducible bit-for-bit.
"""
from .config import fuzzy_config_from_mapping
from .engine import (
    AggregatedOutput,
    FuzzyConfig,
    FuzzyContractError,
    FuzzyEngine,
    NoActivationError,
    avoidance_angle,
    default_fuzzy_config,
    defuzz_centroid,
    infer,
    output_grid,
)
from .rules import Rule, RuleBase, RuleBaseError, default_rule_base
from .sets import (
    FuzzyDefinitionError,
    LinguisticVariable,
    MembershipFunction,
    fuzzify,
    trapezoid,
    triangle,
)

__all__ = [
    "AggregatedOutput",
    "FuzzyConfig",
    "FuzzyContractError",
    "FuzzyDefinitionError",
    "FuzzyEngine",
    "LinguisticVariable",
    "MembershipFunction",
    "NoActivationError",
    "Rule",
    "RuleBase",
    "RuleBaseError",
    "avoidance_angle",
    "default_fuzzy_config",
    "default_rule_base",
    "defuzz_centroid",
    "fuzzify",
    "fuzzy_config_from_mapping",
    "infer",
    "output_grid",
    "trapezoid",
    "triangle",
]
