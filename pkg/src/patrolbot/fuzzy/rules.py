"""Rule table mapping (front distance, right distance) terms to a turn term."""
from __future__ import annotations

from dataclasses import dataclass


class RuleBaseError(ValueError):
    """The rule list is not a total, duplicate-free antecedent table."""


@dataclass(frozen=True)
class Rule:
    front: str
    right: str
    turn: str


@dataclass(frozen=True)
class RuleBase:
    """Complete table of avoidance rules, one per antecedent pair."""

    rules: tuple[Rule, ...]

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        pairs = [(r.front, r.right) for r in self.rules]
        if len(set(pairs)) != len(pairs):
            dup = next(p for p in pairs if pairs.count(p) > 1)
            raise RuleBaseError(f"duplicate rule for antecedent {dup}")

    def validate_total(self, front_terms, right_terms, turn_terms) -> None:
        """Check the table covers every antecedent pair exactly once."""
        want = {(f, r) for f in front_terms for r in right_terms}
        have = {(r.front, r.right) for r in self.rules}
        if have != want:
            missing = sorted(want - have)
            extra = sorted(have - want)
            raise RuleBaseError(
                f"rule table not total: missing={missing} unknown={extra}"
            )
        bad = sorted({r.turn for r in self.rules} - set(turn_terms))
        if bad:
            raise RuleBaseError(f"rules name unknown output terms: {bad}")

    def consequent(self, front: str, right: str) -> str:
        for r in self.rules:
            if r.front == front and r.right == right:
                return r.turn
        raise KeyError((front, right))


def default_rule_base() -> RuleBase:
    """The stock 9-rule avoidance table.

    A blocked front steers hard toward the open right-hand side; a close
    right-hand reading with a clear front nudges slightly left; everything
    comfortably far keeps the heading unchanged.
    """
    table = {
        ("near", "near"): "hard_right",
        ("near", "medium"): "small_right",
        ("near", "far"): "medium_right",
        ("medium", "near"): "small_left",
        ("medium", "medium"): "straight",
        ("medium", "far"): "straight",
        ("far", "near"): "small_left",
        ("far", "medium"): "straight",
        ("far", "far"): "straight",
    }
    return RuleBase(tuple(Rule(f, r, t) for (f, r), t in table.items()))
