"""Alarm state machine and the simulated building lockdown.

Raising an alarm always issues the lockdown record (the stand-in for
closing the building entrances) before the state becomes visible as
ACTIVE.  Repeated signals while ACTIVE are recorded but change nothing;
acknowledging is only legal from ACTIVE, and a patrol restart returns an
acknowledged alarm to QUIET.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path


class AlarmStatus(str, Enum):
    QUIET = "QUIET"
    ACTIVE = "ACTIVE"
    ACKNOWLEDGED = "ACKNOWLEDGED"


class AlarmTransitionError(RuntimeError):
    pass


@dataclass
class AlarmState:
    status: AlarmStatus = AlarmStatus.QUIET
    cause: str = ""
    raised_at: float = 0.0
    lockdown_issued: bool = False
    history: list[tuple[float, str]] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "status": self.status.value,
            "cause": self.cause,
            "raised_at": self.raised_at,
            "lockdown_issued": self.lockdown_issued,
            "signal_count": len(self.history),
        }


class AlarmMachine:
    def __init__(self, lockdown_path: Path | None = None):
        self.state = AlarmState()
        self.lockdown_path = lockdown_path

    def raise_alarm(self, cause: str, t: float) -> AlarmState:
        """Idempotent while ACTIVE; every signal lands in the history."""
        self.state.history.append((t, cause))
        if self.state.status is AlarmStatus.ACTIVE:
            return self.state
        self.state.status = AlarmStatus.ACTIVE
        self.state.cause = cause
        self.state.raised_at = t
        if not self.state.lockdown_issued:
            self._issue_lockdown(cause, t)
            self.state.lockdown_issued = True
        return self.state

    def acknowledge(self) -> AlarmState:
        if self.state.status is not AlarmStatus.ACTIVE:
            raise AlarmTransitionError(
                f"cannot acknowledge from {self.state.status.value}")
        self.state.status = AlarmStatus.ACKNOWLEDGED
        return self.state

    def reset_for_patrol(self) -> AlarmState:
        if self.state.status is AlarmStatus.ACTIVE:
            raise AlarmTransitionError("alarm must be acknowledged first")
        self.state = AlarmState()
        return self.state

    def _issue_lockdown(self, cause: str, t: float) -> None:
        if self.lockdown_path is None:
            return
        self.lockdown_path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.lockdown_path, "a", encoding="utf-8") as fh:
            fh.write(
                f"wall_time={time.time()!r} t_sim={t!r} cause={cause} "
                "action=close_building_entrances\n"
            )
