"""Control-center service: session persistence, alarm chain, operator API."""
from .alarm import AlarmMachine, AlarmState, AlarmStatus, AlarmTransitionError
from .service import (
    CenterHandles,
    CommandRejected,
    ControlCenter,
    Session,
    build_http_app,
    start_center,
)
from .storage import SessionLog, StorageError, iter_records, read_events

__all__ = [
    "AlarmMachine",
    "AlarmState",
    "AlarmStatus",
    "AlarmTransitionError",
    "CenterHandles",
    "CommandRejected",
    "ControlCenter",
    "Session",
    "SessionLog",
    "StorageError",
    "build_http_app",
    "iter_records",
    "read_events",
    "start_center",
]
