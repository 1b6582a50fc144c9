"""Append-only session persistence.

One binary record file per session: each record is an 8-byte big-endian
float64 receive timestamp followed by one complete wire frame, reusing the
protocol encoding byte for byte.  Replaying a file therefore reconstructs
exactly what the session carried.  A text sidecar (<session>.events) keeps
bookkeeping events such as sequence gaps.
"""
from __future__ import annotations

import os
import struct
from pathlib import Path
from typing import Iterator

_STAMP = struct.Struct(">d")


class StorageError(OSError):
    pass


class SessionLog:
    """Writer for one session's records; flushed (and fsynced) per append."""

    def __init__(self, root: Path, session_id: str, fsync: bool = True):
        self.session_id = session_id
        self.path = root / f"{session_id}.records"
        self.events_path = root / f"{session_id}.events"
        self._fsync = fsync
        self._fh = open(self.path, "ab")
        self._events_fh = open(self.events_path, "a", encoding="utf-8")
        self.record_count = 0
        self.closed = False
        self.status = "open"

    def append(self, received_at: float, frame: bytes) -> None:
        if self.closed:
            raise StorageError("session log already closed")
        self._fh.write(_STAMP.pack(received_at))
        self._fh.write(frame)
        self._fh.flush()
        if self._fsync:
            os.fsync(self._fh.fileno())
        self.record_count += 1

    def add_event(self, received_at: float, kind: str, detail: str) -> None:
        if self.closed:
            raise StorageError("session log already closed")
        self._events_fh.write(f"{received_at!r} {kind} {detail}\n")
        self._events_fh.flush()
        if self._fsync:
            os.fsync(self._events_fh.fileno())

    def close(self, status: str = "closed") -> None:
        if self.closed:
            return
        self.status = status
        self.add_event(0.0, "session_closed", status)
        self.closed = True
        self._fh.close()
        self._events_fh.close()


def iter_records(path: Path) -> Iterator[tuple[float, bytes]]:
    """Replay a record file as (received_at, frame_bytes) pairs.

    Frame boundaries come from each frame's own length header, so the bytes
    handed back are exactly the bytes that were appended.
    """
    data = Path(path).read_bytes()
    offset = 0
    while offset + 12 <= len(data):
        (received_at,) = _STAMP.unpack_from(data, offset)
        (payload_len,) = struct.unpack_from(">I", data, offset + 8)
        end = offset + 8 + 4 + payload_len
        if end > len(data):
            break  # torn tail record from a crash mid-write
        yield received_at, data[offset + 8 : end]
        offset = end


def read_events(path: Path) -> list[tuple[float, str, str]]:
    out = []
    if not Path(path).exists():
        return out
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        parts = line.split(" ", 2)
        if len(parts) < 2:
            continue
        stamp, kind = parts[0], parts[1]
        detail = parts[2] if len(parts) == 3 else ""
        out.append((float(stamp), kind, detail))
    return out
