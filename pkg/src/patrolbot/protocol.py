"""Wire protocol between the robot agent and the control center.

Frame layout (see docs/protocol.md for the full contract):

    4 bytes  big-endian payload length (version byte through end of body)
    1 byte   protocol version, currently 1
    1 byte   message-type tag
    body     UTF-8 text, one `key=value` per line

Floats are serialized with repr() and parse back exactly; byte payloads are
base64.  encode/decode are pure functions; decode classifies every failure
mode into a distinct DecodeError subclass and never raises anything else,
no matter the input bytes.  A session survives bad frames by resyncing at
the next length boundary (FrameReader).
"""
from __future__ import annotations

import base64
import binascii
import re
import struct
from dataclasses import dataclass, fields

PROTOCOL_VERSION = 1
MAX_FRAME_PAYLOAD = (1 << 20) - 4  # whole frame stays within 1 MiB
DEFAULT_PROTOCOL_PORT = 7710
DEFAULT_HTTP_PORT = 7780

TELEMETRY_HZ = 10.0
VIDEO_HZ = 15.0
VIDEO_WIDTH = 353
VIDEO_HEIGHT = 288

TAG_TELEMETRY = 1
TAG_VIDEO = 2
TAG_ALARM = 3
TAG_COMMAND = 4

ALARM_CAUSES = ("HMS_LEFT", "HMS_RIGHT")
COMMAND_KINDS = (
    "START_PATROL", "STOP", "MANUAL_TURN", "MANUAL_FORWARD",
    "CAMERA_PAN", "ACK_ALARM",
)
#: command kinds that carry a numeric argument (degrees or cm)
VALUED_COMMANDS = ("MANUAL_TURN", "MANUAL_FORWARD", "CAMERA_PAN")

_NAME_RE = re.compile(r"^[A-Za-z0-9_.:-]{1,64}$")


class ProtocolError(Exception):
    pass


class EncodeError(ProtocolError):
    pass


class DecodeError(ProtocolError):
    """Base of every classified decode failure."""


class TruncatedFrame(DecodeError):
    pass


class UnknownVersion(DecodeError):
    pass


class UnknownTag(DecodeError):
    pass


class BodyError(DecodeError):
    pass


@dataclass(frozen=True)
class TelemetryFrame:
    seq: int
    t_sim: float
    x: float
    y: float
    heading: float
    sonar_left: float
    sonar_front: float
    sonar_right: float
    hms_left: bool
    hms_right: bool
    battery_remaining: float
    mode: str
    odometer: float


@dataclass(frozen=True)
class VideoFrameStub:
    seq: int
    t_sim: float
    width: int
    height: int
    payload: bytes


@dataclass(frozen=True)
class AlarmSignal:
    t_sim: float
    cause: str
    x: float
    y: float
    heading: float


@dataclass(frozen=True)
class OperatorCommand:
    kind: str
    value: float | None
    issued_at: float
    operator_id: str


_TYPES = {
    TAG_TELEMETRY: TelemetryFrame,
    TAG_VIDEO: VideoFrameStub,
    TAG_ALARM: AlarmSignal,
    TAG_COMMAND: OperatorCommand,
}
_TAGS = {cls: tag for tag, cls in _TYPES.items()}


def validate_message(msg) -> None:
    """Raise EncodeError when a message violates its type invariants."""
    if isinstance(msg, TelemetryFrame):
        if msg.seq < 0:
            raise EncodeError("telemetry seq must be >= 0")
        for name in ("sonar_left", "sonar_front", "sonar_right"):
            v = getattr(msg, name)
            if not 4.0 <= v <= 255.0:
                raise EncodeError(f"{name}={v} outside the sonar clamp [4, 255]")
        if not _NAME_RE.match(msg.mode):
            raise EncodeError(f"bad mode string {msg.mode!r}")
    elif isinstance(msg, VideoFrameStub):
        if msg.seq < 0:
            raise EncodeError("video seq must be >= 0")
        if (msg.width, msg.height) != (VIDEO_WIDTH, VIDEO_HEIGHT):
            raise EncodeError(
                f"video frames are fixed at {VIDEO_WIDTH}x{VIDEO_HEIGHT}")
    elif isinstance(msg, AlarmSignal):
        if msg.cause not in ALARM_CAUSES:
            raise EncodeError(f"unknown alarm cause {msg.cause!r}")
    elif isinstance(msg, OperatorCommand):
        if msg.kind not in COMMAND_KINDS:
            raise EncodeError(f"unknown command kind {msg.kind!r}")
        if msg.kind in VALUED_COMMANDS and msg.value is None:
            raise EncodeError(f"{msg.kind} requires a numeric value")
        if not _NAME_RE.match(msg.operator_id):
            raise EncodeError(f"bad operator id {msg.operator_id!r}")
    else:
        raise EncodeError(f"not a protocol message: {type(msg).__name__}")


def _serialize_value(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, bytes):
        return base64.b64encode(value).decode("ascii")
    if value is None:
        return "-"
    return str(value)


def encode(msg) -> bytes:
    """Serialize one message into a complete wire frame."""
    validate_message(msg)
    tag = _TAGS[type(msg)]
    lines = [
        f"{f.name}={_serialize_value(getattr(msg, f.name))}"
        for f in fields(msg)
    ]
    body = "\n".join(lines).encode("utf-8")
    payload_len = 2 + len(body)
    if payload_len > MAX_FRAME_PAYLOAD:
        raise EncodeError(f"payload of {payload_len} bytes exceeds the 1 MiB frame cap")
    return struct.pack(">IBB", payload_len, PROTOCOL_VERSION, tag) + body


def _parse_float(raw: str, key: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise BodyError(f"{key}: not a number: {raw!r}") from None


def _parse_body(tag: int, body: bytes):
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise BodyError(f"body is not UTF-8: {exc}") from None
    cls = _TYPES[tag]
    kv: dict[str, str] = {}
    for line in text.splitlines():
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise BodyError(f"malformed body line {line!r}")
        if key in kv:
            raise BodyError(f"duplicate key {key!r}")
        kv[key] = value
    field_list = fields(cls)
    missing = [f.name for f in field_list if f.name not in kv]
    if missing:
        raise BodyError(f"{cls.__name__} body missing keys {missing}")
    extra = set(kv) - {f.name for f in field_list}
    if extra:
        raise BodyError(f"{cls.__name__} body has unknown keys {sorted(extra)}")

    values = {}
    for f in field_list:
        raw = kv[f.name]
        if f.type in ("int",):
            try:
                values[f.name] = int(raw)
            except ValueError:
                raise BodyError(f"{f.name}: not an integer: {raw!r}") from None
        elif f.type in ("float",):
            values[f.name] = _parse_float(raw, f.name)
        elif f.type == "float | None":
            values[f.name] = None if raw == "-" else _parse_float(raw, f.name)
        elif f.type in ("bool",):
            if raw not in ("0", "1"):
                raise BodyError(f"{f.name}: expected 0 or 1, got {raw!r}")
            values[f.name] = raw == "1"
        elif f.type in ("bytes",):
            try:
                values[f.name] = base64.b64decode(raw.encode("ascii"),
                                                  validate=True)
            except (binascii.Error, UnicodeEncodeError):
                raise BodyError(f"{f.name}: invalid base64") from None
        else:
            values[f.name] = raw
    msg = cls(**values)
    try:
        validate_message(msg)
    except EncodeError as exc:
        raise BodyError(str(exc)) from None
    return msg


def decode(data: bytes):
    """Parse exactly one frame.  Total over arbitrary bytes: returns a
    message or raises a DecodeError subclass, never anything else."""
    if len(data) < 4:
        raise TruncatedFrame(f"{len(data)} bytes is too short for a length header")
    (payload_len,) = struct.unpack(">I", data[:4])
    if payload_len < 2:
        raise BodyError(f"declared payload of {payload_len} bytes cannot hold a header")
    if payload_len > MAX_FRAME_PAYLOAD:
        raise BodyError(f"declared payload of {payload_len} bytes exceeds the frame cap")
    if len(data) < 4 + payload_len:
        raise TruncatedFrame(
            f"frame declares {payload_len} payload bytes, only {len(data) - 4} present")
    if len(data) > 4 + payload_len:
        raise BodyError(f"{len(data) - 4 - payload_len} trailing bytes after the frame")
    version = data[4]
    if version != PROTOCOL_VERSION:
        raise UnknownVersion(f"version {version}, expected {PROTOCOL_VERSION}")
    tag = data[5]
    if tag not in _TYPES:
        raise UnknownTag(f"message tag {tag}")
    return _parse_body(tag, data[6 : 4 + payload_len])


class FrameReader:
    """Incremental frame splitter with per-frame error recovery.

    feed() returns a list of decoded messages and DecodeError instances in
    arrival order.  A frame that fails to decode consumes exactly its
    declared length, so the stream resynchronizes at the next boundary; a
    length field beyond the cap cannot be trusted, so only the four length
    bytes are skipped before scanning resumes.
    """

    def __init__(self):
        self._buf = bytearray()

    @property
    def pending(self) -> int:
        return len(self._buf)

    def feed_frames(self, data: bytes) -> list:
        """Split the stream into raw frames (bytes) and boundary errors."""
        self._buf.extend(data)
        out = []
        while len(self._buf) >= 4:
            (payload_len,) = struct.unpack(">I", bytes(self._buf[:4]))
            if payload_len < 2 or payload_len > MAX_FRAME_PAYLOAD:
                out.append(BodyError(f"unusable payload length {payload_len}"))
                del self._buf[:4]
                continue
            if len(self._buf) < 4 + payload_len:
                break
            out.append(bytes(self._buf[: 4 + payload_len]))
            del self._buf[: 4 + payload_len]
        return out

    def feed(self, data: bytes) -> list:
        out = []
        for item in self.feed_frames(data):
            if isinstance(item, bytes):
                try:
                    out.append(decode(item))
                except DecodeError as exc:
                    out.append(exc)
            else:
                out.append(item)
        return out


_TYPE_NAMES = {
    TelemetryFrame: "telemetry",
    VideoFrameStub: "video",
    AlarmSignal: "alarm",
    OperatorCommand: "command",
}


def message_type(msg) -> str:
    return _TYPE_NAMES[type(msg)]


def to_dict(msg) -> dict:
    """JSON-friendly view of a message, tagged with its type name."""
    out = {"type": message_type(msg)}
    for f in fields(msg):
        value = getattr(msg, f.name)
        if isinstance(value, bytes):
            value = base64.b64encode(value).decode("ascii")
        out[f.name] = value
    return out


def cadence_marks(t0: float, t1: float, hz: float) -> list[float]:
    """Emission timestamps crossed when sim time advances from t0 to t1."""
    if t1 <= t0 or hz <= 0:
        return []
    period = 1.0 / hz
    first = int(t0 / period + 1e-9) + 1
    last = int(t1 / period + 1e-9)
    return [k * period for k in range(first, last + 1)]


def video_payload(seq: int, size: int = 1024) -> bytes:
    """Deterministic synthetic pattern standing in for a camera frame."""
    return bytes(((seq * 31 + i * 7) ^ (i >> 3)) & 0xFF for i in range(size))
