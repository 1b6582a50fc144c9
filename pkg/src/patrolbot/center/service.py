"""Control-center service.

Accepts one robot agent over the wire protocol (TCP), persists every
received frame, runs the alarm machine with its simulated building
lockdown, and exposes the operator API over HTTP and WebSocket (see
docs/api.md).  Everything runs on one asyncio loop: per-session ingestion
is naturally serialized, the alarm machine is touched only from that loop,
and history reads go to the append-only files without blocking ingestion.
"""
from __future__ import annotations

import asyncio
import json
import time
from collections import deque
from functools import partial
from dataclasses import dataclass, field
from pathlib import Path

from aiohttp import WSMsgType, web

from .. import protocol
from ..protocol import (
    AlarmSignal,
    DecodeError,
    FrameReader,
    OperatorCommand,
    TelemetryFrame,
    decode,
    encode,
    to_dict,
)
from ..worldsim import CircleObstacle, parse_map
from .alarm import AlarmMachine, AlarmStatus, AlarmTransitionError
from .storage import SessionLog, iter_records


@dataclass
class Session:
    session_id: str
    log: SessionLog
    started_at: float
    last_seq: dict[str, int] = field(default_factory=dict)
    message_count: int = 0
    decode_errors: int = 0
    gap_events: int = 0
    #: recent telemetry tail for status views; full history lives on disk
    telemetry: deque = field(default_factory=partial(deque, maxlen=20000))


class CommandRejected(Exception):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


#: stream events a slow consumer may lose; state changes never drop
_DROPPABLE = ("telemetry", "video")


class Subscriber:
    """Bounded live-stream buffer. On overflow the oldest telemetry or
    video event is discarded first, so alarms, commands, and session
    markers always get through."""

    def __init__(self, max_queue: int = 512):
        self.items: deque[dict] = deque()
        self.max_queue = max_queue
        self.dropped = 0
        self._wakeup = asyncio.Event()

    def push(self, payload: dict) -> None:
        self.items.append(payload)
        if len(self.items) > self.max_queue:
            for i, item in enumerate(self.items):
                if item.get("type") in _DROPPABLE:
                    del self.items[i]
                    self.dropped += 1
                    break
            else:
                self.items.popleft()
                self.dropped += 1
        self._wakeup.set()

    async def drain(self) -> list[dict]:
        while not self.items:
            self._wakeup.clear()
            await self._wakeup.wait()
        out = list(self.items)
        self.items.clear()
        return out


class ControlCenter:
    """Core service object; network handlers are thin wrappers around it."""

    def __init__(self, storage_dir: str | Path, map_path: str | Path | None = None,
                 fsync: bool = True, queue_commands: bool = False,
                 retention_sessions: int = 0):
        self.storage_dir = Path(storage_dir)
        self.storage_dir.mkdir(parents=True, exist_ok=True)
        self.retention_sessions = retention_sessions
        self.map_path = Path(map_path) if map_path else None
        self.map_text = (self.map_path.read_text(encoding="utf-8")
                         if self.map_path else "")
        self.fsync = fsync
        self.queue_commands = queue_commands
        self.alarm = AlarmMachine(self.storage_dir / "lockdown.log")
        self.sessions: dict[str, Session] = {}
        self.current_session: Session | None = None
        self.agent_writer: asyncio.StreamWriter | None = None
        self.manual_override = False
        self.pending_commands: list[bytes] = []
        self.subscribers: set[Subscriber] = set()
        self.storage_errors: list[str] = []
        self.operator_log_path = self.storage_dir / "operator.log"
        self._session_counter = 0

    # ----- sessions / ingestion -------------------------------------------

    def begin_session(self) -> Session:
        self._session_counter += 1
        sid = f"s{int(time.time())}-{self._session_counter:03d}"
        session = Session(sid, SessionLog(self.storage_dir, sid, self.fsync),
                          started_at=time.time())
        self.sessions[sid] = session
        self.current_session = session
        self._broadcast({"type": "session", "session_id": sid, "state": "open"})
        self._apply_retention()
        return session

    def _apply_retention(self) -> None:
        """Prune the oldest closed session files beyond the retention cap."""
        if self.retention_sessions <= 0:
            return
        records = sorted(self.storage_dir.glob("*.records"),
                         key=lambda p: p.stat().st_mtime)
        open_ids = {s.session_id for s in self.sessions.values()
                    if not s.log.closed}
        prunable = [p for p in records if p.stem not in open_ids]
        keep_budget = max(self.retention_sessions - len(open_ids), 0)
        for path in prunable[: max(len(prunable) - keep_budget, 0)]:
            path.unlink(missing_ok=True)
            path.with_suffix(".events").unlink(missing_ok=True)
            self.sessions.pop(path.stem, None)

    def end_session(self, session: Session, status: str = "closed") -> None:
        session.log.close(status)
        if self.current_session is session:
            self.current_session = None
        self._broadcast({"type": "session", "session_id": session.session_id,
                         "state": status})

    def ingest(self, session: Session, frame: bytes,
               received_at: float | None = None):
        """Persist one wire frame and apply its side effects.

        The raw frame is appended (and flushed) before anything reacts to
        it, so an acknowledged record survives a process restart.  Storage
        failures keep the session open and surface on the health endpoint.
        """
        received_at = time.time() if received_at is None else received_at
        try:
            session.log.append(received_at, frame)
        except (OSError, ValueError) as exc:
            self.storage_errors.append(f"{session.session_id}: {exc}")
            return None
        try:
            msg = decode(frame)
        except DecodeError as exc:
            session.decode_errors += 1
            self._session_event(session, received_at, "decode_error", str(exc))
            return exc
        session.message_count += 1

        kind = protocol.message_type(msg)
        seq = getattr(msg, "seq", None)
        if seq is not None:
            last = session.last_seq.get(kind)
            if last is not None:
                if seq > last + 1:
                    session.gap_events += 1
                    self._session_event(
                        session, received_at, "seq_gap",
                        f"{kind} jumped {last} -> {seq}")
                elif seq <= last:
                    self._session_event(
                        session, received_at, "seq_duplicate",
                        f"{kind} repeated {seq} after {last}")
            if last is None or seq > last:
                session.last_seq[kind] = seq

        if isinstance(msg, TelemetryFrame):
            session.telemetry.append(msg)
        elif isinstance(msg, AlarmSignal):
            self.raise_alarm(msg.cause, msg.t_sim)

        payload = to_dict(msg)
        if isinstance(msg, AlarmSignal):
            # "alarm" on the stream is the state machine; the raw robot
            # signal goes out under its own name so the two cannot clash
            payload["type"] = "alarm_signal"
        self._broadcast(payload)
        return msg

    def _session_event(self, session: Session, received_at: float,
                       kind: str, detail: str) -> None:
        try:
            session.log.add_event(received_at, kind, detail)
        except (OSError, ValueError) as exc:
            self.storage_errors.append(f"{session.session_id}: {exc}")
        self._broadcast({"type": "event", "session_id": session.session_id,
                         "kind": kind, "detail": detail})

    # ----- alarm chain ----------------------------------------------------

    def raise_alarm(self, cause: str, t_sim: float):
        """ACTIVE + lockdown record, then an immediate STOP to the agent."""
        state = self.alarm.raise_alarm(cause, t_sim)
        self._broadcast({"type": "alarm", **state.as_dict()})
        stop_cmd = OperatorCommand("STOP", None, time.time(), "center.alarm")
        try:
            self._forward(encode(stop_cmd))
            self.manual_override = True
            self._broadcast({"type": "command", **to_dict(stop_cmd)})
        except CommandRejected:
            pass
        return state

    def acknowledge_alarm(self, operator_id: str) -> dict:
        try:
            state = self.alarm.acknowledge()
        except AlarmTransitionError as exc:
            raise CommandRejected(str(exc)) from None
        self._log_operator(operator_id, "ACK_ALARM", None, "accepted")
        self._broadcast({"type": "alarm", **state.as_dict()})
        return state.as_dict()

    # ----- operator commands ----------------------------------------------

    def submit_command(self, kind: str, value: float | None,
                       operator_id: str) -> dict:
        """Validate and forward one operator command.

        Operator commands always outrank autonomous control: the agent
        drains its command queue before every autonomous decision.
        """
        if kind not in protocol.COMMAND_KINDS:
            raise CommandRejected(f"unknown command kind {kind!r}")
        if kind in protocol.VALUED_COMMANDS and value is None:
            self._log_operator(operator_id, kind, value, "rejected: no value")
            raise CommandRejected(f"{kind} requires a numeric value")
        if kind == "ACK_ALARM":
            return self.acknowledge_alarm(operator_id)
        if kind in ("MANUAL_TURN", "MANUAL_FORWARD", "CAMERA_PAN") \
                and not self.manual_override:
            self._log_operator(operator_id, kind, value,
                               "rejected: autonomous mode")
            raise CommandRejected(
                "manual commands require manual override (send STOP first)")
        if kind == "START_PATROL":
            if self.alarm.state.status is AlarmStatus.ACTIVE:
                self._log_operator(operator_id, kind, value,
                                   "rejected: alarm active")
                raise CommandRejected("acknowledge the active alarm first")
            self.alarm.reset_for_patrol()

        cmd = OperatorCommand(kind, value, time.time(), operator_id)
        self._forward(encode(cmd))
        if kind == "STOP":
            self.manual_override = True
        elif kind == "START_PATROL":
            self.manual_override = False
        self._log_operator(operator_id, kind, value, "forwarded")
        self._broadcast({"type": "command", **to_dict(cmd)})
        return {"status": "accepted", "kind": kind}

    def _forward(self, frame: bytes) -> None:
        if self.agent_writer is None or self.agent_writer.is_closing():
            if self.queue_commands:
                self.pending_commands.append(frame)
                return
            raise CommandRejected("no agent connected")
        self.agent_writer.write(frame)

    def _log_operator(self, operator_id: str, kind: str, value, outcome: str):
        line = (f"wall_time={time.time()!r} operator={operator_id} "
                f"kind={kind} value={value if value is not None else '-'} "
                f"outcome={outcome}\n")
        with open(self.operator_log_path, "a", encoding="utf-8") as fh:
            fh.write(line)

    # ----- queries ----------------------------------------------------------

    def status(self) -> dict:
        session = self.current_session
        return {
            "alarm": self.alarm.state.as_dict(),
            "agent_connected": self.agent_writer is not None
            and not self.agent_writer.is_closing(),
            "manual_override": self.manual_override,
            "session_id": session.session_id if session else None,
            "session_messages": session.message_count if session else 0,
            "storage_ok": not self.storage_errors,
        }

    def history(self, session_id: str, t0: float | None = None,
                t1: float | None = None, kind: str = "telemetry") -> list[dict]:
        """Stored frames of one session, filtered by sim time, in order."""
        if session_id not in self.sessions:
            path = self.storage_dir / f"{session_id}.records"
            if not path.exists():
                raise KeyError(session_id)
        path = self.storage_dir / f"{session_id}.records"
        out = []
        for _, frame in iter_records(path):
            try:
                msg = decode(frame)
            except DecodeError:
                continue
            if kind and protocol.message_type(msg) != kind:
                continue
            t_sim = getattr(msg, "t_sim", None)
            if t0 is not None and (t_sim is None or t_sim < t0):
                continue
            if t1 is not None and (t_sim is None or t_sim > t1):
                continue
            out.append(to_dict(msg))
        return out

    def map_geometry(self) -> dict:
        """Parsed map served to consoles, which never read map files."""
        if not self.map_text:
            return {"walls": [], "circles": [], "polygons": [], "meta": {},
                    "start": None}
        world = parse_map(self.map_text)
        circles = [o for o in world.obstacles if isinstance(o, CircleObstacle)]
        polys = [o for o in world.obstacles if not isinstance(o, CircleObstacle)]
        return {
            "walls": [[*w.p1, *w.p2] for w in world.walls],
            "circles": [[*c.center, c.radius] for c in circles],
            "polygons": [[list(p) for p in poly.points] for poly in polys],
            "meta": world.meta,
            "start": list(world.start_pose),
        }

    # ----- live stream ------------------------------------------------------

    def subscribe(self, max_queue: int = 512) -> "Subscriber":
        sub = Subscriber(max_queue)
        self.subscribers.add(sub)
        return sub

    def unsubscribe(self, sub: "Subscriber") -> None:
        self.subscribers.discard(sub)

    def _broadcast(self, payload: dict) -> None:
        for sub in list(self.subscribers):
            sub.push(payload)


# ----- network front ends ----------------------------------------------------


async def handle_agent(center: ControlCenter, reader: asyncio.StreamReader,
                       writer: asyncio.StreamWriter) -> None:
    session = center.begin_session()
    center.agent_writer = writer
    center.manual_override = False
    for frame in center.pending_commands:
        writer.write(frame)
    center.pending_commands.clear()
    frames = FrameReader()
    try:
        while True:
            data = await reader.read(65536)
            if not data:
                break
            for item in frames.feed_frames(data):
                if isinstance(item, DecodeError):
                    session.decode_errors += 1
                    center._session_event(session, time.time(),
                                          "decode_error", str(item))
                else:
                    center.ingest(session, item)
    finally:
        if center.agent_writer is writer:
            center.agent_writer = None
        center.end_session(session)
        writer.close()


@web.middleware
async def _cors(request, handler):
    # the console is served from its own origin; the API carries no
    # credentials, so a blanket allow is fine here
    if request.method == "OPTIONS":
        response = web.Response()
    else:
        try:
            response = await handler(request)
        except web.HTTPException as exc:
            response = exc
    response.headers["Access-Control-Allow-Origin"] = "*"
    response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS"
    response.headers["Access-Control-Allow-Headers"] = "Content-Type"
    if isinstance(response, web.HTTPException):
        raise response
    return response


def build_http_app(center: ControlCenter,
                   console_dir: Path | None = None) -> web.Application:
    routes = web.RouteTableDef()

    @routes.get("/api/status")
    async def status(request):
        return web.json_response(center.status())

    @routes.get("/api/health")
    async def health(request):
        body = {"ok": not center.storage_errors,
                "storage_errors": center.storage_errors[-20:]}
        return web.json_response(body, status=200 if body["ok"] else 503)

    @routes.get("/api/sessions")
    async def sessions(request):
        out = [
            {"session_id": s.session_id, "messages": s.message_count,
             "gaps": s.gap_events, "open": not s.log.closed}
            for s in center.sessions.values()
        ]
        return web.json_response(out)

    @routes.get("/api/history")
    async def history(request):
        q = request.query
        session_id = q.get("session", "")
        if not session_id and center.current_session:
            session_id = center.current_session.session_id
        try:
            rows = center.history(
                session_id,
                t0=float(q["t0"]) if "t0" in q else None,
                t1=float(q["t1"]) if "t1" in q else None,
                kind=q.get("kind", "telemetry"),
            )
        except KeyError:
            raise web.HTTPNotFound(text=f"unknown session {session_id!r}")
        return web.json_response(rows)

    @routes.get("/api/map")
    async def map_geometry(request):
        return web.json_response(center.map_geometry())

    @routes.get("/map")
    async def map_text(request):
        return web.Response(text=center.map_text, content_type="text/plain")

    @routes.post("/api/command")
    async def command(request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            raise web.HTTPBadRequest(text="body must be JSON")
        kind = body.get("kind", "")
        value = body.get("value")
        operator_id = body.get("operator_id", "console")
        try:
            result = center.submit_command(
                kind, float(value) if value is not None else None, operator_id)
        except CommandRejected as exc:
            return web.json_response({"status": "rejected",
                                      "reason": exc.reason}, status=409)
        return web.json_response(result)

    @routes.post("/api/alarm/ack")
    async def ack(request):
        try:
            body = await request.json()
        except json.JSONDecodeError:
            body = {}
        try:
            state = center.acknowledge_alarm(body.get("operator_id", "console"))
        except CommandRejected as exc:
            return web.json_response({"status": "rejected",
                                      "reason": exc.reason}, status=409)
        return web.json_response(state)

    @routes.get("/api/stream")
    async def stream(request):
        ws = web.WebSocketResponse(heartbeat=30.0)
        await ws.prepare(request)
        sub = center.subscribe()
        await ws.send_json({"type": "hello", **center.status()})
        try:
            sender = asyncio.create_task(_pump(sub, ws))
            async for msg in ws:
                if msg.type in (WSMsgType.ERROR, WSMsgType.CLOSE):
                    break
        finally:
            center.unsubscribe(sub)
            sender.cancel()
        return ws

    app = web.Application(middlewares=[_cors])
    app.add_routes(routes)
    if console_dir is not None and Path(console_dir).is_dir():
        async def console_index(request):
            raise web.HTTPFound("/console/index.html")

        app.router.add_get("/console", console_index)
        app.router.add_static("/console/", Path(console_dir))
    return app


async def _pump(sub: Subscriber, ws: web.WebSocketResponse) -> None:
    while True:
        for payload in await sub.drain():
            await ws.send_json(payload)


@dataclass
class CenterHandles:
    center: ControlCenter
    protocol_port: int
    http_port: int
    protocol_server: asyncio.AbstractServer
    http_runner: web.AppRunner

    async def close(self) -> None:
        self.protocol_server.close()
        await self.protocol_server.wait_closed()
        await self.http_runner.cleanup()


async def start_center(center: ControlCenter, host: str = "127.0.0.1",
                       protocol_port: int = protocol.DEFAULT_PROTOCOL_PORT,
                       http_port: int = protocol.DEFAULT_HTTP_PORT,
                       console_dir: Path | None = None,
                       ) -> CenterHandles:
    server = await asyncio.start_server(
        lambda r, w: handle_agent(center, r, w), host, protocol_port)
    actual_protocol_port = server.sockets[0].getsockname()[1]

    runner = web.AppRunner(build_http_app(center, console_dir))
    await runner.setup()
    site = web.TCPSite(runner, host, http_port)
    await site.start()
    actual_http_port = runner.addresses[0][1]

    return CenterHandles(center, actual_protocol_port, actual_http_port,
                         server, runner)
