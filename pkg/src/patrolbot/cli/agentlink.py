"""Robot-side link to the control center.

A background sender thread owns the socket, fed through a bounded deque
with drop-oldest overflow, so the simulation loop never blocks on the
network; a reader thread turns incoming frames into a queue of operator
commands the sim drains at its own pace.
"""
from __future__ import annotations

import socket
import threading
from collections import deque

from ..protocol import FrameReader, OperatorCommand, encode


class CenterLink:
    def __init__(self, endpoint: str, buffer: int = 256,
                 connect_timeout: float = 5.0):
        host, _, port = endpoint.rpartition(":")
        if not host or not port.isdigit():
            raise ValueError(f"endpoint must be host:port, got {endpoint!r}")
        self._sock = socket.create_connection((host, int(port)),
                                              timeout=connect_timeout)
        self._sock.settimeout(0.2)
        self._outbox: deque[bytes] = deque(maxlen=buffer)
        self._outbox_lock = threading.Lock()
        self._wakeup = threading.Event()
        self._commands: deque[OperatorCommand] = deque()
        self._commands_lock = threading.Lock()
        self.drops = 0
        self.sent = 0
        self._closing = threading.Event()
        self._sender = threading.Thread(target=self._send_loop, daemon=True)
        self._reader = threading.Thread(target=self._read_loop, daemon=True)
        self._sender.start()
        self._reader.start()

    def send(self, msg) -> None:
        """Queue one message; oldest queued frame is dropped on overflow."""
        frame = encode(msg)
        with self._outbox_lock:
            if len(self._outbox) == self._outbox.maxlen:
                self.drops += 1
            self._outbox.append(frame)
        self._wakeup.set()

    def poll_commands(self) -> list[OperatorCommand]:
        with self._commands_lock:
            out = list(self._commands)
            self._commands.clear()
        return out

    def _send_loop(self) -> None:
        while not self._closing.is_set():
            self._wakeup.wait(timeout=0.1)
            self._wakeup.clear()
            while True:
                with self._outbox_lock:
                    if not self._outbox:
                        break
                    frame = self._outbox.popleft()
                try:
                    self._sock.sendall(frame)
                    self.sent += 1
                except OSError:
                    self._closing.set()
                    return

    def _read_loop(self) -> None:
        frames = FrameReader()
        while not self._closing.is_set():
            try:
                data = self._sock.recv(65536)
            except socket.timeout:
                continue
            except OSError:
                break
            if not data:
                break
            for item in frames.feed(data):
                if isinstance(item, OperatorCommand):
                    with self._commands_lock:
                        self._commands.append(item)

    def flush(self, timeout: float = 2.0) -> None:
        """Best-effort wait for the outbox to drain (shutdown path)."""
        import time as _time

        deadline = _time.monotonic() + timeout
        while _time.monotonic() < deadline:
            with self._outbox_lock:
                if not self._outbox:
                    return
            _time.sleep(0.01)

    def close(self) -> None:
        self.flush()
        self._closing.set()
        self._wakeup.set()
        try:
            self._sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self._sock.close()
        self._sender.join(timeout=1.0)
        self._reader.join(timeout=1.0)
