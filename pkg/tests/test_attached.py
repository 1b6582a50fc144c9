"""End-to-end: simulation agent attached to a live control center.

Covers the telemetry cadence contract, the alarm chain landing in the
center within one ingest cycle, and operator commands outranking the
autonomous pilot (visible in the agent's command log).
"""
import asyncio
import dataclasses
import threading
import time
from pathlib import Path

from patrolbot.center import ControlCenter, start_center
from patrolbot.cli.attached import run_attached
from patrolbot.cli.config import default_scenario_config
from patrolbot.worldsim import bundled_map_path


class CenterFixture:
    """Control center on its own asyncio loop thread."""

    def __init__(self, tmp_path: Path, map_name: str):
        self.center = ControlCenter(tmp_path / "store",
                                    bundled_map_path(map_name))
        self.loop = asyncio.new_event_loop()
        self.handles = None
        started = threading.Event()

        def runner():
            asyncio.set_event_loop(self.loop)
            self.handles = self.loop.run_until_complete(
                start_center(self.center, protocol_port=0, http_port=0))
            started.set()
            self.loop.run_forever()

        self.thread = threading.Thread(target=runner, daemon=True)
        self.thread.start()
        assert started.wait(10.0), "center did not start"

    @property
    def endpoint(self) -> str:
        return f"127.0.0.1:{self.handles.protocol_port}"

    def submit(self, kind, value=None, operator_id="op-test"):
        done = threading.Event()
        box = {}

        def call():
            try:
                box["result"] = self.center.submit_command(kind, value,
                                                           operator_id)
            except Exception as exc:  # surfaced to the test thread
                box["error"] = exc
            done.set()

        self.loop.call_soon_threadsafe(call)
        assert done.wait(5.0), "command submission timed out"
        if "error" in box:
            raise box["error"]
        return box["result"]

    def close(self):
        async def _shutdown():
            await self.handles.close()
            self.loop.stop()

        self.loop.call_soon_threadsafe(
            lambda: asyncio.ensure_future(_shutdown()))
        self.thread.join(timeout=10.0)


def wait_for(predicate, timeout=20.0, interval=0.02):
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if predicate():
            return True
        time.sleep(interval)
    return False


def test_intruder_alarm_reaches_center(tmp_path):
    fixture = CenterFixture(tmp_path, "corridor_intruder")
    try:
        cfg = default_scenario_config(
            map_ref="corridor_intruder", output_dir=tmp_path / "agent")
        cfg = dataclasses.replace(
            cfg, center=dataclasses.replace(cfg.center,
                                            endpoint=fixture.endpoint))
        summary = run_attached(cfg)
        assert summary.outcome == "ALARM"
        assert wait_for(lambda: fixture.center.alarm.state.status.value
                        == "ACTIVE")
        state = fixture.center.alarm.state
        assert state.lockdown_issued is True
        assert (fixture.center.storage_dir / "lockdown.log").exists()

        # telemetry cadence: ~10 Hz of sim time, sequential seq
        session = next(iter(fixture.center.sessions.values()))
        assert wait_for(lambda: session.log.closed), "session never closed"
        frames = session.telemetry
        assert frames, "no telemetry stored"
        expected = summary.sim_duration * 10.0
        assert len(frames) >= 0.8 * expected
        seqs = [f.seq for f in frames]
        assert seqs == sorted(seqs)
        assert summary.telemetry_drops == 0

        # video stubs flow at 15 Hz sim time on their own seq counter
        video_seq = session.last_seq.get("video")
        assert video_seq is not None
        assert video_seq + 1 >= 0.8 * summary.sim_duration * 15.0
    finally:
        fixture.close()


def test_operator_commands_outrank_pilot(tmp_path):
    fixture = CenterFixture(tmp_path, "corridor_g2")
    try:
        cfg = default_scenario_config(output_dir=tmp_path / "agent")
        cfg = dataclasses.replace(
            cfg, center=dataclasses.replace(cfg.center,
                                            endpoint=fixture.endpoint))
        agent_box = {}

        def drive():
            agent_box["summary"] = run_attached(cfg, realtime=400.0)

        agent = threading.Thread(target=drive)
        agent.start()
        log_path = tmp_path / "agent" / "commands.log"
        assert wait_for(lambda: fixture.center.status()["agent_connected"])
        assert wait_for(lambda: log_path.exists()
                        and "source=pilot" in log_path.read_text())

        fixture.submit("STOP")
        assert wait_for(lambda: "kind=STOP" in log_path.read_text())
        fixture.submit("MANUAL_FORWARD", 50.0)
        assert wait_for(lambda: "kind=FORWARD value=50.0"
                        in log_path.read_text())

        # while overridden, the pilot issues nothing: the last entries are
        # the operator's
        lines = log_path.read_text().strip().splitlines()
        stop_idx = next(i for i, l in enumerate(lines) if "kind=STOP" in l)
        assert all("source=operator:op-test" in l for l in lines[stop_idx:])

        fixture.submit("START_PATROL")
        agent.join(timeout=60.0)
        assert not agent.is_alive(), "agent did not finish after resume"
        assert agent_box["summary"].outcome == "LOOP_COMPLETE"

        # manual drive ran between the pilot phases
        lines = log_path.read_text().strip().splitlines()
        fwd_idx = next(i for i, l in enumerate(lines)
                       if "kind=FORWARD value=50.0" in l
                       and "operator" in l)
        assert any("source=pilot" in l for l in lines[fwd_idx + 1:])
    finally:
        fixture.close()
