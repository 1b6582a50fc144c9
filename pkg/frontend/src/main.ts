/** Browser bootstrap: wires the stream client, API, store, and panels. */
import { CenterApi } from "./api";
import { StreamClient } from "./client";
import { drawScene, drawTestPattern } from "./render";
import { buildScene } from "./scene";
import { Store, type ViewState } from "./store";
import type { MapGeometry } from "./types";

function centerBase(): string {
  const param = new URLSearchParams(window.location.search).get("center");
  return `http://${param ?? "127.0.0.1:7780"}`;
}

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

async function boot(): Promise<void> {
  const base = centerBase();
  const api = new CenterApi(base);
  const store = new Store();
  const operatorId = `console-${Math.floor(Math.random() * 1e6)}`;

  let map: MapGeometry = {
    walls: [], circles: [], polygons: [], meta: {}, start: null,
  };
  try {
    map = await api.mapGeometry();
  } catch {
    log("map unavailable; drawing telemetry only", "rejected");
  }

  const wsUrl = base.replace(/^http/, "ws") + "/api/stream";
  const client = new StreamClient(wsUrl, store, (url) => new WebSocket(url));
  client.connect();

  const mapCanvas = el<HTMLCanvasElement>("map");
  const cameraCanvas = el<HTMLCanvasElement>("camera");
  const mapCtx = mapCanvas.getContext("2d")!;
  const cameraCtx = cameraCanvas.getContext("2d")!;

  function log(text: string, outcome: "pending" | "accepted" | "rejected" | "info") {
    store.dispatch({ type: "action", entry: { at: Date.now(), text, outcome } });
  }

  async function submit(kind: string, value: number | null): Promise<void> {
    log(`sent ${kind}${value !== null ? `(${value})` : ""}`, "pending");
    const result = kind === "ACK_ALARM"
      ? await api.ackAlarm(operatorId)
      : await api.sendCommand(kind, value, operatorId);
    log(
      result.ok
        ? `${kind} accepted`
        : `${kind} rejected: ${result.reason}`,
      result.ok ? "accepted" : "rejected",
    );
  }

  el<HTMLButtonElement>("btn-stop").onclick = () => void submit("STOP", null);
  el<HTMLButtonElement>("btn-resume").onclick = () =>
    void submit("START_PATROL", null);
  el<HTMLButtonElement>("btn-ack").onclick = () => void submit("ACK_ALARM", null);
  el<HTMLButtonElement>("btn-forward").onclick = () => {
    const value = Number(el<HTMLInputElement>("drive-value").value) || 50;
    void submit("MANUAL_FORWARD", value);
  };
  el<HTMLButtonElement>("btn-left").onclick = () => {
    const value = Number(el<HTMLInputElement>("turn-value").value) || 15;
    void submit("MANUAL_TURN", -value);
  };
  el<HTMLButtonElement>("btn-right").onclick = () => {
    const value = Number(el<HTMLInputElement>("turn-value").value) || 15;
    void submit("MANUAL_TURN", value);
  };
  el<HTMLButtonElement>("btn-pan").onclick = () => {
    void submit("CAMERA_PAN", Number(el<HTMLInputElement>("turn-value").value) || 15);
  };

  function renderPanels(state: ViewState): void {
    el("conn").textContent = state.connection +
      (state.agentConnected ? " / agent up" : " / no agent");
    el("mode").textContent = state.controlMode;
    const banner = el("banner");
    banner.style.display = state.bannerVisible ? "block" : "none";
    banner.textContent = state.bannerVisible
      ? `ALARM ACTIVE — ${state.alarmCause}` +
        (state.lockdownIssued ? " — building locked down" : "")
      : "";
    el("gap-badge").style.display = state.gapBadge ? "inline" : "none";
    el("gap-badge").textContent = `seq gaps: ${state.gapCount}`;

    const t = state.latest;
    el("telemetry").textContent = t
      ? [
          `t=${t.t_sim.toFixed(1)}s  seq=${t.seq}`,
          `pose (${t.x.toFixed(0)}, ${t.y.toFixed(0)}) @ ${t.heading.toFixed(0)}°`,
          `sonar L ${t.sonar_left.toFixed(0)}  F ${t.sonar_front.toFixed(0)}  R ${t.sonar_right.toFixed(0)}`,
          `HMS ${t.hms_left ? "LEFT " : ""}${t.hms_right ? "RIGHT" : ""}${!t.hms_left && !t.hms_right ? "quiet" : ""}`,
          `battery ${t.battery_remaining.toFixed(0)}s  odo ${t.odometer.toFixed(0)}cm`,
          `mode ${t.mode}`,
        ].join("\n")
      : "no telemetry yet";

    // manual drive controls only in manual override, per the center's rules
    const manual = state.controlMode === "MANUAL";
    for (const id of ["btn-forward", "btn-left", "btn-right"]) {
      el<HTMLButtonElement>(id).disabled = !manual;
    }
    el<HTMLButtonElement>("btn-ack").disabled = state.alarmStatus !== "ACTIVE";

    el("action-log").textContent = state.actionLog
      .slice(-12)
      .map((e) => `${new Date(e.at).toLocaleTimeString()} [${e.outcome}] ${e.text}`)
      .join("\n");
  }

  let dirty = true;
  store.subscribe(() => {
    dirty = true;
  });

  function frame(): void {
    if (dirty) {
      dirty = false;
      const state = store.state;
      drawScene(mapCtx, buildScene(state, map, mapCanvas.width, mapCanvas.height));
      drawTestPattern(cameraCtx, state.lastVideoSeq,
        state.latest ? state.latest.t_sim : null);
      renderPanels(state);
    }
    requestAnimationFrame(frame);
  }
  requestAnimationFrame(frame);
}

void boot();
