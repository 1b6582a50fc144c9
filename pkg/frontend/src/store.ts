/**
 * Console view state and its reducer.
 *
 * The console holds no authority: every transition here is driven by an
 * event the center sent (or by the local socket opening/closing).  Command
 * submissions only append to the action log; their effects show up when
 * the center confirms them on the stream.
 */
import type {
  AlarmStatus,
  ControlMode,
  Pose,
  StreamEvent,
  TelemetryEvent,
} from "./types";

export const TRAIL_LIMIT = 2000;

export interface ActionEntry {
  at: number; // wall-clock ms
  text: string;
  outcome: "pending" | "accepted" | "rejected" | "info";
}

export interface ViewState {
  connection: "connecting" | "open" | "closed";
  latest: TelemetryEvent | null;
  trail: Pose[];
  trailLimit: number;
  alarmStatus: AlarmStatus;
  alarmCause: string;
  bannerVisible: boolean;
  lockdownIssued: boolean;
  controlMode: ControlMode;
  agentConnected: boolean;
  lastSeq: number | null;
  gapCount: number;
  gapBadge: boolean;
  lastVideoSeq: number | null;
  actionLog: ActionEntry[];
  telemetryCount: number;
}

export function initialState(trailLimit: number = TRAIL_LIMIT): ViewState {
  return {
    connection: "connecting",
    latest: null,
    trail: [],
    trailLimit,
    alarmStatus: "QUIET",
    alarmCause: "",
    bannerVisible: false,
    lockdownIssued: false,
    controlMode: "AUTONOMOUS",
    agentConnected: false,
    lastSeq: null,
    gapCount: 0,
    gapBadge: false,
    lastVideoSeq: null,
    actionLog: [],
    telemetryCount: 0,
  };
}

export type LocalEvent =
  | { type: "socket-open" }
  | { type: "socket-closed" }
  | { type: "action"; entry: ActionEntry };

function pushTrail(trail: Pose[], limit: number, pose: Pose): Pose[] {
  const next = trail.length >= limit ? trail.slice(trail.length - limit + 1) : trail.slice();
  next.push(pose);
  return next;
}

export function reduce(state: ViewState, event: StreamEvent | LocalEvent): ViewState {
  switch (event.type) {
    case "socket-open":
      return { ...state, connection: "open" };
    case "socket-closed":
      return { ...state, connection: "closed", agentConnected: false };
    case "action":
      return { ...state, actionLog: [...state.actionLog.slice(-199), event.entry] };
    case "hello":
      return {
        ...state,
        connection: "open",
        agentConnected: event.agent_connected,
        controlMode: event.manual_override ? "MANUAL" : "AUTONOMOUS",
        alarmStatus: event.alarm.status,
        alarmCause: event.alarm.cause,
        lockdownIssued: event.alarm.lockdown_issued,
        bannerVisible: event.alarm.status === "ACTIVE",
      };
    case "telemetry": {
      let gapCount = state.gapCount;
      let gapBadge = state.gapBadge;
      if (state.lastSeq !== null && event.seq > state.lastSeq + 1) {
        gapCount += 1;
        gapBadge = true;
      }
      return {
        ...state,
        latest: event,
        trail: pushTrail(state.trail, state.trailLimit, {
          x: event.x,
          y: event.y,
          heading: event.heading,
        }),
        lastSeq: state.lastSeq === null ? event.seq : Math.max(state.lastSeq, event.seq),
        gapCount,
        gapBadge,
        agentConnected: true,
        telemetryCount: state.telemetryCount + 1,
      };
    }
    case "video":
      return { ...state, lastVideoSeq: event.seq };
    case "alarm":
      return {
        ...state,
        alarmStatus: event.status,
        alarmCause: event.cause,
        lockdownIssued: event.lockdown_issued,
        bannerVisible: event.status === "ACTIVE",
      };
    case "command": {
      // mode flips only when the center confirms the command on-stream
      let mode = state.controlMode;
      if (event.kind === "STOP") mode = "MANUAL";
      if (event.kind === "START_PATROL") mode = "AUTONOMOUS";
      const entry: ActionEntry = {
        at: Date.now(),
        text: `center forwarded ${event.kind}` +
          (event.value !== null ? `(${event.value})` : "") +
          ` from ${event.operator_id}`,
        outcome: "info",
      };
      return {
        ...state,
        controlMode: mode,
        actionLog: [...state.actionLog.slice(-199), entry],
      };
    }
    case "event":
      if (event.kind === "seq_gap") {
        return { ...state, gapCount: state.gapCount + 1, gapBadge: true };
      }
      return state;
    case "session":
      if (event.state === "open") {
        return { ...state, agentConnected: true, lastSeq: null };
      }
      return { ...state, agentConnected: false };
    default:
      return state;
  }
}

/** Small mutable wrapper so UI code and tests share one store shape. */
export class Store {
  state: ViewState;
  private listeners = new Set<(s: ViewState) => void>();

  constructor(trailLimit: number = TRAIL_LIMIT) {
    this.state = initialState(trailLimit);
  }

  dispatch(event: StreamEvent | LocalEvent): void {
    this.state = reduce(this.state, event);
    for (const fn of this.listeners) fn(this.state);
  }

  subscribe(fn: (s: ViewState) => void): () => void {
    this.listeners.add(fn);
    return () => this.listeners.delete(fn);
  }
}
