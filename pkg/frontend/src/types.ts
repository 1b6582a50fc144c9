/** Shapes exchanged with the control center (see docs/api.md). */

export interface TelemetryEvent {
  type: "telemetry";
  seq: number;
  t_sim: number;
  x: number;
  y: number;
  heading: number;
  sonar_left: number;
  sonar_front: number;
  sonar_right: number;
  hms_left: boolean;
  hms_right: boolean;
  battery_remaining: number;
  mode: string;
  odometer: number;
}

export interface VideoEvent {
  type: "video";
  seq: number;
  t_sim: number;
  width: number;
  height: number;
  payload: string; // base64 stub, rendered as a generated pattern
}

export type AlarmStatus = "QUIET" | "ACTIVE" | "ACKNOWLEDGED";

export interface AlarmEvent {
  type: "alarm";
  status: AlarmStatus;
  cause: string;
  raised_at: number;
  lockdown_issued: boolean;
  signal_count: number;
}

export interface CommandEvent {
  type: "command";
  kind: string;
  value: number | null;
  issued_at: number;
  operator_id: string;
}

export interface BookkeepingEvent {
  type: "event";
  session_id: string;
  kind: string; // seq_gap | seq_duplicate | decode_error | ...
  detail: string;
}

export interface SessionEvent {
  type: "session";
  session_id: string;
  state: string;
}

export interface HelloEvent {
  type: "hello";
  alarm: {
    status: AlarmStatus;
    cause: string;
    raised_at: number;
    lockdown_issued: boolean;
    signal_count: number;
  };
  agent_connected: boolean;
  manual_override: boolean;
  session_id: string | null;
}

export type StreamEvent =
  | TelemetryEvent
  | VideoEvent
  | AlarmEvent
  | CommandEvent
  | BookkeepingEvent
  | SessionEvent
  | HelloEvent;

export interface MapGeometry {
  walls: [number, number, number, number][];
  circles: [number, number, number][];
  polygons: [number, number][][];
  meta: Record<string, string>;
  start: [number, number, number] | null;
}

export interface Pose {
  x: number;
  y: number;
  heading: number;
}

export type ControlMode = "AUTONOMOUS" | "MANUAL";
