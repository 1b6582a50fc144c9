/** Request/response half of the operator API (commands, history, map). */
import type { MapGeometry } from "./types";

export interface CommandResult {
  ok: boolean;
  reason?: string;
}

type FetchLike = typeof fetch;

export class CenterApi {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch,
  ) {}

  private async getJson<T>(path: string): Promise<T> {
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`);
    if (!resp.ok) {
      throw new Error(`${path}: HTTP ${resp.status}`);
    }
    return (await resp.json()) as T;
  }

  status(): Promise<Record<string, unknown>> {
    return this.getJson("/api/status");
  }

  mapGeometry(): Promise<MapGeometry> {
    return this.getJson<MapGeometry>("/api/map");
  }

  history(sessionId: string, t0?: number, t1?: number): Promise<unknown[]> {
    const params = new URLSearchParams({ session: sessionId });
    if (t0 !== undefined) params.set("t0", String(t0));
    if (t1 !== undefined) params.set("t1", String(t1));
    return this.getJson(`/api/history?${params}`);
  }

  async sendCommand(
    kind: string,
    value: number | null,
    operatorId: string,
  ): Promise<CommandResult> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/command`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ kind, value, operator_id: operatorId }),
    });
    if (resp.ok) return { ok: true };
    try {
      const body = (await resp.json()) as { reason?: string };
      return { ok: false, reason: body.reason ?? `HTTP ${resp.status}` };
    } catch {
      return { ok: false, reason: `HTTP ${resp.status}` };
    }
  }

  async ackAlarm(operatorId: string): Promise<CommandResult> {
    const resp = await this.fetchImpl(`${this.baseUrl}/api/alarm/ack`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ operator_id: operatorId }),
    });
    if (resp.ok) return { ok: true };
    try {
      const body = (await resp.json()) as { reason?: string };
      return { ok: false, reason: body.reason ?? `HTTP ${resp.status}` };
    } catch {
      return { ok: false, reason: `HTTP ${resp.status}` };
    }
  }
}
