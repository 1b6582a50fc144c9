/**
 * Live-stream client: subscribes to the center's WebSocket feed and pumps
 * every event into the store, reconnecting with exponential backoff after
 * a drop.  The WebSocket implementation is injectable so the same client
 * runs in browsers (global WebSocket) and under node tests (the ws
 * package).
 */
import { Backoff } from "./backoff";
import type { Store } from "./store";
import type { StreamEvent } from "./types";

// parameter types stay `any` so both the browser WebSocket and the ws
// package satisfy this structurally under strict function variance
/* eslint-disable @typescript-eslint/no-explicit-any */
export interface SocketLike {
  onopen: ((ev: any) => void) | null;
  onmessage: ((ev: any) => void) | null;
  onclose: ((ev: any) => void) | null;
  onerror: ((ev: any) => void) | null;
  close(): void;
}
/* eslint-enable @typescript-eslint/no-explicit-any */

export type SocketFactory = (url: string) => SocketLike;

export class StreamClient {
  private socket: SocketLike | null = null;
  private timer: ReturnType<typeof setTimeout> | null = null;
  private stopped = false;
  readonly backoff = new Backoff();

  constructor(
    private readonly wsUrl: string,
    private readonly store: Store,
    private readonly factory: SocketFactory,
    private readonly schedule: (fn: () => void, ms: number) => ReturnType<typeof setTimeout> = setTimeout,
  ) {}

  connect(): void {
    if (this.stopped) return;
    const socket = this.factory(this.wsUrl);
    this.socket = socket;
    socket.onopen = () => {
      this.backoff.reset();
      this.store.dispatch({ type: "socket-open" });
    };
    socket.onmessage = (ev) => {
      let parsed: StreamEvent;
      try {
        parsed = JSON.parse(String(ev.data)) as StreamEvent;
      } catch {
        return; // garbage on the stream is dropped, never fatal
      }
      this.store.dispatch(parsed);
    };
    socket.onerror = () => {
      // the close handler owns reconnection
    };
    socket.onclose = () => {
      this.store.dispatch({ type: "socket-closed" });
      this.scheduleReconnect();
    };
  }

  private scheduleReconnect(): void {
    if (this.stopped || this.timer !== null) return;
    const delay = this.backoff.nextDelay();
    this.timer = this.schedule(() => {
      this.timer = null;
      this.connect();
    }, delay);
  }

  close(): void {
    this.stopped = true;
    if (this.timer !== null) clearTimeout(this.timer);
    this.socket?.close();
  }
}
