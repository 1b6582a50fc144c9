import { describe, expect, it } from "vitest";

import { Backoff } from "../src/backoff";
import { StreamClient, type SocketLike } from "../src/client";
import { Store } from "../src/store";

class FakeSocket implements SocketLike {
  onopen: ((ev?: unknown) => void) | null = null;
  onmessage: ((ev: { data: unknown }) => void) | null = null;
  onclose: ((ev?: unknown) => void) | null = null;
  onerror: ((ev?: unknown) => void) | null = null;
  closed = false;

  close(): void {
    this.closed = true;
  }
}

describe("Backoff", () => {
  it("doubles from the base and caps", () => {
    const b = new Backoff(500, 10_000);
    const delays = [0, 1, 2, 3, 4, 5, 6].map(() => b.nextDelay());
    expect(delays).toEqual([500, 1000, 2000, 4000, 8000, 10000, 10000]);
    b.reset();
    expect(b.nextDelay()).toBe(500);
  });
});

describe("StreamClient", () => {
  function setup() {
    const sockets: FakeSocket[] = [];
    const scheduled: { fn: () => void; ms: number }[] = [];
    const store = new Store();
    const client = new StreamClient(
      "ws://x/api/stream",
      store,
      () => {
        const s = new FakeSocket();
        sockets.push(s);
        return s;
      },
      (fn, ms) => {
        scheduled.push({ fn, ms });
        return 0 as unknown as ReturnType<typeof setTimeout>;
      },
    );
    return { sockets, scheduled, store, client };
  }

  it("dispatches parsed stream events into the store", () => {
    const { sockets, store, client } = setup();
    client.connect();
    sockets[0].onopen?.();
    expect(store.state.connection).toBe("open");
    sockets[0].onmessage?.({
      data: JSON.stringify({
        type: "alarm", status: "ACTIVE", cause: "HMS_LEFT",
        raised_at: 1, lockdown_issued: true, signal_count: 1,
      }),
    });
    expect(store.state.bannerVisible).toBe(true);
  });

  it("ignores unparseable payloads", () => {
    const { sockets, store, client } = setup();
    client.connect();
    sockets[0].onopen?.();
    sockets[0].onmessage?.({ data: "{nope" });
    expect(store.state.connection).toBe("open");
  });

  it("reconnects with growing delays and resets on success", () => {
    const { sockets, scheduled, store, client } = setup();
    client.connect();
    sockets[0].onclose?.();
    expect(store.state.connection).toBe("closed");
    expect(scheduled).toHaveLength(1);
    expect(scheduled[0].ms).toBe(500);
    scheduled[0].fn(); // reconnect attempt 2
    sockets[1].onclose?.();
    expect(scheduled[1].ms).toBe(1000);
    scheduled[1].fn();
    sockets[2].onopen?.(); // success resets the ladder
    sockets[2].onclose?.();
    expect(scheduled[2].ms).toBe(500);
  });

  it("stops reconnecting once closed", () => {
    const { sockets, scheduled, client } = setup();
    client.connect();
    client.close();
    expect(sockets[0].closed).toBe(true);
    sockets[0].onclose?.();
    expect(scheduled).toHaveLength(0);
  });
});
