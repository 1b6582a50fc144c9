/** Exponential reconnect backoff: 0.5s doubling to a 10s ceiling. */

export class Backoff {
  private attempt = 0;

  constructor(
    private readonly baseMs: number = 500,
    private readonly capMs: number = 10_000,
  ) {}

  nextDelay(): number {
    const delay = Math.min(this.baseMs * 2 ** this.attempt, this.capMs);
    this.attempt += 1;
    return delay;
  }

  reset(): void {
    this.attempt = 0;
  }
}
