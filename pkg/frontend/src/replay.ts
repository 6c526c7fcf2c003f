/**
 * Client-side replay transport: pause / single-step / speed over a fully
 * fetched event list. Pacing is purely a view concern layered on top of the
 * cursor API; the scheduler is injectable for deterministic tests.
 */

import { ParsedLine } from "./events.js";

export interface Scheduler {
  set(callback: () => void, ms: number): unknown;
  clear(handle: unknown): void;
}

const defaultScheduler: Scheduler = {
  set: (cb, ms) => setTimeout(cb, ms),
  clear: (handle) => clearTimeout(handle as ReturnType<typeof setTimeout>),
};

export class ReplayController {
  position = 0;
  playing = false;
  eventsPerSecond = 4;
  private handle: unknown = null;

  constructor(
    private events: ParsedLine[],
    private onAdvance: (batch: ParsedLine[], position: number, done: boolean) => void,
    private scheduler: Scheduler = defaultScheduler
  ) {}

  get length(): number {
    return this.events.length;
  }

  get done(): boolean {
    return this.position >= this.events.length;
  }

  /** Emit the next event; returns false when the replay is exhausted. */
  step(): boolean {
    if (this.done) {
      this.pause();
      return false;
    }
    const batch = [this.events[this.position]];
    this.position += 1;
    this.onAdvance(batch, this.position, this.done);
    if (this.done) this.pause();
    return !this.done;
  }

  play(eventsPerSecond?: number): void {
    if (eventsPerSecond !== undefined) {
      this.setSpeed(eventsPerSecond);
    }
    if (this.playing || this.done) return;
    this.playing = true;
    this.scheduleNext();
  }

  pause(): void {
    this.playing = false;
    if (this.handle !== null) {
      this.scheduler.clear(this.handle);
      this.handle = null;
    }
  }

  setSpeed(eventsPerSecond: number): void {
    this.eventsPerSecond = Math.max(0.1, eventsPerSecond);
  }

  /** Jump to the end, emitting everything that remains in one batch. */
  finish(): void {
    this.pause();
    if (this.done) return;
    const batch = this.events.slice(this.position);
    this.position = this.events.length;
    this.onAdvance(batch, this.position, true);
  }

  reset(): void {
    this.pause();
    this.position = 0;
  }

  private scheduleNext(): void {
    this.handle = this.scheduler.set(() => {
      if (!this.playing) return;
      this.step();
      if (this.playing && !this.done) {
        this.scheduleNext();
      }
    }, 1000 / this.eventsPerSecond);
  }
}
