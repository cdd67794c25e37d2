// Session flow: pull trials in server order, run each one, post the answer,
// insert break screens, and fetch the final report. All DOM work happens
// through hooks so the flow is testable without a browser.

import type { Report, Rgb8, SessionApi, SessionMeta } from "./api.js";
import { TrialRunner } from "./trial.js";

export type AppState = "idle" | "running" | "break" | "done";

export interface AppHooks {
  render(color: Rgb8): void;
  showBreak(): void;
  showDone(report: Report | null): void;
  warn(active: boolean): void;
  now(): number;
}

const BLACK: Rgb8 = [0, 0, 0];

export class ExperimentApp {
  state: AppState = "idle";
  meta: SessionMeta | null = null;
  runner: TrialRunner | null = null;
  private queue: number[] = [];

  constructor(
    private readonly api: SessionApi,
    private readonly refreshHz: number,
    private readonly hooks: AppHooks,
  ) {}

  /** Load session metadata and the first unanswered trial (resume-safe). */
  async start(): Promise<void> {
    this.meta = await this.api.session();
    const answered = new Set(this.meta.answered);
    this.queue = [];
    for (let i = 0; i < this.meta.n_trials; i++) {
      if (!answered.has(i)) this.queue.push(i);
    }
    await this.advance();
  }

  private async advance(): Promise<void> {
    this.hooks.render(BLACK);
    this.hooks.warn(false);
    const next = this.queue.shift();
    if (next === undefined) {
      await this.finish();
      return;
    }
    const payload = await this.api.trial(next);
    this.runner = new TrialRunner(payload, this.refreshHz, {
      render: (c) => this.hooks.render(c),
      now: () => this.hooks.now(),
    });
    this.state = "running";
  }

  private async finish(): Promise<void> {
    this.state = "done";
    this.runner = null;
    let report: Report | null = null;
    try {
      report = await this.api.report();
    } catch {
      report = null; // e.g. server says incomplete; nothing to show
    }
    this.hooks.showDone(report);
  }

  /** Display frame callback; drives the stimulus while a trial runs. */
  frame(tMs: number): void {
    if (this.state === "running" && this.runner) {
      this.runner.frame(tMs);
      this.hooks.warn(this.runner.cadenceWarning);
    }
  }

  /**
   * Keyboard input: F = flicker seen, J = no flicker, space continues from
   * a break. Resolves once the response is posted and the next screen is up.
   */
  async key(k: string): Promise<void> {
    const lower = k.toLowerCase();
    if (this.state === "running" && this.runner) {
      if (lower !== "f" && lower !== "j") return;
      const body = this.runner.answer(lower === "f");
      const pause = this.runner.payload.break_after;
      this.runner = null;
      await this.api.postResponse(body);
      if (pause && this.queue.length > 0) {
        this.state = "break";
        this.hooks.render(BLACK);
        this.hooks.showBreak();
      } else {
        await this.advance();
      }
    } else if (this.state === "break" && lower === " ") {
      await this.advance();
    }
  }
}
