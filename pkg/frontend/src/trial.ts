// One trial: drive the flicker engine from display frames, time the
// response, and assemble the body to post.

import type { ResponseBody, Rgb8, TrialPayload } from "./api.js";
import { FlickerEngine, alternationTooSlow, framesPerPhase } from "./flicker.js";

export interface TrialHooks {
  render(color: Rgb8): void;
  now(): number;
}

export class TrialRunner {
  readonly engine: FlickerEngine;
  private startT: number | null = null;
  private answered = false;

  constructor(
    readonly payload: TrialPayload,
    refreshHz: number,
    private readonly hooks: TrialHooks,
  ) {
    const colors: Rgb8[] =
      payload.kind === "catch"
        ? [payload.catch as Rgb8]
        : [payload.plus as Rgb8, payload.minus as Rgb8];
    if (colors.some((c) => !c)) {
      throw new Error(`trial ${payload.trial_index} payload is missing its colors`);
    }
    this.engine = new FlickerEngine(
      colors,
      framesPerPhase(refreshHz, payload.alternation_hz),
    );
  }

  /** Feed one display frame. No-op once answered. */
  frame(tMs: number): void {
    if (this.answered) return;
    if (this.startT === null) this.startT = tMs;
    this.hooks.render(this.engine.frame(tMs));
  }

  get isAnswered(): boolean {
    return this.answered;
  }

  /** True when the measured cadence fell below the fusion floor. */
  get cadenceWarning(): boolean {
    return (
      this.payload.kind === "vibration" &&
      alternationTooSlow(this.engine.achievedAlternationHz())
    );
  }

  /** Lock in the observer's answer and build the response to post. */
  answer(detected: boolean): ResponseBody {
    if (this.answered) throw new Error("trial already answered");
    this.answered = true;
    const now = this.hooks.now();
    const responseMs = Math.max(0, Math.round(now - (this.startT ?? now)));
    const body: ResponseBody = {
      trial_index: this.payload.trial_index,
      detected,
      response_ms: responseMs,
    };
    const achieved = this.engine.achievedAlternationHz();
    if (achieved !== null) body.achieved_hz = achieved;
    return body;
  }
}
