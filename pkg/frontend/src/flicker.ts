// Frame-locked color alternation. Browsers cannot time sub-frame swaps, so
// the stimulus holds each color for a whole number of display frames and the
// achieved cadence is measured from the actual frame timestamps and reported
// back to the server for audit.

import type { Rgb8 } from "./api.js";
import { median } from "./refresh.js";

/** Alternation below this is visibly flickery for everyone; warn the operator. */
export const MIN_ALTERNATION_HZ = 25;

/**
 * Frames to hold each color: a full alternation cycle is two phases, so a
 * 60 Hz display at the default 30 Hz alternation swaps every frame.
 */
export function framesPerPhase(refreshHz: number, alternationHz: number): number {
  if (!(refreshHz > 0) || !(alternationHz > 0)) return 1;
  return Math.max(1, Math.round(refreshHz / (2 * alternationHz)));
}

export function alternationTooSlow(achievedHz: number | null): boolean {
  return achievedHz !== null && achievedHz < MIN_ALTERNATION_HZ;
}

export class FlickerEngine {
  private frameCount = 0;
  private phase = 0;
  private swapTimes: number[] = [];

  /** One color = static (catch) stimulus that never swaps. */
  constructor(
    readonly colors: readonly Rgb8[],
    readonly holdFrames: number,
  ) {
    if (colors.length === 0) throw new Error("engine needs at least one color");
    if (holdFrames < 1) throw new Error("holdFrames must be >= 1");
  }

  /** Advance one display frame; returns the color to show this frame. */
  frame(tMs: number): Rgb8 {
    if (
      this.colors.length > 1 &&
      this.frameCount > 0 &&
      this.frameCount % this.holdFrames === 0
    ) {
      this.phase = (this.phase + 1) % this.colors.length;
      this.swapTimes.push(tMs);
    }
    this.frameCount++;
    return this.colors[this.phase];
  }

  get swapCount(): number {
    return this.swapTimes.length;
  }

  get framesShown(): number {
    return this.frameCount;
  }

  swapIntervalsMs(): number[] {
    const out: number[] = [];
    for (let i = 1; i < this.swapTimes.length; i++) {
      out.push(this.swapTimes[i] - this.swapTimes[i - 1]);
    }
    return out;
  }

  /** Measured alternation frequency (full cycles/s); null until ≥2 intervals. */
  achievedAlternationHz(): number | null {
    const intervals = this.swapIntervalsMs();
    if (intervals.length < 2) return null;
    return 1000 / (2 * median(intervals));
  }
}
