// Display refresh-rate estimation from frame-callback timestamps.

export function median(values: number[]): number {
  if (values.length === 0) throw new Error("median of empty list");
  const sorted = [...values].sort((a, b) => a - b);
  const mid = Math.floor(sorted.length / 2);
  return sorted.length % 2 ? sorted[mid] : (sorted[mid - 1] + sorted[mid]) / 2;
}

export class RefreshEstimator {
  private deltas: number[] = [];
  private last: number | null = null;

  constructor(private readonly window = 120) {}

  frame(tMs: number): void {
    if (this.last !== null) {
      const dt = tMs - this.last;
      if (dt > 0) {
        this.deltas.push(dt);
        if (this.deltas.length > this.window) this.deltas.shift();
      }
    }
    this.last = tMs;
  }

  get sampleCount(): number {
    return this.deltas.length;
  }

  /** Median-based Hz estimate; null until enough frames were seen. */
  estimateHz(minSamples = 20): number | null {
    if (this.deltas.length < minSamples) return null;
    return 1000 / median(this.deltas);
  }
}
