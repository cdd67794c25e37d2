// Physical-size calibration. A lab monitor has a known pixel pitch; an
// arbitrary visitor's display does not, so the user drags an on-screen ruler
// until it matches a real object (a standard credit card by default).

export const CREDIT_CARD_WIDTH_CM = 8.56;

export interface DisplayCalibration {
  pxPerCm: number;
  measuredRefreshHz: number | null;
}

export function pxPerCmFromRuler(
  rulerPx: number,
  objectWidthCm: number = CREDIT_CARD_WIDTH_CM,
): number {
  if (!(rulerPx > 0) || !(objectWidthCm > 0)) {
    throw new Error("ruler and object sizes must be positive");
  }
  return rulerPx / objectWidthCm;
}

/** Stimulus square edge in device pixels. */
export function squarePx(squareCm: number, pxPerCm: number): number {
  return Math.round(squareCm * pxPerCm);
}
