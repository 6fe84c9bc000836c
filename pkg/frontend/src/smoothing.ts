/** Display-only smoothing: trailing moving average over 4 ticks.
 *
 * Purely cosmetic, off by default, never written back to the service
 * or to any state other than the rendered pixels.
 */

export const SMOOTHING_WINDOW = 4;

export function movingAverage(
  values: number[],
  window: number = SMOOTHING_WINDOW,
): number[] {
  if (window <= 1) return [...values];
  const out: number[] = new Array(values.length);
  let sum = 0;
  for (let i = 0; i < values.length; i++) {
    sum += values[i];
    if (i >= window) {
      sum -= values[i - window];
    }
    out[i] = sum / Math.min(i + 1, window);
  }
  return out;
}
