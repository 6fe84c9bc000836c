/** Pure chart geometry: timeline records in, SVG path strings out.
 *
 * No DOM access here, so every mapping from service numbers to pixels
 * is unit-testable. Values are never recomputed, only positioned:
 * emotion/VA math stays on the server.
 */

import { EMOTION_CHANNELS, EmotionChannel, TickRecord } from "./types";

export const CHANNEL_COLORS: Record<EmotionChannel, string> = {
  joy: "#f6c445",
  trust: "#7cb65b",
  fear: "#5f7f3b",
  surprise: "#4fb5c9",
  sadness: "#4f6fc9",
  anticipation: "#e88b3a",
  anger: "#d1493f",
  disgust: "#8e5bb6",
  none: "#9aa0a6",
};

export interface AreaPath {
  channel: EmotionChannel;
  d: string;
  color: string;
}

function x(i: number, n: number, width: number): number {
  return n <= 1 ? 0 : (i / (n - 1)) * width;
}

function fmt(v: number): string {
  return Number.isInteger(v) ? v.toString() : v.toFixed(2);
}

/** Stacked area paths for the nine group emotion channels. */
export function stackedEmotionPaths(
  series: Record<EmotionChannel, number[]>,
  width: number,
  height: number,
): AreaPath[] {
  const n = series.joy.length;
  if (n === 0) return [];
  const totals = new Array(n).fill(0);
  for (const channel of EMOTION_CHANNELS) {
    for (let i = 0; i < n; i++) totals[i] += series[channel][i];
  }
  const yMax = Math.max(1, ...totals);
  const toY = (v: number) => height - (v / yMax) * height;

  const paths: AreaPath[] = [];
  const base = new Array(n).fill(0);
  for (const channel of EMOTION_CHANNELS) {
    const top = base.map((b, i) => b + series[channel][i]);
    const upper = top.map((v, i) => `${fmt(x(i, n, width))},${fmt(toY(v))}`);
    const lower = base
      .map((v, i) => `${fmt(x(i, n, width))},${fmt(toY(v))}`)
      .reverse();
    paths.push({
      channel,
      d: `M${upper.join(" L")} L${lower.join(" L")} Z`,
      color: CHANNEL_COLORS[channel],
    });
    for (let i = 0; i < n; i++) base[i] = top[i];
  }
  return paths;
}

export interface LaneSegment {
  d: string;
}

export interface PersonLane {
  personId: number;
  yOffset: number;
  laneHeight: number;
  segments: LaneSegment[];
}

/**
 * One lane per person showing a single emotion channel over time;
 * ticks where the person is absent break the line into gap-separated
 * segments.
 */
export function personLanes(
  records: TickRecord[],
  personIds: number[],
  channel: EmotionChannel,
  width: number,
  laneHeight: number,
  laneGap = 8,
): PersonLane[] {
  const n = records.length;
  return personIds.map((personId, lane) => {
    const yOffset = lane * (laneHeight + laneGap);
    const segments: LaneSegment[] = [];
    let current: string[] = [];
    records.forEach((record, i) => {
      const value = record.persons[String(personId)];
      if (value?.present) {
        const px = fmt(x(i, n, width));
        const py = fmt(yOffset + laneHeight - value.emotions[channel] * laneHeight);
        current.push(`${px},${py}`);
      } else if (current.length > 0) {
        segments.push({ d: `M${current.join(" L")}` });
        current = [];
      }
    });
    if (current.length > 0) {
      segments.push({ d: `M${current.join(" L")}` });
    }
    return { personId, yOffset, laneHeight, segments };
  });
}

/** Group curve for one channel as a plain line path. */
export function groupLine(
  values: number[],
  width: number,
  height: number,
): string {
  if (values.length === 0) return "";
  const points = values.map(
    (v, i) => `${fmt(x(i, values.length, width))},${fmt(height - v * height)}`,
  );
  return `M${points.join(" L")}`;
}

export interface VATrajectory {
  path: string;
  /** Position of the playhead sample, if any records exist. */
  cursor: { cx: number; cy: number } | null;
}

/** Valence (x) / arousal (y) trajectory inside a centered square. */
export function vaTrajectory(
  records: TickRecord[],
  size: number,
  playheadIndex: number,
): VATrajectory {
  if (records.length === 0) return { path: "", cursor: null };
  const toX = (v: number) => ((v + 1) / 2) * size;
  const toY = (a: number) => size - ((a + 1) / 2) * size;
  const points = records.map(
    (r) => `${fmt(toX(r.group.va.valence))},${fmt(toY(r.group.va.arousal))}`,
  );
  const at = records[Math.max(0, Math.min(playheadIndex, records.length - 1))];
  return {
    path: `M${points.join(" L")}`,
    cursor: { cx: toX(at.group.va.valence), cy: toY(at.group.va.arousal) },
  };
}

/** X pixel of the chart cursor for a tick index. */
export function cursorX(tickIndex: number, tickCount: number, width: number): number {
  return x(Math.max(0, Math.min(tickIndex, tickCount - 1)), tickCount, width);
}

/** Per-channel series extracted from records (group values). */
export function groupSeries(
  records: TickRecord[],
): Record<EmotionChannel, number[]> {
  const out = Object.fromEntries(
    EMOTION_CHANNELS.map((c) => [c, [] as number[]]),
  ) as Record<EmotionChannel, number[]>;
  for (const record of records) {
    for (const channel of EMOTION_CHANNELS) {
      out[channel].push(record.group.emotions[channel]);
    }
  }
  return out;
}
