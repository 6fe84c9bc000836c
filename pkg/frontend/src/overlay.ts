/** Face-box overlay: nearest-timestamp lookup into persisted tracks. */

import { PersonTrack, TrackBox } from "./types";

export interface OverlayBox {
  personId: number;
  box: TrackBox;
}

/**
 * The box to draw for each selected person at playhead time t: the
 * track entry with|t - box.t| minimal, hidden entirely when the
 * nearest entry is further away than `toleranceS` (person absent).
 */
export function boxesAt(
  tracks: PersonTrack[],
  t: number,
  selectedIds: (id: number) => boolean,
  toleranceS = 0.5,
): OverlayBox[] {
  const out: OverlayBox[] = [];
  for (const track of tracks) {
    if (!selectedIds(track.person_id) || track.boxes.length === 0) continue;
    const nearest = nearestBox(track.boxes, t);
    if (Math.abs(nearest.t - t) <= toleranceS) {
      out.push({ personId: track.person_id, box: nearest });
    }
  }
  return out;
}

function nearestBox(boxes: TrackBox[], t: number): TrackBox {
  // boxes are time-ordered; binary search for the insertion point.
  let lo = 0;
  let hi = boxes.length - 1;
  while (lo < hi) {
    const mid = (lo + hi) >> 1;
    if (boxes[mid].t < t) lo = mid + 1;
    else hi = mid;
  }
  if (lo > 0 && Math.abs(boxes[lo - 1].t - t) <= Math.abs(boxes[lo].t - t)) {
    return boxes[lo - 1];
  }
  return boxes[lo];
}

/** Scale a media-pixel box to display coordinates. */
export function scaleBox(
  box: TrackBox,
  mediaW: number,
  mediaH: number,
  displayW: number,
  displayH: number,
): { x: number; y: number; w: number; h: number } {
  const sx = displayW / mediaW;
  const sy = displayH / mediaH;
  return { x: box.x * sx, y: box.y * sy, w: box.w * sx, h: box.h * sy };
}

export const PERSON_COLORS = [
  "#4fb5c9",
  "#e88b3a",
  "#7cb65b",
  "#d1493f",
  "#8e5bb6",
  "#f6c445",
];

export function personColor(personId: number): string {
  return PERSON_COLORS[personId % PERSON_COLORS.length];
}
