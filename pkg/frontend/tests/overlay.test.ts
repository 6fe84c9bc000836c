import { describe, expect, it } from "vitest";

import { boxesAt, scaleBox } from "../src/overlay";
import { PersonTrack } from "../src/types";

const tracks: PersonTrack[] = [
  {
    person_id: 0,
    boxes: [
      { t: 0.0, x: 10, y: 10, w: 20, h: 20 },
      { t: 0.04, x: 11, y: 10, w: 20, h: 20 },
      { t: 0.08, x: 12, y: 10, w: 20, h: 20 },
    ],
  },
  {
    person_id: 1,
    boxes: [{ t: 5.0, x: 50, y: 50, w: 20, h: 20 }],
  },
];

describe("boxesAt", () => {
  it("picks the nearest-timestamp box per person", () => {
    const boxes = boxesAt(tracks, 0.05, () => true);
    const p0 = boxes.find((b) => b.personId === 0)!;
    expect(p0.box.t).toBe(0.04);
  });

  it("hides persons whose nearest box is too far away", () => {
    const boxes = boxesAt(tracks, 0.05, () => true);
    expect(boxes.some((b) => b.personId === 1)).toBe(false);
    const later = boxesAt(tracks, 5.1, () => true);
    expect(later.some((b) => b.personId === 1)).toBe(true);
  });

  it("respects the person selection", () => {
    const boxes = boxesAt(tracks, 0.0, (id) => id === 1);
    expect(boxes).toHaveLength(0);
  });
});

describe("scaleBox", () => {
  it("scales media pixels to display pixels", () => {
    const scaled = scaleBox(
      { t: 0, x: 10, y: 20, w: 40, h: 30 }, 160, 120, 320, 240,
    );
    expect(scaled).toEqual({ x: 20, y: 40, w: 80, h: 60 });
  });
});
