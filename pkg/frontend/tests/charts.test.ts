import { describe, expect, it } from "vitest";

import {
  groupLine,
  groupSeries,
  personLanes,
  stackedEmotionPaths,
  vaTrajectory,
} from "../src/charts";
import { movingAverage } from "../src/smoothing";
import { EMOTION_CHANNELS, EmotionScores, TickRecord } from "../src/types";

export function scores(joy: number, rest = 0): EmotionScores {
  const out = Object.fromEntries(
    EMOTION_CHANNELS.map((c) => [c, rest]),
  ) as EmotionScores;
  out.joy = joy;
  return out;
}

function record(
  tick: number,
  groupJoy: number,
  persons: Record<string, { joy: number; present: boolean }>,
): TickRecord {
  return {
    tick,
    t: tick * 0.25,
    group: {
      emotions: scores(groupJoy),
      va: { valence: groupJoy - 0.5, arousal: 0.25 },
      modalities: ["visual"],
    },
    persons: Object.fromEntries(
      Object.entries(persons).map(([pid, p]) => [
        pid,
        {
          emotions: scores(p.joy),
          va: { valence: 0, arousal: 0 },
          present: p.present,
        },
      ]),
    ),
  };
}

describe("personLanes", () => {
  const records = [
    record(0, 0.5, { "0": { joy: 0.2, present: true }, "1": { joy: 0.8, present: true } }),
    record(1, 0.5, { "0": { joy: 0.4, present: true }, "1": { joy: 0.6, present: false } }),
    record(2, 0.5, { "0": { joy: 0.6, present: true }, "1": { joy: 0.4, present: true } }),
  ];

  it("renders one lane per person", () => {
    const lanes = personLanes(records, [0, 1], "joy", 100, 40);
    expect(lanes).toHaveLength(2);
    expect(lanes.map((l) => l.personId)).toEqual([0, 1]);
    expect(lanes[1].yOffset).toBeGreaterThan(lanes[0].yOffset);
  });

  it("breaks segments where the person is absent", () => {
    const lanes = personLanes(records, [0, 1], "joy", 100, 40);
    expect(lanes[0].segments).toHaveLength(1); // continuous
    expect(lanes[1].segments).toHaveLength(2); // gap at tick 1
  });

  it("maps values into the lane's own band", () => {
    const lanes = personLanes(records, [0], "joy", 100, 40);
    // joy 0.2 -> y = 40 - 0.2*40 = 32 at x=0
    expect(lanes[0].segments[0].d.startsWith("M0,32")).toBe(true);
  });
});

describe("stackedEmotionPaths", () => {
  it("emits one closed area per channel, stacked in canonical order", () => {
    const series = groupSeries([
      record(0, 0.5, {}),
      record(1, 0.7, {}),
    ]);
    const areas = stackedEmotionPaths(series, 100, 100);
    expect(areas.map((a) => a.channel)).toEqual([...EMOTION_CHANNELS]);
    for (const area of areas) {
      expect(area.d.startsWith("M")).toBe(true);
      expect(area.d.endsWith("Z")).toBe(true);
    }
  });

  it("returns nothing for an empty timeline", () => {
    expect(stackedEmotionPaths(groupSeries([]), 100, 100)).toEqual([]);
  });
});

describe("vaTrajectory", () => {
  it("maps the VA square onto pixels with arousal up", () => {
    const records = [record(0, 0.5, {}), record(1, 1.0, {})];
    // valence 0, arousal 0.25 -> x=center, y above center
    const { path, cursor } = vaTrajectory(records, 200, 0);
    expect(path.startsWith("M100,75")).toBe(true);
    expect(cursor).not.toBeNull();
    expect(cursor!.cx).toBe(100);
    expect(cursor!.cy).toBe(75);
  });
});

describe("groupLine", () => {
  it("draws a line through the group values", () => {
    expect(groupLine([0, 1], 100, 50)).toBe("M0,50 L100,0");
  });
});

describe("movingAverage", () => {
  it("averages over a trailing window of 4", () => {
    expect(movingAverage([1, 1, 1, 1, 1])).toEqual([1, 1, 1, 1, 1]);
    expect(movingAverage([0, 4, 0, 0, 0])).toEqual([0, 2, 4 / 3, 1, 1]);
  });

  it("window 1 is the identity", () => {
    expect(movingAverage([3, 1, 2], 1)).toEqual([3, 1, 2]);
  });
});
