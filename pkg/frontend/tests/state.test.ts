import { describe, expect, it } from "vitest";

import {
  clampPlayhead,
  initialState,
  selectionFromQuery,
  selectionToQuery,
  tickIndexAt,
  toggleModality,
  togglePerson,
  Selection,
} from "../src/state";

describe("selection query round-trip", () => {
  it("serializes to exactly the timeline query parameters", () => {
    const selection: Selection = {
      persons: [2, 0],
      modalities: ["visual", "audio"],
    };
    expect(selectionToQuery(selection).toString()).toBe(
      "persons=0%2C2&modalities=visual%2Caudio",
    );
    expect(selectionToQuery(selection).get("persons")).toBe("0,2");
    expect(selectionToQuery(selection).get("modalities")).toBe("visual,audio");
  });

  it("omits persons when everyone is selected", () => {
    const selection: Selection = {
      persons: [],
      modalities: ["visual", "audio", "linguistic"],
    };
    const params = selectionToQuery(selection);
    expect(params.has("persons")).toBe(false);
    expect(params.get("modalities")).toBe("visual,audio,linguistic");
  });

  it("round-trips through the query string", () => {
    const selection: Selection = { persons: [1, 3], modalities: ["linguistic"] };
    const back = selectionFromQuery(selectionToQuery(selection));
    expect(back.persons).toEqual([1, 3]);
    expect(back.modalities).toEqual(["linguistic"]);
  });

  it("keeps modalities in canonical order regardless of toggle order", () => {
    let selection: Selection = { persons: [], modalities: ["linguistic"] };
    selection = toggleModality(selection, "visual")!;
    expect(selection.modalities).toEqual(["visual", "linguistic"]);
    expect(selectionToQuery(selection).get("modalities")).toBe(
      "visual,linguistic",
    );
  });
});

describe("togglePerson", () => {
  it("materializes the remaining ids when deselecting from all", () => {
    const next = togglePerson(initialState().selection, 1, [0, 1]);
    expect(next.persons).toEqual([0]);
  });

  it("re-adds a deselected person", () => {
    const selection: Selection = { persons: [0], modalities: ["visual"] };
    expect(togglePerson(selection, 1, [0, 1]).persons).toEqual([0, 1]);
  });
});

describe("toggleModality", () => {
  it("blocks removing the last modality", () => {
    const selection: Selection = { persons: [], modalities: ["audio"] };
    expect(toggleModality(selection, "audio")).toBeNull();
  });

  it("removes a non-last modality", () => {
    const selection: Selection = {
      persons: [],
      modalities: ["visual", "audio"],
    };
    expect(toggleModality(selection, "audio")!.modalities).toEqual(["visual"]);
  });
});

describe("playhead", () => {
  it("clamps into [0, duration]", () => {
    expect(clampPlayhead(-3, 10)).toBe(0);
    expect(clampPlayhead(4.5, 10)).toBe(4.5);
    expect(clampPlayhead(99, 10)).toBe(10);
    expect(clampPlayhead(NaN, 10)).toBe(0);
  });

  it("maps time to a tick index within range", () => {
    expect(tickIndexAt(0, 0.25, 12)).toBe(0);
    expect(tickIndexAt(1.1, 0.25, 12)).toBe(4);
    expect(tickIndexAt(3.0, 0.25, 12)).toBe(11); // clamped to last tick
  });
});
