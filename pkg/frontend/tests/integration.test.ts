/**
 * Integration tests against an intercepted service: the fixture session
 * renders two person lanes, deselecting a person re-queries and the
 * group curve becomes the remaining person's values, and every number
 * on screen is traceable to an intercepted response field (the UI adds
 * no arithmetic of its own).
 */

import fs from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api";
import { App } from "../src/main";
import {
  EMOTION_CHANNELS,
  EmotionScores,
  PersonTrack,
  SessionMeta,
  TickRecord,
} from "../src/types";

const TICKS = 12;
const PERSONS = [0, 1];

function personScores(pid: number, tick: number): EmotionScores {
  const out = {} as EmotionScores;
  EMOTION_CHANNELS.forEach((channel, i) => {
    // Deterministic, person- and time-dependent, inside [0,1].
    out[channel] = Math.abs(Math.sin(1 + pid * 7 + tick * 1.3 + i * 0.7));
  });
  return out;
}

function personVA(pid: number, tick: number) {
  return {
    valence: Math.sin(pid + tick * 0.9),
    arousal: Math.cos(pid * 2 + tick * 0.4),
  };
}

/** Visual-only mock of the timeline endpoint's fusion semantics. */
function mockTimeline(selectedPersons: number[], visual: boolean): TickRecord[] {
  const records: TickRecord[] = [];
  for (let tick = 0; tick < TICKS; tick++) {
    const persons: TickRecord["persons"] = {};
    if (visual) {
      for (const pid of selectedPersons) {
        persons[String(pid)] = {
          emotions: personScores(pid, tick),
          va: personVA(pid, tick),
          present: true,
        };
      }
    }
    const contributing = visual ? selectedPersons : [];
    const emotions = {} as EmotionScores;
    for (const channel of EMOTION_CHANNELS) {
      emotions[channel] = contributing.length
        ? contributing
            .map((pid) => personScores(pid, tick)[channel])
            .reduce((a, b) => a + b, 0) / contributing.length
        : channel === "none"
          ? 1
          : 0;
    }
    const va = contributing.length
      ? {
          valence:
            contributing.map((p) => personVA(p, tick).valence).reduce((a, b) => a + b) /
            contributing.length,
          arousal:
            contributing.map((p) => personVA(p, tick).arousal).reduce((a, b) => a + b) /
            contributing.length,
        }
      : { valence: 0, arousal: 0 };
    records.push({
      tick,
      t: tick * 0.25,
      group: {
        emotions,
        va,
        modalities: contributing.length ? ["visual"] : [],
      },
      persons,
    });
  }
  return records;
}

const meta: SessionMeta = {
  session_id: "fixture",
  status: "done",
  language: "en",
  created_at: "2026-01-01T00:00:00Z",
  duration_s: 3.0,
  fps: 25.0,
  width: 160,
  height: 120,
  stages: { ingest: 1, visual: 1, audio: 1, linguistic: 1, fuse: 1 },
  persons: PERSONS,
  modalities: ["visual"],
  ticks: TICKS,
  config: { tick_s: 0.25 },
};

const tracks: PersonTrack[] = PERSONS.map((pid) => ({
  person_id: pid,
  boxes: Array.from({ length: 75 }, (_, i) => ({
    t: i / 25,
    x: 4 + i,
    y: pid * 60 + 16,
    w: 28,
    h: 28,
  })),
}));

interface Intercepted {
  url: string;
  response: unknown;
}

function makeFetch(log: Intercepted[]) {
  return async (input: string): Promise<Response> => {
    const url = new URL(input, "http://test");
    let payload: unknown;
    if (url.pathname === "/api/sessions/fixture") {
      payload = meta;
    } else if (url.pathname === "/api/sessions/fixture/persons") {
      payload = tracks;
    } else if (url.pathname === "/api/sessions/fixture/timeline") {
      const personsParam = url.searchParams.get("persons");
      const selected = personsParam
        ? personsParam.split(",").map((p) => parseInt(p, 10))
        : PERSONS;
      const modalities = (url.searchParams.get("modalities") ?? "").split(",");
      payload = mockTimeline(selected, modalities.includes("visual"));
    } else {
      return new Response(JSON.stringify({ detail: "unknown session" }), {
        status: 404,
      });
    }
    log.push({ url: input, response: payload });
    return new Response(JSON.stringify(payload), { status: 200 });
  };
}

async function flush(): Promise<void> {
  for (let i = 0; i < 4; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}

function loadDom(): void {
  const here = path.dirname(fileURLToPath(import.meta.url));
  const html = fs.readFileSync(path.resolve(here, "../index.html"), "utf-8");
  const body = html.slice(html.indexOf("<body>") + 6, html.indexOf("</body>"));
  document.body.innerHTML = body.replace(/<script[\s\S]*?<\/script>/g, "");
}

function readout(selector: string): string[] {
  return [...document.querySelectorAll<HTMLElement>(selector)].map(
    (node) => node.dataset.value ?? "",
  );
}

describe("console integration (intercepted service)", () => {
  let log: Intercepted[];
  let app: App;

  beforeEach(async () => {
    loadDom();
    log = [];
    app = new App(new ApiClient("", makeFetch(log)));
    app.start();
    await app.loadSession("fixture");
    await flush();
  });

  it("renders two person lanes for the fixture session", () => {
    const mode = document.getElementById("chart-mode") as HTMLSelectElement;
    mode.value = "per-person-lanes";
    mode.dispatchEvent(new Event("change"));
    const lanes = document.querySelectorAll("#chart g.person-lane");
    expect(lanes).toHaveLength(2);
    for (const lane of lanes) {
      expect(lane.querySelectorAll("path").length).toBeGreaterThan(0);
    }
    expect(document.querySelectorAll("#person-chips .person-chip")).toHaveLength(2);
  });

  it("deselecting one person makes the group curve the remaining person's values", async () => {
    const laneBefore = () => {
      const mode = document.getElementById("chart-mode") as HTMLSelectElement;
      mode.value = "per-person-lanes";
      mode.dispatchEvent(new Event("change"));
      return document
        .querySelector('#chart g.person-lane[data-person-id="0"] path:not(.lane-bg)')
        ?.getAttribute("d");
    };
    const person0PathBefore = laneBefore();

    const chip = document.querySelector<HTMLButtonElement>(
      '#person-chips [data-person-id="1"]',
    )!;
    chip.click();
    await flush();

    // Person 0's lane is visually unchanged by deselecting person 1.
    expect(laneBefore()).toBe(person0PathBefore);

    // The re-query asked the service for persons=0 only.
    const lastTimeline = log.filter((e) => e.url.includes("/timeline")).at(-1)!;
    expect(lastTimeline.url).toContain("persons=0");

    // At every tick the displayed group equals person 0's joy exactly.
    const scrub = document.getElementById("scrub") as HTMLInputElement;
    for (let tick = 0; tick < TICKS; tick++) {
      scrub.value = String(tick * 0.25);
      scrub.dispatchEvent(new Event("input"));
      const groupJoy = readout(".readout-group .readout-joy b")[0];
      const personJoy = readout(".readout-person .readout-person-joy b")[0];
      expect(groupJoy).toBe(personJoy);
      expect(Number(groupJoy)).toBe(personScores(0, tick).joy);
    }
  });

  it("every displayed number matches the intercepted service response", () => {
    const scrub = document.getElementById("scrub") as HTMLInputElement;
    scrub.value = "1.0"; // tick 4
    scrub.dispatchEvent(new Event("input"));

    const lastTimeline = log
      .filter((e) => e.url.includes("/timeline"))
      .at(-1)!.response as TickRecord[];
    const record = lastTimeline[4];

    for (const channel of EMOTION_CHANNELS) {
      const shown = readout(`.readout-group .readout-${channel} b`)[0];
      expect(shown).toBe(String(record.group.emotions[channel]));
    }
    expect(readout(".readout-valence b")[0]).toBe(
      String(record.group.va.valence),
    );
    expect(readout(".readout-arousal b")[0]).toBe(
      String(record.group.va.arousal),
    );
    for (const pid of PERSONS) {
      const row = document.querySelector(
        `.readout-person[data-person-id="${pid}"]`,
      )!;
      const joy = row.querySelector<HTMLElement>(".readout-person-joy b")!;
      expect(joy.dataset.value).toBe(
        String(record.persons[String(pid)].emotions.joy),
      );
    }
  });

  it("blocks removing the last modality", async () => {
    const click = async (modality: string) => {
      document
        .querySelector<HTMLButtonElement>(
          `#modality-chips [data-modality="${modality}"]`,
        )!
        .click();
      await flush();
    };
    await click("audio");
    await click("linguistic");
    const requestsBefore = log.length;
    await click("visual"); // last one: must be blocked
    expect(document.getElementById("modality-note")!.hidden).toBe(false);
    expect(log.length).toBe(requestsBefore); // no re-query happened
    const chips = document.querySelectorAll("#modality-chips .active");
    expect([...chips].map((c) => (c as HTMLElement).dataset.modality)).toEqual([
      "visual",
    ]);
  });

  it("shows the error screen with retry for unknown sessions", async () => {
    await app.loadSession("missing");
    await flush();
    expect(document.getElementById("screen-error")!.hidden).toBe(false);
    expect(
      document.getElementById("error-message")!.textContent,
    ).toContain("404");
  });
});
