/** DOM rendering, framework-free.
 *
 * Renderers take data straight from service responses plus the view
 * state; every numeric readout is written both as display text and as
 * a `data-value` attribute holding the exact response value, so tests
 * (and curious users) can trace each number to the service payload.
 */

import {
  CHANNEL_COLORS,
  cursorX,
  groupSeries,
  personLanes,
  stackedEmotionPaths,
  vaTrajectory,
} from "./charts";
import { movingAverage } from "./smoothing";
import { isPersonSelected, Selection, tickIndexAt, ViewState } from "./state";
import { boxesAt, personColor, scaleBox } from "./overlay";
import {
  EMOTION_CHANNELS,
  Modality,
  MODALITIES,
  PersonTrack,
  TickRecord,
} from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

export const CHART_WIDTH = 860;
export const CHART_HEIGHT = 260;

function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number>,
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    el.setAttribute(key, String(value));
  }
  return el;
}

export function renderPersonChips(
  container: HTMLElement,
  personIds: number[],
  selection: Selection,
  onToggle: (personId: number) => void,
): void {
  container.replaceChildren();
  for (const personId of personIds) {
    const chip = document.createElement("button");
    chip.type = "button";
    chip.className = "chip person-chip";
    chip.dataset.personId = String(personId);
    chip.style.borderColor = personColor(personId);
    const active = isPersonSelected(selection, personId);
    chip.classList.toggle("active", active);
    chip.setAttribute("aria-pressed", String(active));
    chip.textContent = `person ${personId}`;
    chip.addEventListener("click", () => onToggle(personId));
    container.append(chip);
  }
}

export function renderModalityChips(
  container: HTMLElement,
  selection: Selection,
  onToggle: (modality: Modality) => void,
): void {
  container.replaceChildren();
  for (const modality of MODALITIES) {
    const chip = document.createElement("button");
    chip.type = "button";
    chip.className = "chip modality-chip";
    chip.dataset.modality = modality;
    const active = selection.modalities.includes(modality);
    chip.classList.toggle("active", active);
    chip.setAttribute("aria-pressed", String(active));
    chip.textContent = modality;
    chip.addEventListener("click", () => onToggle(modality));
    container.append(chip);
  }
}

function maybeSmooth(values: number[], smoothing: boolean): number[] {
  return smoothing ? movingAverage(values) : values;
}

export function renderCharts(
  svg: SVGSVGElement,
  records: TickRecord[],
  personIds: number[],
  state: ViewState,
): void {
  svg.replaceChildren();
  svg.setAttribute("viewBox", `0 0 ${CHART_WIDTH} ${CHART_HEIGHT}`);
  if (records.length === 0) return;
  const playheadIndex = tickIndexAt(
    state.playheadS,
    records.length > 1 ? records[1].t - records[0].t : 0.25,
    records.length,
  );

  if (state.chartMode === "stacked-emotions") {
    const series = groupSeries(records);
    const smoothed = Object.fromEntries(
      EMOTION_CHANNELS.map((c) => [c, maybeSmooth(series[c], state.smoothing)]),
    ) as typeof series;
    for (const area of stackedEmotionPaths(smoothed, CHART_WIDTH, CHART_HEIGHT)) {
      svg.append(
        svgEl("path", {
          d: area.d,
          fill: area.color,
          "fill-opacity": 0.85,
          class: `area-${area.channel}`,
        }),
      );
    }
  } else if (state.chartMode === "per-person-lanes") {
    // Lanes are laid out for every session person, selected or not, so
    // toggling one person never re-flows the others' geometry.
    const laneHeight =
      personIds.length > 0
        ? Math.max(
            24,
            (CHART_HEIGHT - 8 * (personIds.length - 1)) /
              Math.max(1, personIds.length),
          )
        : CHART_HEIGHT;
    for (const lane of personLanes(
      records,
      personIds,
      "joy",
      CHART_WIDTH,
      laneHeight,
    )) {
      const selected = isPersonSelected(state.selection, lane.personId);
      const group = svgEl("g", {
        class: `person-lane${selected ? "" : " deselected"}`,
        "data-person-id": lane.personId,
      });
      group.append(
        svgEl("rect", {
          x: 0,
          y: lane.yOffset,
          width: CHART_WIDTH,
          height: lane.laneHeight,
          class: "lane-bg",
        }),
      );
      for (const segment of lane.segments) {
        group.append(
          svgEl("path", {
            d: segment.d,
            fill: "none",
            stroke: personColor(lane.personId),
            "stroke-width": 2,
          }),
        );
      }
      svg.append(group);
    }
  } else {
    const trajectory = vaTrajectory(records, CHART_HEIGHT, playheadIndex);
    const offsetX = (CHART_WIDTH - CHART_HEIGHT) / 2;
    const group = svgEl("g", { transform: `translate(${offsetX},0)` });
    group.append(
      svgEl("rect", {
        x: 0, y: 0, width: CHART_HEIGHT, height: CHART_HEIGHT, class: "va-bg",
      }),
      svgEl("line", {
        x1: CHART_HEIGHT / 2, y1: 0, x2: CHART_HEIGHT / 2, y2: CHART_HEIGHT,
        class: "va-axis",
      }),
      svgEl("line", {
        x1: 0, y1: CHART_HEIGHT / 2, x2: CHART_HEIGHT, y2: CHART_HEIGHT / 2,
        class: "va-axis",
      }),
      svgEl("path", {
        d: trajectory.path, fill: "none", stroke: "#4fb5c9",
        "stroke-width": 1.5, class: "va-path",
      }),
    );
    if (trajectory.cursor) {
      group.append(
        svgEl("circle", {
          cx: trajectory.cursor.cx, cy: trajectory.cursor.cy, r: 5,
          class: "va-cursor",
        }),
      );
    }
    svg.append(group);
  }

  if (state.chartMode !== "va-trajectory") {
    const cx = cursorX(playheadIndex, records.length, CHART_WIDTH);
    svg.append(
      svgEl("line", {
        x1: cx, y1: 0, x2: cx, y2: CHART_HEIGHT,
        class: "chart-cursor",
      }),
    );
  }
}

function valueSpan(label: string, value: number, cssClass: string): HTMLElement {
  const wrap = document.createElement("span");
  wrap.className = `readout-item ${cssClass}`;
  const name = document.createElement("label");
  name.textContent = label;
  const num = document.createElement("b");
  num.dataset.value = String(value);
  num.textContent = value.toFixed(3);
  wrap.append(name, num);
  return wrap;
}

/** Numeric readout at the playhead: group channels, VA, per-person VA. */
export function renderReadout(
  container: HTMLElement,
  record: TickRecord | null,
  selection: Selection,
): void {
  container.replaceChildren();
  if (!record) return;
  const time = document.createElement("div");
  time.className = "readout-time";
  time.textContent = `t = ${record.t.toFixed(2)}s (tick ${record.tick})`;
  container.append(time);

  const group = document.createElement("div");
  group.className = "readout-group";
  for (const channel of EMOTION_CHANNELS) {
    const item = valueSpan(
      channel,
      record.group.emotions[channel],
      `readout-${channel}`,
    );
    (item.querySelector("label") as HTMLElement).style.color =
      CHANNEL_COLORS[channel];
    group.append(item);
  }
  group.append(
    valueSpan("valence", record.group.va.valence, "readout-valence"),
    valueSpan("arousal", record.group.va.arousal, "readout-arousal"),
  );
  const modalities = document.createElement("span");
  modalities.className = "readout-modalities";
  modalities.textContent = record.group.modalities.length
    ? `from ${record.group.modalities.join("+")}`
    : "no signal";
  group.append(modalities);
  container.append(group);

  const personsWrap = document.createElement("div");
  personsWrap.className = "readout-persons";
  for (const [pid, value] of Object.entries(record.persons)) {
    if (!isPersonSelected(selection, Number(pid))) continue;
    const row = document.createElement("div");
    row.className = "readout-person";
    row.dataset.personId = pid;
    const name = document.createElement("label");
    name.textContent = `person ${pid}`;
    name.style.color = personColor(Number(pid));
    row.append(name);
    if (value.present) {
      row.append(
        valueSpan("v", value.va.valence, "readout-person-valence"),
        valueSpan("a", value.va.arousal, "readout-person-arousal"),
        valueSpan("joy", value.emotions.joy, "readout-person-joy"),
      );
    } else {
      const absent = document.createElement("i");
      absent.textContent = "not visible";
      row.append(absent);
    }
    personsWrap.append(row);
  }
  container.append(personsWrap);
}

export function renderProgress(
  container: HTMLElement,
  stages: Record<string, number>,
  status: string,
): void {
  container.replaceChildren();
  const title = document.createElement("div");
  title.className = "progress-status";
  title.textContent = `session ${status}`;
  container.append(title);
  for (const stage of ["ingest", "visual", "audio", "linguistic", "fuse"]) {
    const row = document.createElement("div");
    row.className = "progress-row";
    row.dataset.stage = stage;
    const label = document.createElement("label");
    label.textContent = stage;
    const bar = document.createElement("progress");
    bar.max = 1;
    bar.value = stages[stage] ?? 0;
    row.append(label, bar);
    container.append(row);
  }
}

export function renderOverlay(
  canvas: HTMLCanvasElement,
  tracks: PersonTrack[],
  t: number,
  selection: Selection,
  mediaW: number,
  mediaH: number,
): void {
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  const boxes = boxesAt(tracks, t, (id) => isPersonSelected(selection, id));
  for (const { personId, box } of boxes) {
    const scaled = scaleBox(box, mediaW, mediaH, canvas.width, canvas.height);
    ctx.strokeStyle = personColor(personId);
    ctx.lineWidth = 2;
    ctx.strokeRect(scaled.x, scaled.y, scaled.w, scaled.h);
    ctx.fillStyle = personColor(personId);
    ctx.font = "12px system-ui";
    ctx.fillText(`p${personId}`, scaled.x + 2, Math.max(12, scaled.y - 4));
  }
}
