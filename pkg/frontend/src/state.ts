/** View state: selection, playhead and chart mode.
 *
 * The selection serializes to exactly the query parameters of the
 * timeline endpoint, so what the user sees is always traceable to one
 * concrete service query.
 */

import { MODALITIES, Modality } from "./types";

export type ChartMode = "stacked-emotions" | "va-trajectory" | "per-person-lanes";

export interface Selection {
  /** Selected person ids; empty array means "all persons". */
  persons: number[];
  /** Non-empty subset of the three modalities. */
  modalities: Modality[];
}

export interface ViewState {
  sessionId: string | null;
  playheadS: number;
  durationS: number;
  selection: Selection;
  chartMode: ChartMode;
  smoothing: boolean;
}

export function initialState(): ViewState {
  return {
    sessionId: null,
    playheadS: 0,
    durationS: 0,
    selection: { persons: [], modalities: [...MODALITIES] },
    chartMode: "stacked-emotions",
    smoothing: false,
  };
}

/** Canonical query parameters for the timeline endpoint. */
export function selectionToQuery(selection: Selection): URLSearchParams {
  const params = new URLSearchParams();
  if (selection.persons.length > 0) {
    params.set("persons", [...selection.persons].sort((a, b) => a - b).join(","));
  }
  params.set(
    "modalities",
    MODALITIES.filter((m) => selection.modalities.includes(m)).join(","),
  );
  return params;
}

export function selectionFromQuery(params: URLSearchParams): Selection {
  const persons = (params.get("persons") ?? "")
    .split(",")
    .filter((p) => p.length > 0)
    .map((p) => parseInt(p, 10));
  const raw = (params.get("modalities") ?? "").split(",");
  const modalities = MODALITIES.filter((m) => raw.includes(m));
  return {
    persons,
    modalities: modalities.length > 0 ? modalities : [...MODALITIES],
  };
}

/**
 * Toggle a person in or out of the selection. `allPersons` is needed
 * because an empty selection means everyone: deselecting from "all"
 * materializes the remaining ids.
 */
export function togglePerson(
  selection: Selection,
  personId: number,
  allPersons: number[],
): Selection {
  const active = selection.persons.length === 0 ? allPersons : selection.persons;
  const next = active.includes(personId)
    ? active.filter((p) => p !== personId)
    : [...active, personId].sort((a, b) => a - b);
  return { ...selection, persons: next };
}

export function isPersonSelected(selection: Selection, personId: number): boolean {
  return selection.persons.length === 0 || selection.persons.includes(personId);
}

/** Toggle a modality; removing the last one is blocked (returns null). */
export function toggleModality(
  selection: Selection,
  modality: Modality,
): Selection | null {
  if (selection.modalities.includes(modality)) {
    if (selection.modalities.length === 1) {
      return null;
    }
    return {
      ...selection,
      modalities: selection.modalities.filter((m) => m !== modality),
    };
  }
  return {
    ...selection,
    modalities: MODALITIES.filter(
      (m) => selection.modalities.includes(m) || m === modality,
    ),
  };
}

export function clampPlayhead(t: number, durationS: number): number {
  if (!Number.isFinite(t) || t < 0) return 0;
  return Math.min(t, durationS);
}

/** Index of the tick record covering playhead time t. */
export function tickIndexAt(t: number, tickS: number, tickCount: number): number {
  const k = Math.floor(t / tickS);
  return Math.max(0, Math.min(k, tickCount - 1));
}
