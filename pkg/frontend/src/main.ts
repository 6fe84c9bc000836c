/** App bootstrap: wires the service API to the DOM console.
 *
 * The UI computes no emotion values; it uploads, queries, renders and
 * re-queries on selection changes. Uploaded videos play from a local
 * object URL kept for this browser session only: the service deletes
 * media at completion, so sessions loaded by id show a privacy
 * placeholder instead of frames.
 */

import { ApiClient, ApiError, TimelineQuery } from "./api";
import {
  renderCharts,
  renderModalityChips,
  renderOverlay,
  renderPersonChips,
  renderProgress,
  renderReadout,
} from "./render";
import {
  ChartMode,
  clampPlayhead,
  initialState,
  tickIndexAt,
  toggleModality,
  togglePerson,
  ViewState,
} from "./state";
import { Modality, PersonTrack, SessionMeta, TickRecord } from "./types";

function el<T extends Element = HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as unknown as T;
}

export class App {
  private timelineQuery: TimelineQuery;
  private state: ViewState = initialState();
  private meta: SessionMeta | null = null;
  private tracks: PersonTrack[] = [];
  private records: TickRecord[] = [];
  private videoUrl: string | null = null;
  private unsubscribe: (() => void) | null = null;

  constructor(private api: ApiClient = new ApiClient()) {
    this.timelineQuery = new TimelineQuery(this.api);
  }

  start(): void {
    el<HTMLFormElement>("upload-form").addEventListener("submit", (e) => {
      e.preventDefault();
      void this.upload();
    });
    el<HTMLFormElement>("load-form").addEventListener("submit", (e) => {
      e.preventDefault();
      const id = el<HTMLInputElement>("session-id-input").value.trim();
      if (id) void this.loadSession(id);
    });
    el<HTMLButtonElement>("retry-button").addEventListener("click", () => {
      if (this.state.sessionId) void this.loadSession(this.state.sessionId);
    });
    el<HTMLSelectElement>("chart-mode").addEventListener("change", (e) => {
      this.state.chartMode = (e.target as HTMLSelectElement).value as ChartMode;
      this.renderAll();
    });
    el<HTMLInputElement>("smoothing-toggle").addEventListener("change", (e) => {
      this.state.smoothing = (e.target as HTMLInputElement).checked;
      this.renderAll();
    });
    const scrub = el<HTMLInputElement>("scrub");
    scrub.addEventListener("input", () => {
      this.scrubTo(parseFloat(scrub.value));
    });
    const video = el<HTMLVideoElement>("video");
    video.addEventListener("timeupdate", () => {
      this.scrubTo(video.currentTime, { fromVideo: true });
    });
  }

  private setScreen(name: "idle" | "progress" | "console" | "error"): void {
    for (const section of ["idle", "progress", "console", "error"]) {
      el(`screen-${section}`).hidden = section !== name;
    }
  }

  private async upload(): Promise<void> {
    const input = el<HTMLInputElement>("file-input");
    const language = el<HTMLSelectElement>("language-select").value;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const sessionId = await this.api.createSession(file, language);
      if (this.videoUrl) URL.revokeObjectURL(this.videoUrl);
      this.videoUrl = URL.createObjectURL(file);
      await this.loadSession(sessionId);
    } catch (error) {
      this.showError(error);
    }
  }

  async loadSession(sessionId: string): Promise<void> {
    this.state.sessionId = sessionId;
    el("session-label").textContent = sessionId;
    this.unsubscribe?.();
    this.unsubscribe = null;
    try {
      const meta = await this.api.getSession(sessionId);
      this.meta = meta;
      if (meta.status === "queued" || meta.status === "processing") {
        this.setScreen("progress");
        renderProgress(el("progress-panel"), meta.stages, meta.status);
        this.unsubscribe = this.api.subscribeEvents(sessionId, (event) => {
          if (event.type === "progress") {
            meta.stages[event.stage] = event.fraction;
            renderProgress(el("progress-panel"), meta.stages, "processing");
          } else if (event.type === "status") {
            if (event.status === "done") void this.loadSession(sessionId);
            else if (event.status === "failed") {
              this.showError(new ApiError(500, "processing failed"));
            }
          }
        });
        return;
      }
      if (meta.status === "failed") {
        this.showError(new ApiError(500, meta.error ?? "processing failed"));
        return;
      }
      this.state.durationS = meta.duration_s ?? 0;
      this.state.selection = { persons: [], modalities: this.state.selection.modalities };
      this.tracks = await this.api.getPersons(sessionId);
      this.records = await this.timelineQuery.fetch(sessionId, this.state.selection);
      this.setScreen("console");
      this.setupVideo();
      this.renderAll();
    } catch (error) {
      this.showError(error);
    }
  }

  private setupVideo(): void {
    const video = el<HTMLVideoElement>("video");
    const placeholder = el("video-placeholder");
    if (this.videoUrl) {
      video.src = this.videoUrl;
      video.hidden = false;
      placeholder.hidden = true;
    } else {
      video.removeAttribute("src");
      video.hidden = true;
      placeholder.hidden = false;
    }
    const scrub = el<HTMLInputElement>("scrub");
    scrub.max = String(this.state.durationS);
    scrub.step = String(this.meta?.config?.tick_s ?? 0.25);
    scrub.value = "0";
    this.state.playheadS = 0;
  }

  private async applySelection(): Promise<void> {
    if (!this.state.sessionId) return;
    try {
      this.records = await this.timelineQuery.fetch(
        this.state.sessionId,
        this.state.selection,
      );
      el("stale-banner").hidden = true;
    } catch (error) {
      if ((error as DOMException).name === "AbortError") return;
      // Keep the previous charts, flag them as stale.
      el("stale-banner").hidden = false;
    }
    this.renderAll();
  }

  private onTogglePerson(personId: number): void {
    const all = this.meta?.persons ?? [];
    this.state.selection = togglePerson(this.state.selection, personId, all);
    void this.applySelection();
  }

  private onToggleModality(modality: Modality): void {
    const next = toggleModality(this.state.selection, modality);
    if (next === null) {
      const note = el("modality-note");
      note.hidden = false;
      setTimeout(() => (note.hidden = true), 1500);
      return;
    }
    this.state.selection = next;
    void this.applySelection();
  }

  private scrubTo(t: number, opts: { fromVideo?: boolean } = {}): void {
    this.state.playheadS = clampPlayhead(t, this.state.durationS);
    if (!opts.fromVideo && this.videoUrl) {
      const video = el<HTMLVideoElement>("video");
      if (Math.abs(video.currentTime - this.state.playheadS) > 0.05) {
        video.currentTime = this.state.playheadS;
      }
    }
    el<HTMLInputElement>("scrub").value = String(this.state.playheadS);
    this.renderPlayheadViews();
  }

  private tickS(): number {
    return this.meta?.config?.tick_s ?? 0.25;
  }

  private renderPlayheadViews(): void {
    const index = tickIndexAt(this.state.playheadS, this.tickS(), this.records.length);
    renderReadout(
      el("readout"),
      this.records[index] ?? null,
      this.state.selection,
    );
    const canvas = el<HTMLCanvasElement>("overlay");
    renderOverlay(
      canvas,
      this.tracks,
      this.state.playheadS,
      this.state.selection,
      this.meta?.width ?? 160,
      this.meta?.height ?? 120,
    );
    renderCharts(
      el<SVGSVGElement>("chart"),
      this.records,
      this.meta?.persons ?? [],
      this.state,
    );
  }

  private renderAll(): void {
    renderPersonChips(
      el("person-chips"),
      this.meta?.persons ?? [],
      this.state.selection,
      (pid) => this.onTogglePerson(pid),
    );
    renderModalityChips(el("modality-chips"), this.state.selection, (m) =>
      this.onToggleModality(m),
    );
    this.renderPlayheadViews();
  }

  private showError(error: unknown): void {
    this.setScreen("error");
    const message =
      error instanceof ApiError
        ? `${error.status}: ${error.message}`
        : String(error);
    el("error-message").textContent = message;
  }
}

// Auto-start in the browser; tests construct App themselves.
if (!import.meta.env?.TEST) {
  new App().start();
}
