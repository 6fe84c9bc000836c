/** Payload types mirroring the session service API, field for field. */

export const EMOTION_CHANNELS = [
  "joy",
  "trust",
  "fear",
  "surprise",
  "sadness",
  "anticipation",
  "anger",
  "disgust",
  "none",
] as const;

export type EmotionChannel = (typeof EMOTION_CHANNELS)[number];

export const MODALITIES = ["visual", "audio", "linguistic"] as const;

export type Modality = (typeof MODALITIES)[number];

export type EmotionScores = Record<EmotionChannel, number>;

export interface VAPoint {
  valence: number;
  arousal: number;
}

export interface PersonTickValue {
  emotions: EmotionScores;
  va: VAPoint;
  present: boolean;
}

export interface TickRecord {
  tick: number;
  t: number;
  group: {
    emotions: EmotionScores;
    va: VAPoint;
    modalities: Modality[];
  };
  persons: Record<string, PersonTickValue>;
}

export interface SessionMeta {
  session_id: string;
  status: "queued" | "processing" | "done" | "failed";
  language: string;
  created_at: string;
  duration_s: number | null;
  fps: number | null;
  width?: number;
  height?: number;
  stages: Record<string, number>;
  persons?: number[];
  modalities?: Modality[];
  ticks?: number;
  error?: string;
  config?: { tick_s: number } & Record<string, unknown>;
}

export interface TrackBox {
  t: number;
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface PersonTrack {
  person_id: number;
  boxes: TrackBox[];
}

export interface BackendDescriptor {
  name: string;
  modality: Modality;
  native_label_space: string;
  version: string;
  languages: string[] | null;
  va_convention: string;
}

export type ProgressEvent =
  | {
      type: "progress";
      session_id: string;
      stage: string;
      fraction: number;
      message: string;
    }
  | { type: "status"; session_id: string; status: SessionMeta["status"] }
  | { type: "error"; error: string };
