// JSON contracts of the local service. The viewer never computes motion;
// it only reads and writes these shapes.

export const INTENTS = [
  "welcome",
  "farewell",
  "description",
  "explanation",
  "emphasis",
  "self_reference",
  "semantic",
] as const;

export type Intent = (typeof INTENTS)[number];

export interface SentenceEntry {
  index: number;
  text: string;
  start_s: number;
  end_s: number;
  intent: Intent;
  keyword: string;
  keyword_start_s: number;
  keyword_end_s: number;
  gesture_id?: string;
  semantic_tag?: string;
}

export interface GestureScript {
  version: number;
  sentences: SentenceEntry[];
}

export interface WordTiming {
  word: string;
  start_s: number;
  end_s: number;
}

export interface TimingFile {
  words: WordTiming[];
}

export interface MotionClip {
  version: number;
  fps: number;
  joints: string[];
  frames: number[][][]; // frames x joints x 3
}

export interface ScheduleEntry {
  sentence_index: number;
  unit_id: string;
  onset_s: number;
  end_s: number;
  kind: "identity" | "uniform" | "stage_aware";
  target_duration_s: number;
  apex_time_s: number;
  apex_target_s?: number;
  apex_error_s?: number;
  clamped: boolean;
  warp: [number, number][];
}

export interface Schedule {
  fps: number;
  total_duration_s: number;
  entries: ScheduleEntry[];
  events: string[];
}

export interface SynthesisReport {
  mode: string;
  seed: number;
  fps: number;
  ramp_s: number;
  sentence_count: number;
  selections: {
    sentence_index: number;
    unit_id: string;
    variant_s: number;
    needs_compression: boolean;
  }[];
  skips: { sentence_index: number; reason: string }[];
  events: string[];
  apex_errors: { sentence_index: number; error_s: number;
                 clamped: boolean }[];
  apex_error_max_s: number | null;
}

export interface SynthesisResponse {
  motion: MotionClip;
  schedule: Schedule;
  report: SynthesisReport;
}

export interface SynthesisOptions {
  mode?: "onset" | "stroke";
  seed?: number;
  fps?: number;
  base?: string;
  ramp_s?: number;
}

export interface DictionaryManifest {
  version: number;
  rest_pose: string;
  units: {
    id: string;
    intent: Intent;
    duration_variant_s: number;
    file: string;
    semantic_tag?: string;
  }[];
}
