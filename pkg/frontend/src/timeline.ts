// Time <-> pixel mapping and marker geometry for the schedule strip.

import { GestureScript, Schedule } from "./types.js";

export interface TimelineGeometry {
  widthPx: number;
  totalS: number;
}

export function xForTime(geom: TimelineGeometry, timeS: number): number {
  if (geom.totalS <= 0) return 0;
  return (timeS / geom.totalS) * geom.widthPx;
}

export function timeForX(geom: TimelineGeometry, x: number): number {
  if (geom.widthPx <= 0) return 0;
  return Math.min(Math.max(x / geom.widthPx, 0), 1) * geom.totalS;
}

export interface Marker {
  kind: "entry" | "apex" | "keyword" | "sentence";
  sentenceIndex: number;
  x0: number;
  x1: number;
  label: string;
  clamped?: boolean;
}

/** All markers of the schedule strip, in drawing order. */
export function buildMarkers(geom: TimelineGeometry, schedule: Schedule,
                             script: GestureScript): Marker[] {
  const markers: Marker[] = [];
  for (const s of script.sentences) {
    markers.push({
      kind: "sentence", sentenceIndex: s.index,
      x0: xForTime(geom, s.start_s), x1: xForTime(geom, s.end_s),
      label: `s${s.index}`,
    });
    const mid = (s.keyword_start_s + s.keyword_end_s) / 2;
    markers.push({
      kind: "keyword", sentenceIndex: s.index,
      x0: xForTime(geom, mid), x1: xForTime(geom, mid),
      label: s.keyword,
    });
  }
  for (const e of schedule.entries) {
    markers.push({
      kind: "entry", sentenceIndex: e.sentence_index,
      x0: xForTime(geom, e.onset_s), x1: xForTime(geom, e.end_s),
      label: e.unit_id,
    });
    markers.push({
      kind: "apex", sentenceIndex: e.sentence_index,
      x0: xForTime(geom, e.apex_time_s), x1: xForTime(geom, e.apex_time_s),
      label: `apex ${e.unit_id}`, clamped: e.clamped,
    });
  }
  return markers;
}

export function frameForTime(fps: number, timeS: number,
                             frameCount: number): number {
  const frame = Math.round(timeS * fps);
  return Math.min(Math.max(frame, 0), frameCount - 1);
}
