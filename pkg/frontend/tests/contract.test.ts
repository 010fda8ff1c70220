// Contract tests against recorded service responses: the viewer is a pure
// client of these JSON shapes and never computes motion itself.

import { describe, expect, it } from "vitest";

import { exportScript, importScript } from "../src/exportScript.js";
import { buildMarkers, timeForX } from "../src/timeline.js";
import { validateScript } from "../src/validate.js";
import {
  dictionary,
  editedScript,
  parseResponse,
  synthesizeEmpty,
  synthesizeResponse,
} from "./fixtures.js";

const GEOM = { widthPx: 100_000, totalS: 0 }; // wide: pixel error << frame

describe("recorded parse response", () => {
  it("passes the client-side validation mirror", () => {
    expect(validateScript(parseResponse())).toEqual([]);
  });

  it("has ten sentences with intents from the closed set", () => {
    const script = parseResponse();
    expect(script.sentences).toHaveLength(10);
  });
});

describe("edit-intent -> synthesize -> preview", () => {
  it("the edited sentence got an emphasis unit", () => {
    const response = synthesizeResponse();
    const entry = response.schedule.entries.find(
      (e) => e.sentence_index === 3);
    expect(entry).toBeDefined();
    expect(entry!.unit_id.startsWith("emphasis_")).toBe(true);
  });

  it("apex and keyword markers sit within one frame of the schedule "
     + "JSON values", () => {
    const script = editedScript();
    const response = synthesizeResponse();
    const geom = { ...GEOM, totalS: response.schedule.total_duration_s };
    const markers = buildMarkers(geom, response.schedule, script);
    const oneFrame = 1 / response.schedule.fps;

    for (const entry of response.schedule.entries) {
      const apex = markers.find(
        (m) => m.kind === "apex" && m.sentenceIndex
          === entry.sentence_index)!;
      expect(Math.abs(timeForX(geom, apex.x0) - entry.apex_time_s))
        .toBeLessThanOrEqual(oneFrame);

      const keyword = markers.find(
        (m) => m.kind === "keyword" && m.sentenceIndex
          === entry.sentence_index)!;
      const sentence = script.sentences[entry.sentence_index];
      const mid = (sentence.keyword_start_s + sentence.keyword_end_s) / 2;
      expect(Math.abs(timeForX(geom, keyword.x0) - mid))
        .toBeLessThanOrEqual(oneFrame);

      // stroke mode: unclamped apex markers coincide with the keyword
      if (!entry.clamped) {
        expect(Math.abs(timeForX(geom, apex.x0)
          - timeForX(geom, keyword.x0))).toBeLessThanOrEqual(oneFrame);
      }
    }
  });

  it("entry bars span exactly the schedule intervals", () => {
    const response = synthesizeResponse();
    const geom = { ...GEOM, totalS: response.schedule.total_duration_s };
    const markers = buildMarkers(geom, response.schedule, editedScript());
    for (const entry of response.schedule.entries) {
      const bar = markers.find(
        (m) => m.kind === "entry" && m.sentenceIndex
          === entry.sentence_index)!;
      expect(timeForX(geom, bar.x0)).toBeCloseTo(entry.onset_s, 6);
      expect(timeForX(geom, bar.x1)).toBeCloseTo(entry.end_s, 6);
    }
  });

  it("report carries skips, events, and apex errors for the panel", () => {
    const { report } = synthesizeResponse();
    expect(report.skips.map((s) => s.sentence_index)).toContain(7);
    expect(report.events.length).toBeGreaterThan(0);
    expect(report.apex_errors.length).toBeGreaterThan(0);
    expect(report.apex_error_max_s).not.toBeNull();
    expect(report.apex_error_max_s!).toBeLessThanOrEqual(
      0.5 / report.fps);
  });
});

describe("empty script synthesis", () => {
  it("returns base-only motion (every frame identical)", () => {
    const { motion, schedule } = synthesizeEmpty();
    expect(schedule.entries).toEqual([]);
    const first = JSON.stringify(motion.frames[0]);
    for (const frame of motion.frames) {
      expect(JSON.stringify(frame)).toBe(first);
    }
  });
});

describe("script export / import", () => {
  it("round-trips losslessly", () => {
    const script = parseResponse();
    const text = exportScript(script);
    const again = importScript(text);
    expect(again).toEqual(script);
    expect(exportScript(again)).toBe(text);
  });

  it("round-trips the edited script with optional fields", () => {
    const script = editedScript();
    expect(importScript(exportScript(script))).toEqual(script);
  });

  it("rejects non-script JSON", () => {
    expect(() => importScript('{"foo": 1}')).toThrow();
  });
});

describe("dictionary manifest", () => {
  it("summarizes to 42 units over 7 intents", () => {
    const manifest = dictionary();
    expect(manifest.units).toHaveLength(42);
    expect(new Set(manifest.units.map((u) => u.intent)).size).toBe(7);
  });
});
