import { describe, expect, it } from "vitest";

import { step, togglePlay } from "../src/player.js";
import { fitViewport, projectFrame } from "../src/skeleton.js";
import { frameForTime, timeForX, xForTime } from "../src/timeline.js";
import { synthesizeResponse } from "./fixtures.js";

describe("timeline mapping", () => {
  const geom = { widthPx: 640, totalS: 50 };

  it("round-trips time through pixels", () => {
    for (const t of [0, 1.25, 49.999, 50]) {
      expect(timeForX(geom, xForTime(geom, t))).toBeCloseTo(t, 9);
    }
  });

  it("clamps out-of-range pixels", () => {
    expect(timeForX(geom, -10)).toBe(0);
    expect(timeForX(geom, 10_000)).toBe(50);
  });

  it("maps times to the nearest frame with clamping", () => {
    expect(frameForTime(25, 0, 100)).toBe(0);
    expect(frameForTime(25, 0.02, 100)).toBe(1); // rounds 0.5 up
    expect(frameForTime(25, 99, 100)).toBe(99);
    expect(frameForTime(25, -1, 100)).toBe(0);
  });
});

describe("skeleton projection", () => {
  const joints = ["spine", "neck", "l_shoulder", "r_shoulder"];
  const frame = [
    [0, 1.0, 0],
    [0, 1.45, 0],
    [-0.2, 1.4, 0.3],
    [0.2, 1.4, -0.3],
  ];

  it("is an orthographic front view: x right, y up, z ignored", () => {
    const view = fitViewport([frame], 200, 200);
    const { points } = projectFrame(joints, frame, view);
    const byName = Object.fromEntries(points.map((p) => [p.joint, p]));
    // neck is above spine on screen (smaller y)
    expect(byName.neck.y).toBeLessThan(byName.spine.y);
    // left shoulder on the left of the right shoulder
    expect(byName.l_shoulder.x).toBeLessThan(byName.r_shoulder.x);
    // z does not influence the projection: shoulders share screen y
    expect(byName.l_shoulder.y).toBeCloseTo(byName.r_shoulder.y, 9);
  });

  it("keeps proportions (uniform scale)", () => {
    const view = fitViewport([frame], 400, 100); // wide viewport
    const { points } = projectFrame(joints, frame, view);
    const byName = Object.fromEntries(points.map((p) => [p.joint, p]));
    const worldShoulders = 0.4;
    const worldSpineNeck = 0.45;
    const pxShoulders = byName.r_shoulder.x - byName.l_shoulder.x;
    const pxSpineNeck = byName.spine.y - byName.neck.y;
    expect(pxShoulders / pxSpineNeck)
      .toBeCloseTo(worldShoulders / worldSpineNeck, 6);
  });

  it("connects only known bone pairs", () => {
    const view = fitViewport([frame], 200, 200);
    const { bones } = projectFrame(joints, frame, view);
    // neck-spine, l_shoulder-neck, r_shoulder-neck
    expect(bones).toHaveLength(3);
  });

  it("fits the recorded motion inside the viewport", () => {
    const { motion } = synthesizeResponse();
    const view = fitViewport(motion.frames, 300, 320);
    for (const f of [0, Math.floor(motion.frames.length / 2),
                     motion.frames.length - 1]) {
      const { points } = projectFrame(motion.joints, motion.frames[f],
                                      view);
      for (const p of points) {
        expect(p.x).toBeGreaterThanOrEqual(0);
        expect(p.x).toBeLessThanOrEqual(300);
        expect(p.y).toBeGreaterThanOrEqual(0);
        expect(p.y).toBeLessThanOrEqual(320);
      }
    }
  });
});

describe("player", () => {
  it("advances while playing and stops at the end", () => {
    let state = { cursorS: 0, playing: true };
    state = step(state, 0.5, 2.0);
    expect(state).toEqual({ cursorS: 0.5, playing: true });
    state = step(state, 5.0, 2.0);
    expect(state).toEqual({ cursorS: 2.0, playing: false });
  });

  it("does not move while paused", () => {
    const state = step({ cursorS: 1, playing: false }, 0.5, 2.0);
    expect(state.cursorS).toBe(1);
  });

  it("toggling from the end restarts", () => {
    const state = togglePlay({ cursorS: 2.0, playing: false }, 2.0);
    expect(state).toEqual({ cursorS: 0, playing: true });
  });
});
