import { describe, expect, it } from "vitest";

import { FetchLike, ServiceClient, SynthesisQueue } from "../src/api.js";
import { GestureScript, SynthesisResponse } from "../src/types.js";

const SCRIPT: GestureScript = { version: 1, sentences: [] };

function deferredFetch() {
  const calls: { url: string; body: unknown;
                 resolve: (v: unknown) => void;
                 reject: (e: unknown) => void }[] = [];
  const fetchImpl: FetchLike = (url, init) =>
    new Promise((resolve, reject) => {
      calls.push({
        url,
        body: init?.body ? JSON.parse(init.body) : null,
        resolve: (value) => resolve({
          ok: true, status: 200, json: async () => value }),
        reject,
      });
    });
  return { calls, fetchImpl };
}

function fakeResult(seed: number): SynthesisResponse {
  return {
    motion: { version: 1, fps: 25, joints: ["a"], frames: [[[0, 0, 0]]] },
    schedule: { fps: 25, total_duration_s: 1, entries: [], events: [] },
    report: { mode: "onset", seed, fps: 25, ramp_s: 0.2,
              sentence_count: 0, selections: [], skips: [], events: [],
              apex_errors: [], apex_error_max_s: null },
  };
}

describe("ServiceClient", () => {
  it("surfaces the service error body", async () => {
    const fetchImpl: FetchLike = async () => ({
      ok: false, status: 400,
      json: async () => ({ error: "sentence 0 missing field 'text'" }),
    });
    const client = new ServiceClient("", fetchImpl);
    await expect(client.synthesize(SCRIPT, {}))
      .rejects.toThrow("missing field");
  });

  it("posts the exact request contract", async () => {
    const { calls, fetchImpl } = deferredFetch();
    const client = new ServiceClient("http://svc", fetchImpl);
    const promise = client.synthesize(SCRIPT, { mode: "stroke", seed: 1 });
    expect(calls[0].url).toBe("http://svc/api/synthesize");
    expect(calls[0].body).toEqual({
      script: SCRIPT, options: { mode: "stroke", seed: 1 } });
    calls[0].resolve(fakeResult(1));
    await promise;
  });
});

describe("SynthesisQueue", () => {
  it("keeps at most one request in flight and supersedes queued ones",
     async () => {
    const { calls, fetchImpl } = deferredFetch();
    const queue = new SynthesisQueue(new ServiceClient("", fetchImpl));

    const first = queue.submit(SCRIPT, { seed: 1 });
    expect(queue.busy).toBe(true);
    expect(calls).toHaveLength(1);

    // two clicks while busy: the second supersedes the first's payload
    const second = queue.submit(SCRIPT, { seed: 2 });
    const third = queue.submit(SCRIPT, { seed: 3 });
    expect(calls).toHaveLength(1);

    calls[0].resolve(fakeResult(1));
    expect(await first).toEqual(fakeResult(1));

    // exactly one follow-up request, carrying the latest options
    await new Promise((r) => setTimeout(r, 0));
    expect(calls).toHaveLength(2);
    expect((calls[1].body as { options: { seed: number } }).options.seed)
      .toBe(3);
    calls[1].resolve(fakeResult(3));
    expect(await second).toEqual(fakeResult(3));
    expect(await third).toEqual(fakeResult(3));
    await new Promise((r) => setTimeout(r, 0));
    expect(queue.busy).toBe(false);
  });

  it("recovers after a failure", async () => {
    let fail = true;
    const fetchImpl: FetchLike = async () => {
      if (fail) {
        return { ok: false, status: 502,
                 json: async () => ({ error: "down" }) };
      }
      return { ok: true, status: 200,
               json: async () => fakeResult(7) };
    };
    const queue = new SynthesisQueue(new ServiceClient("", fetchImpl));
    await expect(queue.submit(SCRIPT, {})).rejects.toThrow("down");
    fail = false;
    expect(await queue.submit(SCRIPT, {})).toEqual(fakeResult(7));
  });
});
