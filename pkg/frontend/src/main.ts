// DOM wiring: editor table, preview canvases, timeline, report panel.
// All decisions live in the tested modules; this file only binds them to
// the page.

import { ServiceClient, SynthesisQueue } from "./api.js";
import { exportScript, importScript } from "./exportScript.js";
import { step, togglePlay } from "./player.js";
import { drawSkeleton, drawTimeline } from "./render.js";
import { SessionStore } from "./state.js";
import { fitViewport, projectFrame } from "./skeleton.js";
import { buildMarkers, frameForTime, xForTime } from "./timeline.js";
import {
  GestureScript,
  INTENTS,
  MotionClip,
  SynthesisResponse,
  TimingFile,
} from "./types.js";
import { isIntent } from "./validate.js";

const store = new SessionStore();
const client = new ServiceClient("");
const queue = new SynthesisQueue(client);

let baseResult: SynthesisResponse | null = null;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

function options() {
  return {
    mode: el<HTMLSelectElement>("mode").value as "onset" | "stroke",
    seed: Number(el<HTMLInputElement>("seed").value) || 0,
  };
}

function renderEditor(): void {
  const { script } = store.get();
  const table = el<HTMLTableSectionElement>("sentences");
  table.innerHTML = "";
  if (!script) return;
  for (const s of script.sentences) {
    const row = table.insertRow();
    row.insertCell().textContent = String(s.index);

    const textCell = row.insertCell();
    s.text.split(/\s+/).forEach((token, tokenIndex) => {
      const span = document.createElement("span");
      span.textContent = token + " ";
      span.className = "token";
      span.onclick = () => {
        if (!store.setKeywordFromToken(s.index, tokenIndex)) {
          store.setBanner(`"${token}" has no word timing`);
        }
      };
      textCell.appendChild(span);
    });

    const intentCell = row.insertCell();
    const select = document.createElement("select");
    for (const intent of INTENTS) {
      const option = document.createElement("option");
      option.value = intent;
      option.textContent = intent;
      option.selected = intent === s.intent;
      select.appendChild(option);
    }
    select.onchange = () => {
      if (isIntent(select.value)) store.setIntent(s.index, select.value);
    };
    intentCell.appendChild(select);

    row.insertCell().textContent =
      `${s.keyword} [${s.keyword_start_s.toFixed(2)}, ` +
      `${s.keyword_end_s.toFixed(2)}]`;
  }
}

function renderReport(): void {
  const { result } = store.get();
  const panel = el<HTMLDivElement>("report");
  if (!result) {
    panel.textContent = "no synthesis yet";
    return;
  }
  const { report } = result;
  const lines: string[] = [
    `mode ${report.mode}, seed ${report.seed}, ` +
    `${report.sentence_count} sentences`,
  ];
  if (report.skips.length) {
    lines.push("skips:");
    for (const s of report.skips) {
      lines.push(`  ${s.sentence_index}: ${s.reason}`);
    }
  }
  if (report.events.length) {
    lines.push("events:");
    for (const e of report.events) lines.push(`  ${e}`);
  }
  if (report.apex_errors.length) {
    const worst = report.apex_error_max_s;
    lines.push(`apex errors (unclamped max ` +
      `${worst === null ? "n/a" : worst.toFixed(3) + "s"}):`);
    for (const a of report.apex_errors) {
      lines.push(`  ${a.sentence_index}: ${a.error_s.toFixed(3)}s` +
        (a.clamped ? " [clamped]" : ""));
    }
  }
  panel.textContent = lines.join("\n");
}

function drawMotionAt(canvasId: string, motion: MotionClip | null,
                      cursorS: number): void {
  const canvas = el<HTMLCanvasElement>(canvasId);
  const ctx = canvas.getContext("2d");
  if (!ctx) return;
  ctx.clearRect(0, 0, canvas.width, canvas.height);
  if (!motion) return;
  const frame = frameForTime(motion.fps, cursorS, motion.frames.length);
  const view = fitViewport(motion.frames, canvas.width, canvas.height);
  drawSkeleton(ctx, projectFrame(motion.joints, motion.frames[frame],
                                 view));
}

function renderPreview(): void {
  const state = store.get();
  drawMotionAt("final-view", state.result?.motion ?? null, state.cursorS);
  drawMotionAt("base-view", baseResult?.motion ?? null, state.cursorS);

  const canvas = el<HTMLCanvasElement>("timeline");
  const ctx = canvas.getContext("2d");
  if (!ctx || !state.result || !state.script) {
    ctx?.clearRect(0, 0, canvas.width, 40);
    return;
  }
  const geom = { widthPx: canvas.width,
                 totalS: state.result.schedule.total_duration_s };
  const markers = buildMarkers(geom, state.result.schedule, state.script);
  drawTimeline(ctx, markers, canvas.width,
               xForTime(geom, state.cursorS));
}

function renderControls(): void {
  const state = store.get();
  el<HTMLButtonElement>("synthesize").disabled = !store.canSynthesize();
  el<HTMLDivElement>("validation").textContent =
    state.script ? store.validationErrors().join("\n") : "";
  const banner = el<HTMLDivElement>("banner");
  banner.textContent = state.banner ?? "";
  banner.style.display = state.banner ? "block" : "none";
  el<HTMLSpanElement>("dirty").textContent = state.dirty ? "edited" : "";
  const scrub = el<HTMLInputElement>("scrub");
  const duration = state.result
    ? (state.result.motion.frames.length - 1) / state.result.motion.fps
    : 0;
  scrub.max = String(duration);
  scrub.value = String(state.cursorS);
}

function renderAll(): void {
  renderEditor();
  renderReport();
  renderPreview();
  renderControls();
}

async function synthesize(): Promise<void> {
  const { script } = store.get();
  if (!script || !store.canSynthesize()) return;
  try {
    const opts = options();
    const result = await queue.submit(script, opts);
    store.setResult(result);
    baseResult = await queue.submit({ version: 1, sentences: [] }, opts);
    renderAll();
  } catch (err) {
    // non-blocking: keep the session, show the banner
    store.setBanner(`synthesis failed: ${String(err)}`);
  }
}

function bind(): void {
  el<HTMLButtonElement>("parse").onclick = async () => {
    try {
      const text = el<HTMLTextAreaElement>("transcript").value;
      const timings = JSON.parse(
        el<HTMLTextAreaElement>("timings").value) as TimingFile;
      const script = await client.parse(text, timings);
      store.loadScript(script, timings.words);
    } catch (err) {
      store.setBanner(`parse failed: ${String(err)}`);
    }
  };

  el<HTMLButtonElement>("synthesize").onclick = () => void synthesize();

  el<HTMLButtonElement>("export").onclick = () => {
    const { script } = store.get();
    if (!script) return;
    const blob = new Blob([exportScript(script)],
                          { type: "application/json" });
    const link = document.createElement("a");
    link.href = URL.createObjectURL(blob);
    link.download = "gesture_script.json";
    link.click();
    URL.revokeObjectURL(link.href);
  };

  el<HTMLInputElement>("import").onchange = async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const script: GestureScript = importScript(await file.text());
      store.loadScript(script, store.get().timings);
    } catch (err) {
      store.setBanner(`import failed: ${String(err)}`);
    }
  };

  el<HTMLButtonElement>("play").onclick = () => {
    const state = store.get();
    const duration = state.result
      ? (state.result.motion.frames.length - 1) / state.result.motion.fps
      : 0;
    const next = togglePlay(
      { cursorS: state.cursorS, playing: state.playing }, duration);
    store.setCursor(next.cursorS);
    store.setPlaying(next.playing);
  };

  el<HTMLInputElement>("scrub").oninput = (event) => {
    store.setPlaying(false);
    store.setCursor(Number((event.target as HTMLInputElement).value));
  };

  let last = performance.now();
  const tick = (now: number) => {
    const state = store.get();
    if (state.playing && state.result) {
      const duration = (state.result.motion.frames.length - 1)
        / state.result.motion.fps;
      const next = step({ cursorS: state.cursorS, playing: true },
                        (now - last) / 1000, duration);
      store.setCursor(next.cursorS);
      if (!next.playing) store.setPlaying(false);
    }
    last = now;
    requestAnimationFrame(tick);
  };
  requestAnimationFrame(tick);

  store.subscribe(renderAll);
  void client.dictionary()
    .then((manifest) => store.loadDictionary(
      manifest.units.map((u) => ({ id: u.id, intent: u.intent }))))
    .catch(() => store.setBanner("service unreachable; editing only"));
  renderAll();
}

document.addEventListener("DOMContentLoaded", bind);
