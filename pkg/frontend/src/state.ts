// Session state: the loaded script, its word timings, the latest
// synthesis result, and the playback cursor. All edits go through the
// actions here so the dirty flag and validation stay truthful.

import {
  GestureScript,
  Intent,
  SynthesisResponse,
  WordTiming,
} from "./types.js";
import { normalizeToken, validateScript } from "./validate.js";

export interface SessionState {
  script: GestureScript | null;
  timings: WordTiming[];
  dictionarySummary: { id: string; intent: string }[] | null;
  result: SynthesisResponse | null;
  cursorS: number;
  playing: boolean;
  dirty: boolean;
  banner: string | null;
}

export type Listener = (state: SessionState) => void;

export class SessionStore {
  private state: SessionState = {
    script: null,
    timings: [],
    dictionarySummary: null,
    result: null,
    cursorS: 0,
    playing: false,
    dirty: false,
    banner: null,
  };

  private listeners: Listener[] = [];

  get(): SessionState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private commit(patch: Partial<SessionState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }

  loadScript(script: GestureScript, timings: WordTiming[]): void {
    this.commit({ script, timings, result: null, cursorS: 0,
                  dirty: false, banner: null });
  }

  loadDictionary(summary: { id: string; intent: string }[]): void {
    this.commit({ dictionarySummary: summary });
  }

  validationErrors(): string[] {
    const script = this.state.script;
    return script ? validateScript(script) : ["no script loaded"];
  }

  canSynthesize(): boolean {
    return this.state.script !== null
      && this.validationErrors().length === 0;
  }

  setIntent(index: number, intent: Intent): void {
    const script = this.requireScript();
    const sentences = script.sentences.map((s) => {
      if (s.index !== index) return s;
      const next = { ...s, intent };
      if (intent !== "semantic") delete next.semantic_tag;
      return next;
    });
    this.commit({ script: { ...script, sentences }, dirty: true });
  }

  /** Word timings lying inside one sentence's span, in order. */
  sentenceWords(index: number): WordTiming[] {
    const script = this.requireScript();
    const sentence = script.sentences[index];
    return this.state.timings.filter(
      (w) => w.start_s >= sentence.start_s - 1e-9
        && w.end_s <= sentence.end_s + 1e-9);
  }

  /**
   * Keyword selection by clicking the nth token of the sentence text.
   * Only tokens of the sentence are offered, so an out-of-sentence
   * keyword cannot be constructed. Returns false when the token has no
   * word timing (punctuation-only tokens).
   */
  setKeywordFromToken(index: number, tokenIndex: number): boolean {
    const script = this.requireScript();
    const sentence = script.sentences[index];
    const tokens = sentence.text.split(/\s+/);
    if (tokenIndex < 0 || tokenIndex >= tokens.length) return false;
    const norm = normalizeToken(tokens[tokenIndex]);
    if (!norm) return false;
    // occurrence rank of this token among equal-normalized ones
    let rank = 0;
    for (let i = 0; i < tokenIndex; i++) {
      if (normalizeToken(tokens[i]) === norm) rank++;
    }
    const words = this.sentenceWords(index)
      .filter((w) => normalizeToken(w.word) === norm);
    const timing = words[rank] ?? words[0];
    if (!timing) return false;
    const sentences = script.sentences.map((s) =>
      s.index === index
        ? { ...s, keyword: norm, keyword_start_s: timing.start_s,
            keyword_end_s: timing.end_s }
        : s);
    this.commit({ script: { ...script, sentences }, dirty: true });
    return true;
  }

  setResult(result: SynthesisResponse): void {
    this.commit({ result, dirty: false, cursorS: 0, banner: null });
  }

  setBanner(message: string | null): void {
    this.commit({ banner: message });
  }

  setCursor(cursorS: number): void {
    const result = this.state.result;
    const max = result
      ? (result.motion.frames.length - 1) / result.motion.fps
      : 0;
    this.commit({ cursorS: Math.min(Math.max(cursorS, 0), max) });
  }

  setPlaying(playing: boolean): void {
    this.commit({ playing });
  }

  private requireScript(): GestureScript {
    if (!this.state.script) throw new Error("no script loaded");
    return this.state.script;
  }
}
