// Client-side mirror of the script invariants: the Synthesize button stays
// disabled while any of these fail.

import { GestureScript, INTENTS, Intent } from "./types.js";

function normalizeToken(token: string): string {
  return token
    .toLowerCase()
    .replace(/^[\p{P}]+/u, "")
    .replace(/[\p{P}]+$/u, "");
}

export function keywordMatches(keyword: string, text: string): boolean {
  if (!keyword) return false;
  const norm = normalizeToken(keyword);
  if (norm && text.split(/\s+/).some((t) => normalizeToken(t) === norm)) {
    return true;
  }
  return text.toLowerCase().includes(keyword.toLowerCase());
}

export function validateScript(script: GestureScript): string[] {
  const errors: string[] = [];
  if (script.version !== 1) {
    errors.push(`unsupported script version ${script.version}`);
  }
  script.sentences.forEach((s, i) => {
    if (s.index !== i) {
      errors.push(`sentence ${s.index} at position ${i}: indices must be ` +
        `contiguous from 0`);
    }
    if (!(INTENTS as readonly string[]).includes(s.intent)) {
      errors.push(`sentence ${i}: unknown intent ${s.intent}`);
    }
    if (!(s.start_s <= s.keyword_start_s
        && s.keyword_start_s < s.keyword_end_s
        && s.keyword_end_s <= s.end_s)) {
      errors.push(`sentence ${i}: keyword span ` +
        `[${s.keyword_start_s}, ${s.keyword_end_s}] not inside ` +
        `[${s.start_s}, ${s.end_s}]`);
    }
    if (!keywordMatches(s.keyword, s.text)) {
      errors.push(`sentence ${i}: keyword "${s.keyword}" is not a token ` +
        `or substring of the sentence`);
    }
    if (s.semantic_tag !== undefined && s.intent !== "semantic") {
      errors.push(`sentence ${i}: semantic_tag only valid with the ` +
        `semantic intent`);
    }
  });
  for (let i = 1; i < script.sentences.length; i++) {
    const prev = script.sentences[i - 1];
    const cur = script.sentences[i];
    if (cur.start_s < prev.end_s) {
      errors.push(`sentence ${cur.index} starts at ${cur.start_s} before ` +
        `sentence ${prev.index} ends at ${prev.end_s}`);
    }
  }
  return errors;
}

export function isIntent(value: string): value is Intent {
  return (INTENTS as readonly string[]).includes(value);
}

export { normalizeToken };
