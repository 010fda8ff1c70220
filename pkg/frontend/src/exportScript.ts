// Lossless script export: stable key order and no insignificant
// whitespace, so export -> import -> export is byte-identical.

import { GestureScript } from "./types.js";

function stableStringify(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return `[${value.map(stableStringify).join(",")}]`;
  }
  const obj = value as Record<string, unknown>;
  const keys = Object.keys(obj)
    .filter((k) => obj[k] !== undefined)
    .sort();
  const body = keys
    .map((k) => `${JSON.stringify(k)}:${stableStringify(obj[k])}`)
    .join(",");
  return `{${body}}`;
}

export function exportScript(script: GestureScript): string {
  return stableStringify(script);
}

export function importScript(text: string): GestureScript {
  const obj = JSON.parse(text);
  if (typeof obj !== "object" || obj === null
      || !Array.isArray(obj.sentences)) {
    throw new Error("not a gesture script");
  }
  return obj as GestureScript;
}

export { stableStringify };
