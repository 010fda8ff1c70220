import { readFileSync } from "node:fs";
import { fileURLToPath } from "node:url";

import {
  DictionaryManifest,
  GestureScript,
  SynthesisResponse,
  TimingFile,
} from "../src/types.js";

function load<T>(name: string): T {
  const path = fileURLToPath(new URL(`../fixtures/${name}`,
                                     import.meta.url));
  return JSON.parse(readFileSync(path, "utf-8")) as T;
}

export const parseResponse = () => load<GestureScript>(
  "parse_response.json");
export const editedScript = () => load<GestureScript>(
  "edited_script.json");
export const synthesizeResponse = () => load<SynthesisResponse>(
  "synthesize_response.json");
export const synthesizeEmpty = () => load<SynthesisResponse>(
  "synthesize_empty.json");
export const dictionary = () => load<DictionaryManifest>(
  "dictionary.json");
export const timings = () => load<TimingFile>("timings.json");
