"""Chat-completion client with a replay cache, plus the classify front end.

The HTTP contract is provider-agnostic: POST {model, messages[],
temperature}, reply text taken from the first choice's message content.
Every validated exchange is written to a content-addressed cache so reruns
and tests are network-free and deterministic.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import dataclass
from pathlib import Path

from ..errors import ContractViolation, MalformedReply, TransportError
from ..script import GestureScript, Intent, SentenceEntry, TimedSentence, \
    keyword_matches, normalize_token
from .lexicon import Lexicon, classify_offline
from .prompts import DEFAULT_TEMPLATE, PromptTemplate, build_prompt, \
    parse_llm_response


@dataclass(frozen=True)
class LlmConfig:
    endpoint_url: str = "https://api.openai.com/v1/chat/completions"
    model_name: str = "gpt-4o-mini"
    api_key_env: str = "GESTUREKIT_API_KEY"
    timeout_s: float = 30.0
    max_retries: int = 2
    temperature: float = 0.0

    def __post_init__(self):
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")
        if self.temperature < 0:
            raise ValueError("temperature must be >= 0")


class ReplayCache:
    """Content-addressed request/response files keyed by prompt hash.

    Writers stage to a temp file and rename, so concurrent readers never
    see partial entries.
    """

    def __init__(self, directory):
        self.directory = Path(directory)
        self.directory.mkdir(parents=True, exist_ok=True)

    @staticmethod
    def key(template_id: str, prompt: str) -> str:
        digest = hashlib.sha256(
            (template_id + "\n" + prompt).encode("utf-8")).hexdigest()
        return digest

    def _path(self, key: str) -> Path:
        return self.directory / f"{key}.json"

    def get(self, key: str) -> str | None:
        path = self._path(key)
        if not path.exists():
            return None
        obj = json.loads(path.read_text(encoding="utf-8"))
        return obj["response"]

    def put(self, key: str, request_obj: dict, response: str) -> None:
        payload = json.dumps({"request": request_obj, "response": response},
                             ensure_ascii=False, sort_keys=True, indent=1)
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, self._path(key))
        finally:
            if os.path.exists(tmp):
                os.unlink(tmp)


class HttpTransport:
    """Default network transport for chat completions."""

    def __init__(self, config: LlmConfig):
        self.config = config

    def complete(self, prompt: str) -> str:
        import requests

        api_key = os.environ.get(self.config.api_key_env)
        if not api_key:
            raise TransportError(
                f"environment variable {self.config.api_key_env} is not set")
        payload = {"model": self.config.model_name,
                   "messages": [{"role": "user", "content": prompt}],
                   "temperature": self.config.temperature}
        try:
            resp = requests.post(
                self.config.endpoint_url, json=payload,
                headers={"Authorization": f"Bearer {api_key}"},
                timeout=self.config.timeout_s)
            resp.raise_for_status()
            data = resp.json()
            return data["choices"][0]["message"]["content"]
        except TransportError:
            raise
        except Exception as exc:
            raise TransportError(f"chat completion failed: {exc}") from exc


@dataclass(frozen=True)
class IntentResult:
    intent: Intent
    keyword: str
    semantic_tag: str | None
    provenance: str  # "offline" | "llm" | "repaired" | "fallback"


def _offline_results(token_lists, lexicon: Lexicon,
                     provenance: str) -> list[IntentResult]:
    out = []
    for tokens in token_lists:
        intent, keyword, tag = classify_offline(tokens, lexicon)
        out.append(IntentResult(intent, keyword, tag, provenance))
    return out


def classify(sentences,
             lexicon: Lexicon,
             tokens=None,
             mode: str = "offline",
             config: LlmConfig | None = None,
             cache_dir=None,
             transport=None,
             template: PromptTemplate | None = None) -> list[IntentResult]:
    """Classify a batch of sentences into (intent, keyword, tag) results.

    mode "offline" never touches the network. mode "llm" tries the cached
    or live LLM path with retries and silently falls back to the offline
    classifier; "llm-strict" raises TransportError instead of falling back
    on network failure.
    """
    sentences = list(sentences)
    if tokens is None:
        tokens = [s.split() for s in sentences]
    token_lists = [list(t) for t in tokens]
    if len(token_lists) != len(sentences):
        raise ValueError("tokens and sentences must pair up")
    if not sentences:
        return []
    if mode == "offline":
        return _offline_results(token_lists, lexicon, "offline")
    if mode not in ("llm", "llm-strict"):
        raise ValueError(f"unknown classification mode {mode!r}")

    config = config or LlmConfig()
    template = template or DEFAULT_TEMPLATE
    prompt = build_prompt(template, sentences)
    cache = ReplayCache(cache_dir) if cache_dir is not None else None
    key = ReplayCache.key(template.template_id, prompt)

    parsed = None
    cached = cache.get(key) if cache is not None else None
    if cached is not None:
        parsed = parse_llm_response(cached, len(sentences))
    else:
        if transport is None:
            transport = HttpTransport(config)
        transport_failure = None
        for _ in range(config.max_retries + 1):
            try:
                reply = transport.complete(prompt)
            except TransportError as exc:
                transport_failure = exc
                continue
            try:
                parsed = parse_llm_response(reply, len(sentences))
            except (MalformedReply, ContractViolation):
                continue
            if cache is not None:
                cache.put(key, {"template_id": template.template_id,
                                "model": config.model_name,
                                "prompt": prompt}, reply)
            break
        if parsed is None and transport_failure is not None \
                and mode == "llm-strict":
            raise TransportError(
                f"LLM transport failed after {config.max_retries + 1} "
                f"attempts: {transport_failure}") from transport_failure
    if parsed is None:
        return _offline_results(token_lists, lexicon, "fallback")

    results = []
    for (index, intent, keyword), sentence, toks in zip(parsed, sentences,
                                                        token_lists):
        tag = None
        if intent is Intent.SEMANTIC:
            hit = lexicon.cues.get(normalize_token(keyword))
            if hit is not None and hit[0] is Intent.SEMANTIC:
                tag = hit[1]
        if keyword_matches(keyword, sentence):
            results.append(IntentResult(intent, keyword, tag, "llm"))
        else:
            _, fixed_keyword, fixed_tag = classify_offline(toks, lexicon)
            if intent is Intent.SEMANTIC and tag is None:
                tag = fixed_tag
            results.append(IntentResult(intent, fixed_keyword, tag,
                                        "repaired"))
    return results


def _keyword_span(ts: TimedSentence,
                  keyword: str) -> tuple[float, float] | None:
    """Locate a keyword's time span inside a timed sentence.

    Tries a consecutive token match first (multi-word keywords supported),
    then substring containment inside a timed token.
    """
    norms = [normalize_token(t) for t in ts.tokens]
    parts = [p for p in (normalize_token(p) for p in keyword.split()) if p]
    if parts:
        for i in range(len(norms) - len(parts) + 1):
            window = norms[i:i + len(parts)]
            timings = ts.word_timings[i:i + len(parts)]
            if window == parts and all(t is not None for t in timings):
                return timings[0].start_s, timings[-1].end_s
    needle = keyword.casefold()
    if needle:
        for tok, timing in zip(ts.tokens, ts.word_timings):
            if timing is not None and needle in tok.casefold():
                return timing.start_s, timing.end_s
    return None


def assemble_script(timed_sentences: list[TimedSentence],
                    results: list[IntentResult]
                    ) -> tuple[GestureScript, list[str]]:
    """Merge timed sentences with classification results into a script.

    Keywords whose time span cannot be located fall back to the whole
    sentence span; those cases come back as notes for the caller to log.
    """
    notes: list[str] = []
    entries = []
    for ts, res in zip(timed_sentences, results, strict=True):
        span = _keyword_span(ts, res.keyword)
        if span is None:
            span = (ts.start_s, ts.end_s)
            notes.append(
                f"sentence {ts.index}: keyword {res.keyword!r} has no word "
                f"timing, using the sentence span")
        entries.append(SentenceEntry(
            index=ts.index, text=ts.text,
            start_s=ts.start_s, end_s=ts.end_s,
            intent=res.intent, keyword=res.keyword,
            keyword_start_s=span[0], keyword_end_s=span[1],
            semantic_tag=(res.semantic_tag
                          if res.intent is Intent.SEMANTIC else None)))
    script = GestureScript(version=1, sentences=tuple(entries))
    script.validate()
    return script, notes
