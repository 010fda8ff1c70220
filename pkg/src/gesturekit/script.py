"""The gesture script: per-sentence intent, keyword, and timing.

This JSON document is the contract between text parsing and synthesis.
Sentence segmentation here is a deliberate punctuation rule, not a learned
splitter; abbreviations like "Mr." split early and that is accepted.
"""

from __future__ import annotations

import enum
import math
import unicodedata
from dataclasses import dataclass, field

from .errors import AlignmentMismatch, ScriptError
from .jsonio import canonical_dumps


class Intent(str, enum.Enum):
    WELCOME = "welcome"
    FAREWELL = "farewell"
    DESCRIPTION = "description"
    EXPLANATION = "explanation"
    EMPHASIS = "emphasis"
    SELF_REFERENCE = "self_reference"
    SEMANTIC = "semantic"


INTENT_VALUES = tuple(i.value for i in Intent)

_TERMINALS = ".!?。！？"


def normalize_token(token: str) -> str:
    """Casefold and strip surrounding punctuation for matching."""
    out = token.casefold()
    while out and unicodedata.category(out[0]).startswith("P"):
        out = out[1:]
    while out and unicodedata.category(out[-1]).startswith("P"):
        out = out[:-1]
    return out


@dataclass(frozen=True)
class WordTiming:
    word: str
    start_s: float
    end_s: float

    def __post_init__(self):
        if not math.isfinite(self.start_s) or self.start_s < 0:
            raise ValueError(f"start_s must be >= 0, got {self.start_s}")
        if not math.isfinite(self.end_s) or self.end_s <= self.start_s:
            raise ValueError(
                f"end_s must exceed start_s, got [{self.start_s}, {self.end_s}]")


@dataclass(frozen=True)
class SentenceEntry:
    index: int
    text: str
    start_s: float
    end_s: float
    intent: Intent
    keyword: str
    keyword_start_s: float
    keyword_end_s: float
    gesture_id: str | None = None
    semantic_tag: str | None = None

    def validate(self) -> None:
        if not (self.start_s <= self.keyword_start_s < self.keyword_end_s
                <= self.end_s):
            raise ScriptError(
                f"sentence {self.index}: keyword span "
                f"[{self.keyword_start_s}, {self.keyword_end_s}] not inside "
                f"[{self.start_s}, {self.end_s}]")
        if not keyword_matches(self.keyword, self.text):
            raise ScriptError(
                f"sentence {self.index}: keyword {self.keyword!r} is not a "
                f"token or substring of the sentence")
        if self.semantic_tag is not None and self.intent is not \
                Intent.SEMANTIC:
            raise ScriptError(
                f"sentence {self.index}: semantic_tag only valid with the "
                f"semantic intent")


def keyword_matches(keyword: str, text: str) -> bool:
    """Token equality after normalization, or raw substring containment.

    Substring containment covers scripts without word spacing (CJK), where
    keywords come from forced-alignment tokens rather than whitespace splits.
    """
    if not keyword:
        return False
    norm = normalize_token(keyword)
    if norm and any(normalize_token(t) == norm for t in text.split()):
        return True
    return keyword.casefold() in text.casefold()


@dataclass(frozen=True)
class GestureScript:
    version: int = 1
    sentences: tuple[SentenceEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sentences", tuple(self.sentences))

    def validate(self) -> None:
        if self.version != 1:
            raise ScriptError(f"unsupported script version {self.version}")
        for i, s in enumerate(self.sentences):
            if s.index != i:
                raise ScriptError(
                    f"sentence index {s.index} at position {i}: indices must "
                    f"be contiguous from 0")
            s.validate()
        for prev, cur in zip(self.sentences, self.sentences[1:]):
            if cur.start_s < prev.end_s:
                raise ScriptError(
                    f"sentence {cur.index} starts at {cur.start_s} before "
                    f"sentence {prev.index} ends at {prev.end_s}")

    @property
    def duration_s(self) -> float:
        return self.sentences[-1].end_s if self.sentences else 0.0


# ---------------------------------------------------------------------------
# sentence segmentation

def segment_sentences(text: str) -> list[tuple[int, str, list[str]]]:
    """Split text on terminal punctuation (. ! ? and CJK equivalents).

    Returns (index, sentence, whitespace tokens) triples. Every
    non-whitespace character of the input lands in exactly one sentence;
    runs of terminals (``?!``, ``...``) stay with their sentence.
    """
    if not text.strip():
        raise ValueError("empty input text")
    chunks: list[str] = []
    buf: list[str] = []
    i, n = 0, len(text)
    while i < n:
        c = text[i]
        buf.append(c)
        if c in _TERMINALS:
            while i + 1 < n and text[i + 1] in _TERMINALS:
                i += 1
                buf.append(text[i])
            chunk = "".join(buf).strip()
            if chunk:
                chunks.append(chunk)
            buf = []
        i += 1
    tail = "".join(buf).strip()
    if tail:
        chunks.append(tail)
    return [(i, s, s.split()) for i, s in enumerate(chunks)]


# ---------------------------------------------------------------------------
# timing attachment

@dataclass(frozen=True)
class TimedSentence:
    """A segmented sentence with word timings attached, intent still unset."""

    index: int
    text: str
    tokens: tuple[str, ...]
    start_s: float
    end_s: float
    # one entry per token; None where the token is punctuation-only
    word_timings: tuple[WordTiming | None, ...] = field(repr=False, default=())

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s


def check_timing_order(timings: list[WordTiming]) -> None:
    for prev, cur in zip(timings, timings[1:]):
        if cur.start_s < prev.start_s or cur.start_s < prev.end_s - 1e-9:
            raise ValueError(
                f"timings overlap or regress at {cur.word!r} "
                f"({cur.start_s} after {prev.word!r} ending {prev.end_s})")


def attach_timings(sentences: list[tuple[int, str, list[str]]],
                   timings: list[WordTiming]) -> list[TimedSentence]:
    """Greedy left-to-right match of sentence tokens against word timings.

    Tokens are compared after punctuation stripping and case folding;
    punctuation-only tokens are skipped. A token may also be consumed by a
    run of timing words that concatenate to it, which is how unspaced CJK
    sentences align against forced-alignment tokenization. The first
    divergent token raises AlignmentMismatch.
    """
    check_timing_order(timings)
    out: list[TimedSentence] = []
    pos = 0
    for index, text, tokens in sentences:
        per_token: list[WordTiming | None] = []
        matched: list[WordTiming] = []
        for tok in tokens:
            norm = normalize_token(tok)
            if not norm:
                per_token.append(None)
                continue
            if pos >= len(timings):
                raise AlignmentMismatch(
                    f"sentence {index}: ran out of word timings at token "
                    f"{tok!r}")
            first = pos
            remainder = norm
            while remainder:
                if pos >= len(timings):
                    raise AlignmentMismatch(
                        f"sentence {index}: ran out of word timings inside "
                        f"token {tok!r}")
                word = normalize_token(timings[pos].word)
                if not word or not remainder.startswith(word):
                    raise AlignmentMismatch(
                        f"sentence {index}: token {tok!r} does not match "
                        f"timed word {timings[pos].word!r}")
                remainder = remainder[len(word):]
                pos += 1
            span = WordTiming(norm, timings[first].start_s,
                              timings[pos - 1].end_s)
            per_token.append(span)
            matched.extend(timings[first:pos])
        if not matched:
            raise AlignmentMismatch(
                f"sentence {index}: no alignable tokens in {text!r}")
        out.append(TimedSentence(index, text, tuple(tokens),
                                 matched[0].start_s, matched[-1].end_s,
                                 tuple(per_token)))
    if pos != len(timings):
        raise AlignmentMismatch(
            f"{len(timings) - pos} word timings left over after the last "
            f"sentence (first: {timings[pos].word!r})")
    return out


# ---------------------------------------------------------------------------
# serialization

def script_to_obj(script: GestureScript) -> dict:
    sentences = []
    for s in script.sentences:
        entry = {
            "index": s.index,
            "text": s.text,
            "start_s": s.start_s,
            "end_s": s.end_s,
            "intent": s.intent.value,
            "keyword": s.keyword,
            "keyword_start_s": s.keyword_start_s,
            "keyword_end_s": s.keyword_end_s,
        }
        if s.gesture_id is not None:
            entry["gesture_id"] = s.gesture_id
        if s.semantic_tag is not None:
            entry["semantic_tag"] = s.semantic_tag
        sentences.append(entry)
    return {"version": script.version, "sentences": sentences}


def serialize_script(script: GestureScript) -> str:
    script.validate()
    return canonical_dumps(script_to_obj(script))


_REQUIRED_FIELDS = ("index", "text", "start_s", "end_s", "intent", "keyword",
                    "keyword_start_s", "keyword_end_s")


def script_from_obj(obj) -> GestureScript:
    if not isinstance(obj, dict):
        raise ScriptError("script must be a JSON object")
    if "sentences" not in obj or not isinstance(obj["sentences"], list):
        raise ScriptError("script missing sentences list")
    entries = []
    for i, raw in enumerate(obj["sentences"]):
        if not isinstance(raw, dict):
            raise ScriptError(f"sentence {i} is not an object")
        for key in _REQUIRED_FIELDS:
            if key not in raw:
                raise ScriptError(f"sentence {i} missing field {key!r}")
        intent_raw = raw["intent"]
        if intent_raw not in INTENT_VALUES:
            raise ScriptError(
                f"sentence {i}: unknown intent {intent_raw!r} (allowed: "
                f"{', '.join(INTENT_VALUES)})")
        unknown = set(raw) - set(_REQUIRED_FIELDS) - {"gesture_id",
                                                      "semantic_tag"}
        if unknown:
            raise ScriptError(
                f"sentence {i}: unknown fields {sorted(unknown)}")
        entries.append(SentenceEntry(
            index=int(raw["index"]),
            text=str(raw["text"]),
            start_s=float(raw["start_s"]),
            end_s=float(raw["end_s"]),
            intent=Intent(intent_raw),
            keyword=str(raw["keyword"]),
            keyword_start_s=float(raw["keyword_start_s"]),
            keyword_end_s=float(raw["keyword_end_s"]),
            gesture_id=raw.get("gesture_id"),
            semantic_tag=raw.get("semantic_tag"),
        ))
    script = GestureScript(version=obj.get("version", 0), sentences=entries)
    script.validate()
    return script


def parse_script(content: str) -> GestureScript:
    import json
    try:
        obj = json.loads(content)
    except json.JSONDecodeError as exc:
        raise ScriptError(f"script is not valid JSON: {exc}") from exc
    return script_from_obj(obj)


# ---------------------------------------------------------------------------
# word-timing JSON (the non-TextGrid ingestion path)

def timings_to_obj(timings: list[WordTiming]) -> dict:
    return {"words": [{"word": t.word, "start_s": t.start_s, "end_s": t.end_s}
                      for t in timings]}


def timings_from_obj(obj) -> list[WordTiming]:
    if not isinstance(obj, dict) or not isinstance(obj.get("words"), list):
        raise ValueError('timing file must be {"words": [...]}')
    timings = [WordTiming(str(w["word"]), float(w["start_s"]),
                          float(w["end_s"]))
               for w in obj["words"]]
    check_timing_order(timings)
    return timings
