"""Deterministic cue-word classifier: the offline fallback for text parsing.

Strict left-to-right first hit wins; at one position a two-word phrase
outranks a single word. No hit falls back to the default intent with the
longest non-stopword token as keyword. Kept deliberately simple so every
decision is auditable; the LLM path carries the nuance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from ..script import Intent, normalize_token


@dataclass(frozen=True)
class Lexicon:
    cues: dict[str, tuple[Intent, str | None]]
    stopwords: frozenset[str]
    default_intent: Intent

    def __post_init__(self):
        for cue in self.cues:
            if cue != cue.casefold():
                raise ValueError(f"cue {cue!r} must be lowercase")


def load_lexicon(path=None) -> Lexicon:
    """Load a lexicon file; with no path, the packaged starter lexicon."""
    if path is None:
        raw = (resources.files("gesturekit.nlu") / "data" /
               "lexicon.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    obj = json.loads(raw)
    cues = {}
    for cue, spec in obj["cues"].items():
        cues[cue] = (Intent(spec["intent"]), spec.get("tag"))
    return Lexicon(cues=cues,
                   stopwords=frozenset(obj.get("stopwords", ())),
                   default_intent=Intent(obj.get("default_intent",
                                                 "description")))


def classify_offline(tokens, lexicon: Lexicon) -> tuple[Intent, str, str | None]:
    """Classify one sentence given its tokens.

    Returns (intent, keyword, semantic_tag); the keyword is the normalized
    matching token, or, without a cue hit, the longest non-stopword token
    (earliest on ties).
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("classify_offline needs at least one token")
    norms = [normalize_token(t) for t in tokens]
    for i, norm in enumerate(norms):
        if not norm:
            continue
        if i + 1 < len(norms) and norms[i + 1]:
            hit = lexicon.cues.get(f"{norm} {norms[i + 1]}")
            if hit is not None:
                return hit[0], f"{norm} {norms[i + 1]}", hit[1]
        hit = lexicon.cues.get(norm)
        if hit is not None:
            return hit[0], norm, hit[1]
    best = None
    for norm in norms:
        if not norm or norm in lexicon.stopwords:
            continue
        if best is None or len(norm) > len(best):
            best = norm
    if best is None:
        best = next((n for n in norms if n), tokens[0])
    return lexicon.default_intent, best, None
