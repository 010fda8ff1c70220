"""Prompt construction and reply parsing for the LLM classification path.

The template is original and versioned; bump the id whenever the wording
changes so cached exchanges from older templates are never replayed.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..errors import ContractViolation, MalformedReply
from ..script import Intent, INTENT_VALUES

_DEFINITIONS_HEADER = "Intent definitions:"

_SYSTEM_TEXT = """\
You annotate the sentences of a speech for gesture synthesis. Assign each
sentence exactly one intent label and pick one keyword copied verbatim from
that sentence (the word a gesture should land on).

Intent definitions:
- welcome: opening greeting toward the audience.
- farewell: closing or parting words, including thanks at the end.
- description: depicting an object, scene, or situation.
- explanation: giving reasons, causes, or logical connections.
- emphasis: stressing importance, certainty, or urgency.
- self_reference: the speaker points at themself or their own work.
- semantic: a word carrying its own recognizable emblem, like a thumbs up
  for "awesome"."""

_FEWSHOT = (
    ("Hello everyone, it is wonderful to be here.", Intent.WELCOME, "Hello"),
    ("That concludes my talk, thank you so much.", Intent.FAREWELL, "thank"),
    ("The engine pulls air through this narrow vent.", Intent.DESCRIPTION,
     "vent"),
    ("We chose copper because it conducts heat far better.",
     Intent.EXPLANATION, "because"),
    ("You should never skip the calibration step.", Intent.EMPHASIS, "never"),
    ("I built the first prototype in my garage.", Intent.SELF_REFERENCE, "I"),
    ("The results were absolutely awesome.", Intent.SEMANTIC, "awesome"),
)

_OUTPUT_CONTRACT = (
    'Reply with only a JSON array of {count} objects, one per sentence, '
    'each shaped {{"index": <sentence number>, "intent": <label>, '
    '"keyword": <word from that sentence>}}. No prose around the array.')


@dataclass(frozen=True)
class PromptTemplate:
    template_id: str
    system_text: str
    fewshot_examples: tuple[tuple[str, Intent, str], ...]
    output_contract: str

    def __post_init__(self):
        section = self.definitions_text
        for label in INTENT_VALUES:
            n = len(re.findall(rf"\b{re.escape(label)}\b", section))
            if n != 1:
                raise ValueError(
                    f"definitions section must name {label!r} exactly once, "
                    f"found {n}")

    @property
    def definitions_text(self) -> str:
        idx = self.system_text.find(_DEFINITIONS_HEADER)
        if idx < 0:
            raise ValueError("system_text has no definitions section")
        return self.system_text[idx + len(_DEFINITIONS_HEADER):]


DEFAULT_TEMPLATE = PromptTemplate(
    template_id="intent-classify-v1",
    system_text=_SYSTEM_TEXT,
    fewshot_examples=_FEWSHOT,
    output_contract=_OUTPUT_CONTRACT,
)


def build_prompt(template: PromptTemplate, sentences: list[str]) -> str:
    """Render the full prompt; byte-identical for identical inputs."""
    if not sentences:
        raise ValueError("build_prompt needs at least one sentence")
    lines = [template.system_text, "", "Examples:"]
    for sent, intent, keyword in template.fewshot_examples:
        reply = json.dumps({"index": 0, "intent": intent.value,
                            "keyword": keyword})
        lines.append(f'  "{sent}" -> {reply}')
    lines.append("")
    lines.append("Sentences:")
    for i, sent in enumerate(sentences):
        lines.append(f"{i}. {sent}")
    lines.append("")
    lines.append(template.output_contract.format(count=len(sentences)))
    return "\n".join(lines)


def parse_llm_response(reply: str,
                       expected_count: int) -> list[tuple[int, Intent, str]]:
    """Pull the first JSON array out of a reply and validate the contract.

    Tolerates prose and markdown fences around the array. Raises
    MalformedReply when no array parses at all, ContractViolation when the
    array breaks the count/index/intent contract.
    """
    decoder = json.JSONDecoder()
    array = None
    for m in re.finditer(r"\[", reply):
        try:
            candidate, _ = decoder.raw_decode(reply, m.start())
        except json.JSONDecodeError:
            continue
        if isinstance(candidate, list):
            array = candidate
            break
    if array is None:
        raise MalformedReply("reply contains no JSON array")
    if len(array) != expected_count:
        raise ContractViolation(
            f"expected {expected_count} items, got {len(array)}")
    results: dict[int, tuple[int, Intent, str]] = {}
    for item in array:
        if not isinstance(item, dict):
            raise ContractViolation(f"array item is not an object: {item!r}")
        try:
            index = int(item["index"])
            intent_raw = item["intent"]
            keyword = str(item["keyword"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ContractViolation(f"bad item {item!r}: {exc}") from exc
        if intent_raw not in INTENT_VALUES:
            raise ContractViolation(f"unknown intent {intent_raw!r}")
        if index in results:
            raise ContractViolation(f"duplicate index {index}")
        results[index] = (index, Intent(intent_raw), keyword)
    if set(results) != set(range(expected_count)):
        raise ContractViolation(
            f"indices {sorted(results)} do not cover 0..{expected_count - 1}")
    return [results[i] for i in range(expected_count)]
