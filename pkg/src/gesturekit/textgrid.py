"""Minimal Praat TextGrid reader: the words interval tier only.

Only long-form ("text") TextGrids are supported, which is what forced
aligners emit; the short form raises a format error.
"""

from __future__ import annotations

import re

from .errors import TextGridError
from .script import WordTiming, check_timing_order

_ITEM_RE = re.compile(r'\s*item\s*\[\d+\]\s*:')
_CLASS_RE = re.compile(r'\s*class\s*=\s*"([^"]*)"')
_NAME_RE = re.compile(r'\s*name\s*=\s*"([^"]*)"')
_INTERVAL_RE = re.compile(r'\s*intervals\s*\[\d+\]\s*:')
_NUM_RE = re.compile(r'\s*(xmin|xmax)\s*=\s*([-+0-9.eE]+)\s*$')
_TEXT_RE = re.compile(r'\s*text\s*=\s*"(.*)"\s*$')


def _next_content(lines: list[str], i: int) -> int:
    while i < len(lines) and not lines[i].strip():
        i += 1
    return i


def _read_interval(lines: list[str], i: int) -> tuple[float, float, str, int]:
    """Parse the xmin/xmax/text triple that follows an intervals header."""
    values: dict[str, float] = {}
    for key in ("xmin", "xmax"):
        i = _next_content(lines, i)
        m = _NUM_RE.match(lines[i]) if i < len(lines) else None
        if m is None or m.group(1) != key:
            raise TextGridError(f"expected {key} in interval block",
                                line=min(i, len(lines) - 1) + 1)
        values[key] = float(m.group(2))
        i += 1
    i = _next_content(lines, i)
    m = _TEXT_RE.match(lines[i]) if i < len(lines) else None
    if m is None:
        raise TextGridError("expected text in interval block",
                            line=min(i, len(lines) - 1) + 1)
    text = m.group(1).replace('""', '"')
    return values["xmin"], values["xmax"], text, i + 1


def parse_textgrid(content: str) -> list[WordTiming]:
    """Extract one WordTiming per non-empty interval of the words tier."""
    lines = content.splitlines()
    if not any(re.match(r'\s*tiers\?\s*<exists>', ln) for ln in lines):
        if any(ln.strip() == "<exists>" for ln in lines):
            raise TextGridError("short-form TextGrid is not supported")
        raise TextGridError('not a long-form TextGrid (no "tiers? <exists>")')

    i = 0
    n = len(lines)
    while i < n:
        if not _ITEM_RE.match(lines[i]):
            i += 1
            continue
        # header of one tier: class then name
        i += 1
        i = _next_content(lines, i)
        cls = _CLASS_RE.match(lines[i]) if i < n else None
        if cls is None:
            raise TextGridError("item block without a class line",
                                line=min(i, n - 1) + 1)
        i += 1
        i = _next_content(lines, i)
        name = _NAME_RE.match(lines[i]) if i < n else None
        if name is None:
            raise TextGridError("item block without a name line",
                                line=min(i, n - 1) + 1)
        i += 1
        if cls.group(1) != "IntervalTier" or name.group(1) != "words":
            continue
        # the words tier: collect its interval blocks
        words: list[WordTiming] = []
        while i < n and not _ITEM_RE.match(lines[i]):
            if _INTERVAL_RE.match(lines[i]):
                header_line = i + 1
                xmin, xmax, text, i = _read_interval(lines, i + 1)
                if not text:
                    continue
                if xmax <= xmin:
                    raise TextGridError(
                        f"interval for {text!r} has xmax <= xmin",
                        line=header_line)
                words.append(WordTiming(text, xmin, xmax))
            else:
                i += 1
        try:
            check_timing_order(words)
        except ValueError as exc:
            raise TextGridError(str(exc)) from exc
        return words
    raise TextGridError('no interval tier named "words"')
