"""Canonical JSON writing so golden files are byte-stable.

Rules: keys sorted, no insignificant whitespace, UTF-8, NaN/inf rejected,
and floats with integral values written as ints (25.0 -> 25) so a
load/serialize round trip reproduces the input bytes.
"""

import json
from pathlib import Path


def _canon(obj):
    if isinstance(obj, float):
        if obj.is_integer():
            return int(obj)
        return obj
    if isinstance(obj, dict):
        return {k: _canon(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canon(v) for v in obj]
    return obj


def canonical_dumps(obj) -> str:
    return json.dumps(_canon(obj), sort_keys=True, separators=(",", ":"),
                      ensure_ascii=False, allow_nan=False)


def write_canonical(path, obj) -> None:
    Path(path).write_text(canonical_dumps(obj), encoding="utf-8")


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))
