#!/usr/bin/env python3
"""Record service responses as viewer contract fixtures.

Run from the repository root after changing the service or the bundled
data:  python3 tools/record_viewer_fixtures.py
"""

import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from fastapi.testclient import TestClient

import gesturekit
from gesturekit.dictionary import load_dictionary
from gesturekit.jsonio import canonical_dumps
from gesturekit.service import create_app


def main() -> None:
    data = Path(gesturekit.__file__).parent / "data"
    out = ROOT / "frontend" / "fixtures"
    out.mkdir(parents=True, exist_ok=True)
    dictionary = load_dictionary(data / "minidict" / "manifest.json")
    client = TestClient(create_app(dictionary))

    text = (data / "fixtures" / "transcript.txt").read_text(
        encoding="utf-8")
    timings = json.loads((data / "fixtures" / "timings.json").read_text(
        encoding="utf-8"))

    script = client.post("/api/parse",
                         json={"text": text, "timings": timings}).json()
    (out / "parse_response.json").write_text(canonical_dumps(script),
                                             encoding="utf-8")
    (out / "timings.json").write_text(canonical_dumps(timings),
                                      encoding="utf-8")

    # the operator edit exercised by the contract tests
    edited = json.loads(canonical_dumps(script))
    edited["sentences"][3]["intent"] = "emphasis"
    (out / "edited_script.json").write_text(canonical_dumps(edited),
                                            encoding="utf-8")

    resp = client.post("/api/synthesize", json={
        "script": edited, "options": {"mode": "stroke", "seed": 7}})
    resp.raise_for_status()
    (out / "synthesize_response.json").write_text(
        canonical_dumps(resp.json()), encoding="utf-8")

    manifest = client.get("/api/dictionary").json()
    (out / "dictionary.json").write_text(canonical_dumps(manifest),
                                         encoding="utf-8")

    empty = client.post("/api/synthesize", json={
        "script": {"version": 1, "sentences": []}}).json()
    (out / "synthesize_empty.json").write_text(canonical_dumps(empty),
                                               encoding="utf-8")
    print("recorded", sorted(p.name for p in out.iterdir()))


if __name__ == "__main__":
    main()
