#!/usr/bin/env python3
"""Regenerate the bundled fixtures: mini dictionary, transcript, timings.

Deterministic by construction; rerunning must reproduce identical bytes.
Run from the repository root:  python3 tools/make_fixtures.py
"""

from __future__ import annotations

import math
import sys
from pathlib import Path

import numpy as np

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from gesturekit.dictionary import Dictionary, GestureUnit, StageMap, \
    save_dictionary
from gesturekit.jsonio import write_canonical
from gesturekit.motion import MotionClip, Pose
from gesturekit.script import Intent

FPS = 25.0

JOINTS = ("spine", "neck", "head",
          "l_shoulder", "l_elbow", "l_wrist",
          "r_shoulder", "r_elbow", "r_wrist")

REST = np.array([
    [0.00, 1.00, 0.0],   # spine
    [0.00, 1.45, 0.0],   # neck
    [0.00, 1.60, 0.0],   # head
    [-0.20, 1.40, 0.0],  # l_shoulder
    [-0.25, 1.15, 0.0],  # l_elbow
    [-0.27, 0.90, 0.0],  # l_wrist
    [0.20, 1.40, 0.0],   # r_shoulder
    [0.25, 1.15, 0.0],   # r_elbow
    [0.27, 0.90, 0.0],   # r_wrist
])

J = {name: i for i, name in enumerate(JOINTS)}

# per-variant stage frame counts at 25 fps: lead, prep, stroke, hold, retr
VARIANT_FRAMES = {
    3: (5, 15, 20, 10, 20),
    6: (5, 25, 20, 70, 25),
    9: (5, 30, 20, 115, 45),
}
VARIANT_TOTAL = {3: 76, 6: 151, 9: 226}

# accent-pose offsets per shape: joint -> (dx, dy, dz)
SHAPES = {
    Intent.WELCOME: [
        ("welcome_open", None, {
            "l_wrist": (-0.18, 0.32, 0.12), "r_wrist": (0.18, 0.32, 0.12),
            "l_elbow": (-0.10, 0.16, 0.06), "r_elbow": (0.10, 0.16, 0.06)},
         None),
        ("welcome_raise", None, {
            "r_wrist": (0.08, 0.50, 0.10), "r_elbow": (0.05, 0.28, 0.05),
            "l_wrist": (-0.05, 0.10, 0.05)}, None),
    ],
    Intent.FAREWELL: [
        ("farewell_wave", None, {
            "r_wrist": (0.12, 0.55, 0.05), "r_elbow": (0.08, 0.30, 0.02)},
         None),
        ("farewell_clasp", None, {
            "l_wrist": (0.12, 0.35, 0.10), "r_wrist": (-0.12, 0.35, 0.10),
            "l_elbow": (0.05, 0.15, 0.05), "r_elbow": (-0.05, 0.15, 0.05)},
         None),
    ],
    Intent.DESCRIPTION: [
        ("description_sweep", None, {
            "l_wrist": (-0.05, 0.22, 0.28), "r_wrist": (0.05, 0.22, 0.28),
            "l_elbow": (-0.02, 0.10, 0.12), "r_elbow": (0.02, 0.10, 0.12)},
         None),
        ("description_frame", None, {
            "l_wrist": (-0.22, 0.28, 0.15), "r_wrist": (0.22, 0.28, 0.15)},
         None),
    ],
    Intent.EXPLANATION: [
        ("explanation_palms", None, {
            "l_wrist": (-0.15, 0.18, 0.18), "r_wrist": (0.15, 0.18, 0.18),
            "l_elbow": (-0.08, 0.08, 0.08), "r_elbow": (0.08, 0.08, 0.08)},
         None),
        ("explanation_tilt", None, {
            "r_wrist": (0.20, 0.25, 0.15), "l_wrist": (-0.08, 0.12, 0.08)},
         None),
    ],
    Intent.EMPHASIS: [
        ("emphasis_chop", None,
         {"r_wrist": (0.02, 0.10, 0.30), "r_elbow": (0.02, 0.06, 0.14)},
         {"r_wrist": (0.05, 0.45, 0.10), "r_elbow": (0.04, 0.22, 0.05)}),
        ("emphasis_press", None,
         {"l_wrist": (-0.06, 0.05, 0.22), "r_wrist": (0.06, 0.05, 0.22)},
         {"l_wrist": (-0.08, 0.30, 0.10), "r_wrist": (0.08, 0.30, 0.10)}),
    ],
    Intent.SELF_REFERENCE: [
        ("self_reference_chest", None, {
            "r_wrist": (-0.20, 0.42, 0.10), "r_elbow": (-0.05, 0.20, 0.05)},
         None),
        ("self_reference_both", None, {
            "l_wrist": (0.15, 0.40, 0.08), "r_wrist": (-0.15, 0.40, 0.08)},
         None),
    ],
    Intent.SEMANTIC: [
        ("semantic_thumbs_up", "thumbs_up", {
            "r_wrist": (0.05, 0.50, 0.15), "r_elbow": (0.02, 0.25, 0.08)},
         None),
        ("semantic_palm_stop", "palm_stop", {
            "r_wrist": (0.08, 0.35, 0.30), "r_elbow": (0.05, 0.18, 0.15)},
         None),
    ],
}

LIFT = {"l_wrist": (0.0, 0.08, 0.0), "r_wrist": (0.0, 0.08, 0.0),
        "l_elbow": (0.0, 0.04, 0.0), "r_elbow": (0.0, 0.04, 0.0)}


def ease(a: float) -> float:
    return 0.5 - 0.5 * math.cos(math.pi * a)


def _offsets(spec: dict | None) -> np.ndarray:
    out = np.zeros((len(JOINTS), 3))
    for joint, (dx, dy, dz) in (spec or {}).items():
        out[J[joint]] = (dx, dy, dz)
    return out


def build_unit(name: str, intent: Intent, tag: str | None, accent_spec: dict,
               ready_spec: dict | None, variant: int) -> GestureUnit:
    accent = _offsets(accent_spec)
    if ready_spec is not None:
        ready = _offsets(ready_spec)
    else:
        ready = 0.4 * accent + _offsets(
            {j: LIFT[j] for j in accent_spec if j in LIFT})
    lead, prep, stroke, hold, retr = VARIANT_FRAMES[variant]
    total = VARIANT_TOTAL[variant]
    b0 = lead
    b1 = b0 + prep
    b2 = b1 + stroke
    b3 = b2 + hold
    b4 = b3 + retr
    frames = np.zeros((total, len(JOINTS), 3))
    for t in range(total):
        if t <= b0:
            off = np.zeros_like(accent)
        elif t <= b1:
            off = ease((t - b0) / prep) * ready
        elif t <= b2:
            off = ready + ease((t - b1) / stroke) * (accent - ready)
        elif t <= b3:
            off = accent
        elif t <= b4:
            off = (1.0 - ease((t - b3) / retr)) * accent
        else:
            off = np.zeros_like(accent)
        frames[t] = REST + off
    unit_id = f"{name}_{variant}s"
    stages = StageMap(
        preparation=(b0, b1), stroke=(b1, b2),
        stroke_apex=b1 + stroke // 2,
        hold=(b2, b3), retraction=(b3, b4))
    return GestureUnit(
        id=unit_id, intent=intent, duration_variant_s=variant,
        clip=MotionClip(FPS, JOINTS, np.round(frames, 6)),
        stages=stages, semantic_tag=tag, clip_file=f"clips/{unit_id}.json")


def make_dictionary(out_dir: Path) -> None:
    units = []
    for intent in Intent:
        for name, tag, accent, ready in SHAPES[intent]:
            for variant in (3, 6, 9):
                units.append(build_unit(name, intent, tag, accent, ready,
                                        variant))
    dictionary = Dictionary(rest_pose=Pose(JOINTS, REST),
                            units=tuple(units))
    manifest = save_dictionary(dictionary, out_dir)
    print(f"{len(units)} units -> {manifest}")


# keyword cues sit a few words in so stroke alignment has room to pull
# onsets back without colliding with the previous entry; sentence 0 keeps
# an opening cue on purpose (exercises the onset clamp) and sentence 7 is
# too short for any gesture (exercises the duration floor).
SENTENCES = [
    "Hello everyone and welcome to the annual robotics laboratory open "
    "day.",
    "The founders built this space, and I still maintain every corner of "
    "it myself.",
    "Over on the left wall you can see the heavy milling machines that "
    "cut the steel frames for every prototype chassis.",
    "Each robot arm can lift eighty kilograms without any strain at all.",
    "The cooling loop was redesigned last spring because the first "
    "version kept overheating.",
    "Before touching anything in here, you must read the safety checklist "
    "twice.",
    "The routine performed at the expo was awesome beyond all "
    "expectations.",
    "Wait!",
    "The vents stay open at night, and that is why the air smells of "
    "ozone.",
    "That wraps up the tour for today, so goodbye and thanks for coming "
    "along.",
]

WORD_GAP_MS = 50
SENTENCE_GAP_MS = 400


def _strip(word: str) -> str:
    return word.strip(".,!?;:").lower()


def make_transcript(out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    text = " ".join(SENTENCES)
    (out_dir / "transcript.txt").write_text(text + "\n", encoding="utf-8")
    words = []
    cursor_ms = 60
    for si, sentence in enumerate(SENTENCES):
        if si:
            cursor_ms += SENTENCE_GAP_MS
        for wi, raw in enumerate(sentence.split()):
            if wi:
                cursor_ms += WORD_GAP_MS
            word = _strip(raw)
            dur_ms = min(180 + 30 * len(word), 600)
            words.append({"word": word,
                          "start_s": cursor_ms / 1000.0,
                          "end_s": (cursor_ms + dur_ms) / 1000.0})
            cursor_ms += dur_ms
    write_canonical(out_dir / "timings.json", {"words": words})
    print(f"{len(words)} timed words -> {out_dir / 'timings.json'}")


def main() -> None:
    data = ROOT / "src" / "gesturekit" / "data"
    make_dictionary(data / "minidict")
    make_transcript(data / "fixtures")


if __name__ == "__main__":
    main()
