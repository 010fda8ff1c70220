from pathlib import Path

import numpy as np
import pytest

import gesturekit
from gesturekit.dictionary import load_dictionary
from gesturekit.jsonio import read_json
from gesturekit.motion import MotionClip
from gesturekit.nlu import assemble_script, classify, load_lexicon
from gesturekit.script import attach_timings, segment_sentences, \
    timings_from_obj

DATA_DIR = Path(gesturekit.__file__).parent / "data"
GOLDEN_DIR = Path(__file__).parent / "goldens"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture(scope="session")
def minidict():
    return load_dictionary(DATA_DIR / "minidict" / "manifest.json")


@pytest.fixture(scope="session")
def lexicon():
    return load_lexicon()


@pytest.fixture(scope="session")
def fixture_transcript() -> str:
    return (DATA_DIR / "fixtures" / "transcript.txt").read_text(
        encoding="utf-8")


@pytest.fixture(scope="session")
def fixture_timings():
    return timings_from_obj(read_json(DATA_DIR / "fixtures" /
                                      "timings.json"))


@pytest.fixture(scope="session")
def fixture_script(fixture_transcript, fixture_timings, lexicon):
    timed = attach_timings(segment_sentences(fixture_transcript),
                           fixture_timings)
    results = classify([t.text for t in timed], lexicon,
                       tokens=[t.tokens for t in timed], mode="offline")
    script, notes = assemble_script(timed, results)
    assert not notes
    return script


def make_clip(values, fps=10.0, joints=1):
    """1-D ramp helper: values become the x coordinate of every joint."""
    arr = np.zeros((len(values), joints, 3))
    arr[:, :, 0] = np.asarray(values, dtype=float)[:, None]
    names = tuple(f"j{i}" for i in range(joints))
    return MotionClip(fps, names, arr)


def random_clip(rng, frames=10, joints=4, fps=25.0):
    arr = rng.standard_normal((frames, joints, 3))
    names = tuple(f"j{i}" for i in range(joints))
    return MotionClip(fps, names, arr)
