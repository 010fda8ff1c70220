"""Cut continuous motion into gesture units at rest segments.

The detector thresholds a smoothed per-frame speed signal at a fraction of
its 95th percentile, so results are invariant to uniform position scaling.
All thresholds are exposed as parameters; the stage heuristics (argmax
stroke, half-max band, sub-threshold hold) are original to this toolkit.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dictionary import StageMap, UNLABELED, stages_to_obj
from .jsonio import canonical_dumps
from .motion import MotionClip, clip_to_obj


@dataclass(frozen=True)
class SegmentationParams:
    smoothing_window_frames: int = 5
    rest_speed_fraction: float = 0.05
    min_rest_s: float = 0.3
    min_unit_s: float = 0.8
    stroke_fraction: float = 0.5
    min_hold_s: float = 0.2

    def __post_init__(self):
        if self.smoothing_window_frames < 1 \
                or self.smoothing_window_frames % 2 == 0:
            raise ValueError("smoothing_window_frames must be a positive "
                             "odd integer")
        for name in ("rest_speed_fraction", "stroke_fraction"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must be in (0, 1), got {v}")
        for name in ("min_rest_s", "min_unit_s", "min_hold_s"):
            v = getattr(self, name)
            if v <= 0:
                raise ValueError(f"{name} must be positive, got {v}")


@dataclass(frozen=True)
class SpeedSeries:
    """Smoothed mean joint displacement per frame step; length F-1."""

    fps: float
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.float64)
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class UnitDetection:
    """One detected unit: inclusive source frame interval plus stages.

    ``stages`` uses unit-local frame indices, ready for the exported clip
    frames[start : end + 1].
    """

    start: int
    end: int
    stages: StageMap

    @property
    def frame_count(self) -> int:
        return self.end - self.start + 1


def compute_speed(clip: MotionClip,
                  smoothing_window_frames: int = 5) -> SpeedSeries:
    """Per-step mean joint speed, moving-averaged with an edge-truncated
    centered window."""
    if clip.frame_count < 2:
        raise ValueError("compute_speed needs at least 2 frames")
    steps = np.diff(clip.frames, axis=0)
    raw = np.mean(np.linalg.norm(steps, axis=2), axis=1)
    half = smoothing_window_frames // 2
    n = raw.shape[0]
    csum = np.concatenate([[0.0], np.cumsum(raw)])
    lo = np.maximum(np.arange(n) - half, 0)
    hi = np.minimum(np.arange(n) + half + 1, n)
    return SpeedSeries(clip.fps, (csum[hi] - csum[lo]) / (hi - lo))


def rest_threshold(series: SpeedSeries, params: SegmentationParams) -> float:
    """Absolute rest threshold: a fraction of the 95th speed percentile."""
    return params.rest_speed_fraction * float(
        np.percentile(series.values, 95))


def _true_runs(mask: np.ndarray) -> list[tuple[int, int]]:
    """Maximal runs of True as inclusive (start, end) index pairs."""
    runs = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, len(mask) - 1))
    return runs


def _annotate_stages(values: np.ndarray, u0: int, u1: int, tau: float,
                     params: SegmentationParams, fps: float) -> StageMap:
    seg = values[u0:u1 + 1]
    apex = u0 + int(np.argmax(seg))
    band = params.stroke_fraction * values[apex]
    s0 = apex
    while s0 > u0 and values[s0 - 1] >= band:
        s0 -= 1
    s1 = apex
    while s1 < u1 and values[s1 + 1] >= band:
        s1 += 1

    hold = None
    min_hold_frames = params.min_hold_s * fps
    for a, b in _true_runs(values[s1 + 1:u1 + 1] < tau):
        if (b - a + 1) + 1e-9 >= min_hold_frames:
            hold = (s1 + 1 + a, s1 + 1 + b)
            break

    local = lambda idx: idx - u0
    length = u1 - u0 + 1
    preparation = (0, local(s0)) if s0 > u0 else None
    stroke = (local(s0), local(s1) + 1)
    hold_local = (local(hold[0]), local(hold[1]) + 1) if hold else None
    retr_start = (hold_local[1] if hold_local else stroke[1])
    retraction = (retr_start, length) if retr_start < length else None
    return StageMap(stroke=stroke, stroke_apex=local(apex),
                    preparation=preparation, hold=hold_local,
                    retraction=retraction)


def detect_units(clip: MotionClip,
                 params: SegmentationParams | None = None
                 ) -> list[UnitDetection]:
    """Detect rest-to-rest gesture units and annotate their stages.

    Rest regions are maximal sub-threshold runs of at least min_rest_s;
    each unit spans from the last frame of one rest region to the first
    frame of the next (so both endpoints sit below the rest threshold),
    and units shorter than min_unit_s are dropped.
    """
    params = params or SegmentationParams()
    if clip.frame_count < 3:
        raise ValueError("detect_units needs at least 3 frames")
    series = compute_speed(clip, params.smoothing_window_frames)
    v = series.values
    tau = rest_threshold(series, params)
    min_rest_frames = params.min_rest_s * clip.fps
    rests = [(a, b) for a, b in _true_runs(v < tau)
             if (b - a + 1) + 1e-9 >= min_rest_frames]
    detections = []
    for (_, b1), (a2, _) in zip(rests, rests[1:]):
        u0, u1 = b1, a2
        if (u1 - u0) / clip.fps + 1e-9 < params.min_unit_s:
            continue
        stages = _annotate_stages(v, u0, u1, tau, params, clip.fps)
        detections.append(UnitDetection(u0, u1, stages))
    return detections


def export_units(clip: MotionClip, detections: list[UnitDetection],
                 out_dir) -> dict:
    """Write each detected unit as a clip file plus an UNLABELED manifest
    fragment for later labeling; ids are deterministic in the source clip.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    source_hash = hashlib.sha256(
        canonical_dumps(clip_to_obj(clip)).encode("utf-8")).hexdigest()[:8]
    entries = []
    for k, det in enumerate(detections):
        det.stages.validate(det.frame_count, unit_id=f"detection {k}")
        unit_id = f"unit_{source_hash}_{k}"
        sub = MotionClip(clip.fps, clip.joint_names,
                         clip.frames[det.start:det.end + 1])
        file_name = f"{unit_id}.json"
        (out / file_name).write_text(canonical_dumps(clip_to_obj(sub)),
                                     encoding="utf-8")
        entries.append({"id": unit_id, "file": file_name,
                        "intent": UNLABELED,
                        "source_interval": [det.start, det.end],
                        "stages": stages_to_obj(det.stages)})
    return {"version": 1, "units": entries}
