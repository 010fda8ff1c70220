"""End-to-end assembly: base track, offset layers, additive integration.

The semantic layer is encoded as deviation from the dictionary rest pose,
so adding it onto a moving base is well-posed; over a rest-pose base the
sum reduces to literal unit playback.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .dictionary import Dictionary, GestureUnit, SelectionResult, select_unit
from .errors import CoverageError, IncompatibleClips, NoGestureAvailable
from .jsonio import read_json
from .motion import MotionClip, Pose, additive_blend, clip_from_obj, \
    resample, time_warp
from .scheduling import MIN_GESTURE_S, Schedule, resolve_overlaps, \
    schedule_onset, schedule_stroke_aligned
from .script import GestureScript

import numpy as np


@dataclass(frozen=True)
class BaseGestureSpec:
    kind: str = "rest_pose"  # rest_pose | procedural_sway | file
    sway_amplitude: float = 0.01
    sway_frequency_hz: float = 0.15
    sway_axis: int = 0
    path: str | None = None
    strict: bool = False

    def __post_init__(self):
        if self.kind not in ("rest_pose", "procedural_sway", "file"):
            raise ValueError(f"unknown base kind {self.kind!r}")
        if self.kind == "file" and not self.path:
            raise ValueError("file base needs a path")


@dataclass(frozen=True)
class SynthesisConfig:
    fps: float = 25.0
    ramp_s: float = 0.2
    mode: str = "onset"  # onset | stroke
    seed: int = 0
    min_gesture_s: float = MIN_GESTURE_S

    def __post_init__(self):
        if self.fps <= 0:
            raise ValueError("fps must be positive")
        if self.ramp_s < 0:
            raise ValueError("ramp_s must be >= 0")
        if self.mode not in ("onset", "stroke"):
            raise ValueError(f"unknown mode {self.mode!r}")


def parse_base_spec(text: str, strict: bool = False) -> BaseGestureSpec:
    """Parse the CLI/service base selector: rest | sway | file:PATH."""
    if text == "rest":
        return BaseGestureSpec(kind="rest_pose")
    if text == "sway":
        return BaseGestureSpec(kind="procedural_sway")
    if text.startswith("file:"):
        return BaseGestureSpec(kind="file", path=text[len("file:"):],
                               strict=strict)
    raise ValueError(f"unknown base {text!r} (expected rest, sway, or "
                     f"file:PATH)")


def _frame_count(duration_s: float, fps: float) -> int:
    return int(math.floor(duration_s * fps + 0.5)) + 1


def make_base(spec: BaseGestureSpec, duration_s: float, fps: float,
              rest_pose: Pose) -> MotionClip:
    """Build the base track: held rest pose, procedural sway, or a file."""
    if duration_s <= 0:
        raise ValueError("duration_s must be positive")
    n = _frame_count(duration_s, fps)
    if spec.kind == "rest_pose":
        frames = np.tile(rest_pose.positions, (n, 1, 1))
        return MotionClip(fps, rest_pose.joint_names, frames)
    if spec.kind == "procedural_sway":
        t = np.arange(n) / fps
        sway = spec.sway_amplitude * np.sin(
            2.0 * np.pi * spec.sway_frequency_hz * t)
        frames = np.tile(rest_pose.positions, (n, 1, 1))
        frames[:, :, spec.sway_axis] += sway[:, None]
        return MotionClip(fps, rest_pose.joint_names, frames)
    clip = clip_from_obj(read_json(spec.path))
    if clip.fps != fps:
        clip = resample(clip, fps)
    if clip.frame_count < n:
        if spec.strict:
            raise CoverageError(
                f"base file {spec.path} covers {clip.duration_s:.3f}s of a "
                f"{duration_s:.3f}s timeline")
        pad = np.tile(clip.frames[-1], (n - clip.frame_count, 1, 1))
        return MotionClip(fps, clip.joint_names,
                          np.concatenate([clip.frames, pad]))
    return MotionClip(fps, clip.joint_names, clip.frames[:n])


def unit_to_offsets(unit: GestureUnit, warp, fps: float, rest_pose: Pose,
                    target_duration_s: float) -> MotionClip:
    """Retimed unit as offsets from the rest pose at the pipeline fps."""
    if unit.clip.joint_names != rest_pose.joint_names:
        raise IncompatibleClips(
            f"unit {unit.id} joints differ from the rest pose")
    clip = unit.clip
    if clip.fps != fps:
        clip = resample(clip, fps)
    warped = time_warp(clip, warp, target_duration_s)
    return MotionClip(fps, warped.joint_names,
                      warped.frames - rest_pose.positions[None])


@dataclass(frozen=True)
class SynthesisReport:
    mode: str
    seed: int
    fps: float
    ramp_s: float
    sentence_count: int
    selections: tuple[tuple[int, str, int, bool], ...]
    skips: tuple[tuple[int, str], ...]
    events: tuple[str, ...]
    apex_errors: tuple[tuple[int, float, bool], ...]  # idx, error, clamped

    @property
    def apex_error_max_s(self) -> float | None:
        unclamped = [e for _, e, clamped in self.apex_errors if not clamped]
        return max(unclamped) if unclamped else None

    def to_obj(self) -> dict:
        return {
            "mode": self.mode, "seed": self.seed, "fps": self.fps,
            "ramp_s": self.ramp_s,
            "sentence_count": self.sentence_count,
            "selections": [
                {"sentence_index": i, "unit_id": u, "variant_s": v,
                 "needs_compression": c}
                for i, u, v, c in self.selections],
            "skips": [{"sentence_index": i, "reason": r}
                      for i, r in self.skips],
            "events": list(self.events),
            "apex_errors": [
                {"sentence_index": i, "error_s": e, "clamped": c}
                for i, e, c in self.apex_errors],
            "apex_error_max_s": self.apex_error_max_s,
        }

    def to_text(self) -> str:
        lines = [
            "synthesis report",
            f"mode: {self.mode}  seed: {self.seed}  fps: {self.fps:g}  "
            f"ramp_s: {self.ramp_s:g}",
            f"sentences: {self.sentence_count}  scheduled: "
            f"{self.sentence_count - len(self.skips)}  skipped: "
            f"{len(self.skips)}",
        ]
        if self.selections:
            lines.append("selections:")
            for idx, unit_id, variant, compressed in self.selections:
                extra = "  (needs compression)" if compressed else ""
                lines.append(f"  {idx}: {unit_id}  variant {variant}s{extra}")
        if self.skips:
            lines.append("skips:")
            for idx, reason in self.skips:
                lines.append(f"  {idx}: {reason}")
        if self.events:
            lines.append("events:")
            for event in self.events:
                lines.append(f"  {event}")
        if self.mode == "stroke" and self.apex_errors:
            worst = self.apex_error_max_s
            worst_text = f"{worst:.6f}" if worst is not None else "n/a"
            lines.append(f"apex error (unclamped max): {worst_text}s")
            for idx, err, clamped in self.apex_errors:
                mark = "  [clamped]" if clamped else ""
                lines.append(f"  {idx}: {err:.6f}s{mark}")
        return "\n".join(lines)


@dataclass(frozen=True)
class SynthesisResult:
    motion: MotionClip
    schedule: Schedule
    report: SynthesisReport


def synthesize(script: GestureScript, dictionary: Dictionary,
               base_spec: BaseGestureSpec,
               config: SynthesisConfig) -> SynthesisResult:
    """Select, schedule, and blend gestures into the final motion.

    Fully deterministic for a fixed (script, dictionary, base, config):
    per-sentence selection seeds derive from config.seed in sentence order.
    """
    script.validate()
    master = random.Random(config.seed)
    selections: dict[int, SelectionResult] = {}
    skips: list[tuple[int, str]] = []
    selection_rows = []
    for sentence in script.sentences:
        seed_i = master.randrange(2 ** 31)
        slot = sentence.end_s - sentence.start_s
        try:
            sel = select_unit(dictionary, sentence.intent,
                              sentence.semantic_tag, slot, seed_i)
        except NoGestureAvailable as exc:
            skips.append((sentence.index, str(exc)))
            continue
        selections[sentence.index] = sel
        selection_rows.append((sentence.index, sel.unit.id,
                               sel.unit.duration_variant_s,
                               sel.needs_compression))

    if config.mode == "onset":
        schedule = schedule_onset(script, selections, config.fps,
                                  config.min_gesture_s)
    else:
        schedule = schedule_stroke_aligned(script, selections, config.fps,
                                           config.min_gesture_s)
    schedule = resolve_overlaps(schedule)

    scheduled = {e.sentence_index for e in schedule.entries}
    for sentence in script.sentences:
        if sentence.index in selections and sentence.index not in scheduled:
            skips.append((sentence.index, "scheduling dropped the gesture"))

    timeline_s = schedule.total_duration_s
    if timeline_s <= 0:
        if base_spec.kind == "file":
            timeline_s = clip_from_obj(read_json(base_spec.path)).duration_s
        if timeline_s <= 0:
            timeline_s = 1.0
    base = make_base(base_spec, timeline_s, config.fps, dictionary.rest_pose)

    layers = []
    for entry in schedule.entries:
        unit = dictionary.get(entry.unit_id)
        offsets = unit_to_offsets(unit, entry.warp, config.fps,
                                  dictionary.rest_pose,
                                  entry.target_duration_s)
        start_frame = int(math.floor(entry.onset_s * config.fps + 0.5))
        layers.append((start_frame, offsets))
    motion = additive_blend(base, layers, config.ramp_s)

    report = SynthesisReport(
        mode=config.mode, seed=config.seed, fps=config.fps,
        ramp_s=config.ramp_s, sentence_count=len(script.sentences),
        selections=tuple(selection_rows), skips=tuple(sorted(skips)),
        events=schedule.events,
        apex_errors=tuple((e.sentence_index, e.apex_error_s, e.clamped)
                          for e in schedule.entries
                          if e.apex_error_s is not None))
    return SynthesisResult(motion=motion, schedule=schedule, report=report)
