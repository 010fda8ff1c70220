"""Placement of selected gesture units on the global timeline.

Two modes: onset (each unit starts with its sentence) and stroke-aligned
(the stroke apex lands on the keyword midpoint). Retiming is stage-aware:
the stroke keeps its duration whenever the target allows, the hold absorbs
stretch or compression first, and preparation/retraction scale
proportionally after that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from .dictionary import GestureUnit, SelectionResult
from .motion import PiecewiseWarp
from .script import GestureScript, SentenceEntry

MIN_GESTURE_S = 1.5

# segment order used throughout: head (preparation side), stroke, hold, tail
Segments = tuple[float, float, float, float]


def unit_segments(unit: GestureUnit) -> Segments:
    """Split a unit's duration into head/stroke/hold/tail seconds.

    Boundaries come from the stage map; gaps between annotated stages are
    folded into the neighboring low-speed segment (pre-stroke gaps into the
    head, post-stroke gaps into the hold).
    """
    fps = unit.clip.fps
    last = unit.clip.frame_count - 1
    k1 = unit.stages.stroke[0]
    k2 = unit.stages.stroke[1] - 1
    k3 = unit.stages.hold[1] - 1 if unit.stages.hold is not None else k2
    return (k1 / fps, (k2 - k1) / fps, (k3 - k2) / fps, (last - k3) / fps)


@dataclass(frozen=True)
class WarpPlan:
    """A stage-aware retiming: output segment durations plus the warp map."""

    warp: PiecewiseWarp
    kind: str  # "stage_aware" | "uniform"
    target_duration_s: float
    segments_src: Segments
    segments_out: Segments

    @property
    def stroke_preserved(self) -> bool:
        return math.isclose(self.segments_src[1], self.segments_out[1],
                            rel_tol=1e-9, abs_tol=1e-12)


def _warp_from_segments(src: Segments, out: Segments) -> PiecewiseWarp:
    total_src = sum(src)
    total_out = sum(out)
    knots = [(0.0, 0.0)]
    acc_u = acc_s = 0.0
    for ds, do in zip(src, out):
        acc_s += ds
        acc_u += do
        knots.append((acc_u / total_out, acc_s / total_src))
    knots[-1] = (1.0, 1.0)
    return PiecewiseWarp(knots)


def plan_uniform(unit: GestureUnit, target_duration_s: float) -> WarpPlan:
    """Uniform time scaling: the identity map sampled over a new duration."""
    src = unit_segments(unit)
    scale = target_duration_s / sum(src)
    return WarpPlan(PiecewiseWarp.identity(), "uniform", target_duration_s,
                    src, tuple(s * scale for s in src))


def plan_warp(unit: GestureUnit, target_duration_s: float) -> WarpPlan:
    """Build the stage-aware warp taking a unit to a new duration.

    Falls back to a uniform warp when the unit is all stroke or the target
    is shorter than the stroke itself.
    """
    if target_duration_s <= 0:
        raise ValueError("target_duration_s must be positive")
    src = unit_segments(unit)
    head, stroke, hold, tail = src
    duration = sum(src)
    delta = target_duration_s - duration

    uniform = plan_uniform(unit, target_duration_s)
    if head + hold + tail <= 1e-12:
        return uniform
    if abs(delta) <= 1e-12:
        out = src
    elif delta > 0:
        out = (head, stroke, hold + delta, tail)
    else:
        need = -delta
        absorbed = min(hold, need)
        new_hold = hold - absorbed
        need -= absorbed
        flanks = head + tail
        if need > 0 and flanks <= need + 1e-12:
            return uniform  # target shorter than the stroke
        scale = (flanks - need) / flanks if need > 0 else 1.0
        out = (head * scale, stroke, new_hold, tail * scale)
    return WarpPlan(_warp_from_segments(src, out), "stage_aware",
                    target_duration_s, src, out)


def stage_aware_warp(unit: GestureUnit,
                     target_duration_s: float) -> PiecewiseWarp:
    return plan_warp(unit, target_duration_s).warp


def warped_apex_offset_s(unit: GestureUnit, plan: WarpPlan) -> float:
    """Seconds from retimed unit start to the stroke apex."""
    duration = unit.clip.duration_s
    u_src = unit.apex_offset_s / duration if duration > 0 else 0.0
    return plan.warp.invert(u_src) * plan.target_duration_s


@dataclass(frozen=True)
class ScheduleEntry:
    sentence_index: int
    unit_id: str
    onset_s: float
    kind: str  # "identity" | "uniform" | "stage_aware"
    target_duration_s: float
    warp: PiecewiseWarp = field(repr=False)
    segments_src: Segments = field(repr=False, default=(0, 0, 0, 0))
    segments_out: Segments = field(repr=False, default=(0, 0, 0, 0))
    apex_offset_s: float = 0.0
    apex_target_s: float | None = None
    apex_error_s: float | None = None
    clamped: bool = False
    sentence_end_s: float = 0.0

    @property
    def end_s(self) -> float:
        return self.onset_s + self.target_duration_s

    @property
    def apex_time_s(self) -> float:
        return self.onset_s + self.apex_offset_s

    def to_obj(self) -> dict:
        obj = {"sentence_index": self.sentence_index,
               "unit_id": self.unit_id,
               "onset_s": self.onset_s,
               "end_s": self.end_s,
               "kind": self.kind,
               "target_duration_s": self.target_duration_s,
               "apex_time_s": self.apex_time_s,
               "clamped": self.clamped,
               "warp": self.warp.to_obj()}
        if self.apex_target_s is not None:
            obj["apex_target_s"] = self.apex_target_s
            obj["apex_error_s"] = self.apex_error_s
        return obj


@dataclass(frozen=True)
class Schedule:
    fps: float
    total_duration_s: float
    entries: tuple[ScheduleEntry, ...]
    events: tuple[str, ...] = ()

    def to_obj(self) -> dict:
        return {"fps": self.fps,
                "total_duration_s": self.total_duration_s,
                "entries": [e.to_obj() for e in self.entries],
                "events": list(self.events)}


Selections = dict[int, SelectionResult]


def _fit_target(sentence: SentenceEntry, unit: GestureUnit,
                min_gesture_s: float) -> tuple[str, float] | None:
    """Decide the retime target for a sentence slot, or None to skip."""
    span = sentence.end_s - sentence.start_s
    duration = unit.clip.duration_s
    if duration <= span + 1e-9:
        return "identity", duration
    if span + 1e-9 >= min_gesture_s:
        return "uniform", span
    return None


def schedule_onset(script: GestureScript, selections: Selections, fps: float,
                   min_gesture_s: float = MIN_GESTURE_S) -> Schedule:
    """Experiment-1 placement: every unit starts at its sentence onset."""
    entries = []
    events = []
    for sentence in script.sentences:
        sel = selections.get(sentence.index)
        if sel is None:
            continue
        fit = _fit_target(sentence, sel.unit, min_gesture_s)
        if fit is None:
            events.append(
                f"sentence {sentence.index}: span "
                f"{sentence.end_s - sentence.start_s:.3f}s below "
                f"{min_gesture_s}s floor, gesture skipped")
            continue
        kind, target = fit
        plan = plan_uniform(sel.unit, target)  # identity when target == D
        entries.append(ScheduleEntry(
            sentence_index=sentence.index, unit_id=sel.unit.id,
            onset_s=sentence.start_s, kind=kind,
            target_duration_s=target, warp=plan.warp,
            segments_src=plan.segments_src, segments_out=plan.segments_out,
            apex_offset_s=warped_apex_offset_s(sel.unit, plan),
            sentence_end_s=sentence.end_s))
    total = max([script.duration_s] + [e.end_s for e in entries])
    return Schedule(fps, total, tuple(entries), tuple(events))


def schedule_stroke_aligned(script: GestureScript, selections: Selections,
                            fps: float,
                            min_gesture_s: float = MIN_GESTURE_S) -> Schedule:
    """Experiment-2 placement: stroke apex on the keyword midpoint.

    Onsets snap to the frame grid so the realized apex stays within half a
    frame of the keyword midpoint unless clamping binds.
    """
    entries = []
    events = []
    prev_end = 0.0
    for sentence in script.sentences:
        sel = selections.get(sentence.index)
        if sel is None:
            continue
        fit = _fit_target(sentence, sel.unit, min_gesture_s)
        if fit is None:
            events.append(
                f"sentence {sentence.index}: span "
                f"{sentence.end_s - sentence.start_s:.3f}s below "
                f"{min_gesture_s}s floor, gesture skipped")
            continue
        _, target = fit
        plan = plan_warp(sel.unit, target)
        apex_offset = warped_apex_offset_s(sel.unit, plan)
        if sentence.keyword:
            apex_target = (sentence.keyword_start_s
                           + sentence.keyword_end_s) / 2.0
        else:
            apex_target = sentence.start_s + apex_offset
            events.append(f"sentence {sentence.index}: no keyword, "
                          f"fell back to onset placement")
        raw_onset = apex_target - apex_offset
        onset = round(raw_onset * fps) / fps
        lower = max(0.0, prev_end)
        clamped = onset < lower - 1e-9
        if clamped:
            onset = lower
            events.append(
                f"sentence {sentence.index}: onset clamped to {lower:.3f}s, "
                f"apex misses keyword by "
                f"{abs(onset + apex_offset - apex_target):.3f}s")
        entries.append(ScheduleEntry(
            sentence_index=sentence.index, unit_id=sel.unit.id,
            onset_s=onset, kind="stage_aware", target_duration_s=target,
            warp=plan.warp,
            segments_src=plan.segments_src, segments_out=plan.segments_out,
            apex_offset_s=apex_offset, apex_target_s=apex_target,
            apex_error_s=abs(onset + apex_offset - apex_target),
            clamped=clamped, sentence_end_s=sentence.end_s))
        prev_end = entries[-1].end_s
    total = max([script.duration_s] + [e.end_s for e in entries])
    return Schedule(fps, total, tuple(entries), tuple(events))


def _compress_tail(entry: ScheduleEntry, reduce_by: float) -> ScheduleEntry:
    """Shrink an entry's hold then tail by reduce_by seconds; the head and
    stroke (and therefore the apex time) stay untouched."""
    head, stroke, hold, tail = entry.segments_out
    absorbed = min(hold, reduce_by)
    hold -= absorbed
    tail = max(0.0, tail - (reduce_by - absorbed))
    out = (head, stroke, hold, tail)
    warp = _warp_from_segments(entry.segments_src, out)
    return replace(entry, segments_out=out, target_duration_s=sum(out),
                   warp=warp, kind="stage_aware")


def resolve_overlaps(schedule: Schedule) -> Schedule:
    """Left-to-right sweep making entries non-overlapping.

    For each collision: shrink the earlier entry's hold/retraction (stroke
    is sacrosanct), then push the later entry up to its sentence end, else
    drop it.
    """
    entries = sorted(schedule.entries, key=lambda e: e.onset_s)
    events = list(schedule.events)
    resolved: list[ScheduleEntry] = []
    for entry in entries:
        if not resolved:
            resolved.append(entry)
            continue
        prev = resolved[-1]
        overlap = prev.end_s - entry.onset_s
        if overlap <= 1e-9:
            resolved.append(entry)
            continue
        tail_budget = prev.segments_out[2] + prev.segments_out[3]
        shrink = min(overlap, tail_budget)
        if shrink > 1e-9:
            resolved[-1] = prev = _compress_tail(prev, shrink)
            events.append(
                f"entry for sentence {prev.sentence_index}: hold/retraction "
                f"compressed by {shrink:.3f}s to clear an overlap")
            overlap = prev.end_s - entry.onset_s
        if overlap <= 1e-9:
            resolved.append(entry)
            continue
        latest_onset = entry.sentence_end_s - entry.target_duration_s
        if prev.end_s <= latest_onset + 1e-9:
            shifted = replace(
                entry, onset_s=prev.end_s, clamped=True,
                apex_error_s=(abs(prev.end_s + entry.apex_offset_s
                                  - entry.apex_target_s)
                              if entry.apex_target_s is not None else None))
            events.append(
                f"entry for sentence {entry.sentence_index}: shifted to "
                f"{prev.end_s:.3f}s to clear an overlap")
            resolved.append(shifted)
        else:
            events.append(
                f"entry for sentence {entry.sentence_index}: dropped, no "
                f"room after overlap resolution")
    total = max([schedule.total_duration_s] + [e.end_s for e in resolved])
    return Schedule(schedule.fps, total, tuple(resolved), tuple(events))
