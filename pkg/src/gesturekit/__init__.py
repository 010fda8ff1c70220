"""Intent-driven co-speech gesture synthesis toolkit."""

from .dictionary import (Dictionary, GestureUnit, SelectionResult, StageMap,
                         load_dictionary, save_dictionary, select_unit,
                         serialize_manifest)
from .motion import (LossReport, MotionClip, PiecewiseWarp, Pose,
                     additive_blend, clip_from_obj, clip_to_obj, derivative,
                     l1_loss, resample, time_warp)
from .scheduling import (Schedule, ScheduleEntry, plan_warp,
                         resolve_overlaps, schedule_onset,
                         schedule_stroke_aligned, stage_aware_warp)
from .script import (GestureScript, Intent, SentenceEntry, WordTiming,
                     attach_timings, parse_script, segment_sentences,
                     serialize_script)
from .segmentation import (SegmentationParams, compute_speed, detect_units,
                           export_units)
from .synthesis import (BaseGestureSpec, SynthesisConfig, SynthesisResult,
                        make_base, synthesize, unit_to_offsets)
from .textgrid import parse_textgrid

__version__ = "0.1.0"

__all__ = [
    "Dictionary", "GestureUnit", "SelectionResult", "StageMap",
    "load_dictionary", "save_dictionary", "select_unit",
    "serialize_manifest",
    "LossReport", "MotionClip", "PiecewiseWarp", "Pose", "additive_blend",
    "clip_from_obj", "clip_to_obj", "derivative", "l1_loss", "resample",
    "time_warp",
    "Schedule", "ScheduleEntry", "plan_warp", "resolve_overlaps",
    "schedule_onset", "schedule_stroke_aligned", "stage_aware_warp",
    "GestureScript", "Intent", "SentenceEntry", "WordTiming",
    "attach_timings", "parse_script", "segment_sentences",
    "serialize_script",
    "SegmentationParams", "compute_speed", "detect_units", "export_units",
    "BaseGestureSpec", "SynthesisConfig", "SynthesisResult", "make_base",
    "synthesize", "unit_to_offsets",
    "parse_textgrid",
    "__version__",
]
