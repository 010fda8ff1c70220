"""The curated gesture library: staged units indexed by intent and duration.

Every unit starts and ends near the dictionary rest pose, carries stage
annotations over its frames, and exists in nominal 3, 6, and 9 second
variants. Duration buckets are declared in the manifest, not inferred from
clip length.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DictionaryError, NoGestureAvailable
from .jsonio import canonical_dumps, read_json
from .motion import MotionClip, Pose, clip_from_obj, clip_to_obj, \
    pose_from_obj, pose_to_obj
from .script import Intent

DURATION_VARIANTS = (3, 6, 9)
DEFAULT_EPS_REST = 0.02
UNLABELED = "UNLABELED"

FrameInterval = tuple[int, int]  # half-open [a, b) over clip frames


@dataclass(frozen=True)
class StageMap:
    """Kendon stage annotation over a unit's frames (half-open intervals)."""

    stroke: FrameInterval
    stroke_apex: int
    preparation: FrameInterval | None = None
    hold: FrameInterval | None = None
    retraction: FrameInterval | None = None

    def validate(self, frame_count: int, unit_id: str = "?") -> None:
        ordered = [("preparation", self.preparation), ("stroke", self.stroke),
                   ("hold", self.hold), ("retraction", self.retraction)]
        prev_end = 0
        prev_name = None
        for name, interval in ordered:
            if interval is None:
                continue
            a, b = interval
            if not (0 <= a < b <= frame_count):
                raise DictionaryError(
                    f"unit {unit_id}: {name} interval [{a}, {b}) out of "
                    f"range for {frame_count} frames")
            if prev_name is not None and a < prev_end:
                raise DictionaryError(
                    f"unit {unit_id}: {name} starts at {a} before "
                    f"{prev_name} ends at {prev_end}")
            prev_end, prev_name = b, name
        a, b = self.stroke
        if not (a <= self.stroke_apex < b):
            raise DictionaryError(
                f"unit {unit_id}: stroke_apex {self.stroke_apex} outside "
                f"stroke [{a}, {b})")


def stages_to_obj(stages: StageMap) -> dict:
    obj: dict = {"stroke": list(stages.stroke),
                 "stroke_apex": stages.stroke_apex}
    if stages.preparation is not None:
        obj["preparation"] = list(stages.preparation)
    if stages.hold is not None:
        obj["hold"] = list(stages.hold)
    if stages.retraction is not None:
        obj["retraction"] = list(stages.retraction)
    return obj


def stages_from_obj(obj, unit_id: str = "?") -> StageMap:
    if not isinstance(obj, dict) or "stroke" not in obj \
            or "stroke_apex" not in obj:
        raise DictionaryError(
            f"unit {unit_id}: stages must carry stroke and stroke_apex")

    def interval(key):
        if key not in obj:
            return None
        a, b = obj[key]
        return (int(a), int(b))

    return StageMap(stroke=interval("stroke"),
                    stroke_apex=int(obj["stroke_apex"]),
                    preparation=interval("preparation"),
                    hold=interval("hold"),
                    retraction=interval("retraction"))


@dataclass(frozen=True)
class GestureUnit:
    id: str
    intent: Intent
    duration_variant_s: int
    clip: MotionClip
    stages: StageMap
    semantic_tag: str | None = None
    rest_pose_ref: str = "rest.json"
    clip_file: str = ""

    @property
    def apex_offset_s(self) -> float:
        """Seconds from unit start to the stroke apex frame."""
        return self.stages.stroke_apex / self.clip.fps


def pose_distance(positions: np.ndarray, rest: Pose) -> float:
    """Mean per-joint Euclidean distance between a frame and a pose."""
    return float(np.mean(np.linalg.norm(positions - rest.positions, axis=1)))


def validate_unit(unit: GestureUnit, rest_pose: Pose,
                  eps_rest: float = DEFAULT_EPS_REST) -> list[str]:
    """Collect validation failures for one unit (empty list means valid)."""
    errors: list[str] = []
    if unit.duration_variant_s not in DURATION_VARIANTS:
        errors.append(f"unit {unit.id}: duration variant "
                      f"{unit.duration_variant_s} not in {DURATION_VARIANTS}")
    if unit.clip.joint_names != rest_pose.joint_names:
        errors.append(f"unit {unit.id}: joint names differ from rest pose")
        return errors
    try:
        unit.stages.validate(unit.clip.frame_count, unit.id)
    except DictionaryError as exc:
        errors.append(str(exc))
    for label, frame in (("first", unit.clip.frames[0]),
                         ("last", unit.clip.frames[-1])):
        d = pose_distance(frame, rest_pose)
        if d > eps_rest:
            errors.append(
                f"unit {unit.id}: {label} frame is {d:.4f} from the rest "
                f"pose (allowed {eps_rest})")
    return errors


@dataclass(frozen=True)
class Dictionary:
    rest_pose: Pose
    units: tuple[GestureUnit, ...]
    rest_pose_file: str = "rest.json"

    def __post_init__(self):
        object.__setattr__(self, "units", tuple(self.units))
        by_id = {}
        for unit in self.units:
            if unit.id in by_id:
                raise DictionaryError(f"duplicate unit id {unit.id!r}")
            by_id[unit.id] = unit
        index: dict[tuple[Intent, int], tuple[str, ...]] = {}
        for intent in Intent:
            for variant in DURATION_VARIANTS:
                index[(intent, variant)] = tuple(
                    u.id for u in self.units
                    if u.intent is intent and u.duration_variant_s == variant)
        object.__setattr__(self, "_by_id", by_id)
        object.__setattr__(self, "index", index)

    def get(self, unit_id: str) -> GestureUnit | None:
        return self._by_id.get(unit_id)

    def candidates(self, intent: Intent,
                   semantic_tag: str | None = None) -> list[GestureUnit]:
        out = [u for u in self.units if u.intent is intent]
        if intent is Intent.SEMANTIC and semantic_tag is not None:
            out = [u for u in out if u.semantic_tag == semantic_tag]
        return out


@dataclass(frozen=True)
class SelectionResult:
    unit: GestureUnit
    needs_compression: bool


def select_unit(dictionary: Dictionary, intent: Intent,
                semantic_tag: str | None, slot_duration_s: float,
                rng_seed: int) -> SelectionResult:
    """Pick the largest duration variant that fits the slot.

    No variant fits -> the smallest one, flagged for downstream
    compression. Ties inside a variant resolve by seeded uniform choice,
    so the result is a pure function of (dictionary, args, seed).
    """
    if slot_duration_s <= 0:
        raise ValueError("slot_duration_s must be positive")
    pool = dictionary.candidates(intent, semantic_tag)
    if not pool:
        tag = f" tag={semantic_tag!r}" if semantic_tag else ""
        raise NoGestureAvailable(f"no unit for intent {intent.value}{tag}")
    variants = sorted({u.duration_variant_s for u in pool})
    fitting = [v for v in variants if v <= slot_duration_s]
    if fitting:
        chosen_variant = fitting[-1]
        needs_compression = False
    else:
        chosen_variant = variants[0]
        needs_compression = True
    tied = sorted((u for u in pool
                   if u.duration_variant_s == chosen_variant),
                  key=lambda u: u.id)
    unit = random.Random(rng_seed).choice(tied)
    return SelectionResult(unit=unit, needs_compression=needs_compression)


# ---------------------------------------------------------------------------
# manifest I/O

def manifest_to_obj(dictionary: Dictionary) -> dict:
    units = []
    for u in dictionary.units:
        entry = {"id": u.id, "intent": u.intent.value,
                 "duration_variant_s": u.duration_variant_s,
                 "file": u.clip_file or f"{u.id}.json",
                 "stages": stages_to_obj(u.stages)}
        if u.semantic_tag is not None:
            entry["semantic_tag"] = u.semantic_tag
        units.append(entry)
    return {"version": 1, "rest_pose": dictionary.rest_pose_file,
            "units": units}


def serialize_manifest(dictionary: Dictionary) -> str:
    return canonical_dumps(manifest_to_obj(dictionary))


def load_dictionary(manifest_path,
                    eps_rest: float = DEFAULT_EPS_REST) -> Dictionary:
    """Load and validate a dictionary; failures are collected and reported
    together so one bad unit does not hide the rest."""
    manifest_path = Path(manifest_path)
    base = manifest_path.parent
    obj = read_json(manifest_path)
    if obj.get("version") != 1:
        raise DictionaryError(
            f"unsupported manifest version {obj.get('version')!r}")
    rest_file = obj.get("rest_pose")
    if not rest_file:
        raise DictionaryError("manifest missing rest_pose")
    try:
        rest_pose = pose_from_obj(read_json(base / rest_file))
    except (OSError, ValueError) as exc:
        raise DictionaryError(f"cannot load rest pose {rest_file}: {exc}") \
            from exc

    units: list[GestureUnit] = []
    errors: list[str] = []
    for raw in obj.get("units", []):
        unit_id = raw.get("id", "?")
        try:
            clip = clip_from_obj(read_json(base / raw["file"]))
            stages = stages_from_obj(raw.get("stages"), unit_id)
            intent_raw = raw["intent"]
            if intent_raw == UNLABELED:
                raise DictionaryError(
                    f"unit {unit_id}: intent is still {UNLABELED}; run "
                    f"dict-build with a labels file")
            unit = GestureUnit(
                id=str(unit_id), intent=Intent(intent_raw),
                duration_variant_s=int(raw["duration_variant_s"]),
                clip=clip, stages=stages,
                semantic_tag=raw.get("semantic_tag"),
                rest_pose_ref=rest_file, clip_file=raw["file"])
        except OSError as exc:
            errors.append(f"unit {unit_id}: cannot read clip: {exc}")
            continue
        except (KeyError, ValueError, DictionaryError) as exc:
            errors.append(f"unit {unit_id}: {exc}")
            continue
        errors.extend(validate_unit(unit, rest_pose, eps_rest))
        units.append(unit)
    if errors:
        raise DictionaryError(
            f"{len(errors)} validation failure(s):\n" + "\n".join(errors))
    return Dictionary(rest_pose=rest_pose, units=tuple(units),
                      rest_pose_file=rest_file)


def save_dictionary(dictionary: Dictionary, out_dir) -> Path:
    """Write rest pose, clips, and a canonical manifest into a directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / dictionary.rest_pose_file).write_text(
        canonical_dumps(pose_to_obj(dictionary.rest_pose)), encoding="utf-8")
    for unit in dictionary.units:
        path = out / (unit.clip_file or f"{unit.id}.json")
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(canonical_dumps(clip_to_obj(unit.clip)),
                        encoding="utf-8")
    manifest = out / "manifest.json"
    manifest.write_text(serialize_manifest(dictionary), encoding="utf-8")
    return manifest
