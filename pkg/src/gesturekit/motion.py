"""Fixed-rate skeletal motion values and the numeric operations on them.

A clip is an (F, J, 3) array of joint positions at a constant frame rate.
All types are immutable after construction and every operation is a pure
function, so clips can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IncompatibleClips
from .jsonio import canonical_dumps


def _as_positions(values, joints: int | None = None) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3 or arr.shape[0] < 1:
        raise ValueError(f"positions must be (J, 3), got {arr.shape}")
    if joints is not None and arr.shape[0] != joints:
        raise ValueError(f"expected {joints} joints, got {arr.shape[0]}")
    if not np.isfinite(arr).all():
        raise ValueError("positions contain non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Pose:
    """A single skeleton posture: one (J, 3) position per named joint."""

    joint_names: tuple[str, ...]
    positions: np.ndarray

    def __post_init__(self):
        names = tuple(self.joint_names)
        object.__setattr__(self, "joint_names", names)
        arr = _as_positions(self.positions, joints=len(names))
        object.__setattr__(self, "positions", arr)

    def __eq__(self, other):
        if not isinstance(other, Pose):
            return NotImplemented
        return (self.joint_names == other.joint_names
                and np.array_equal(self.positions, other.positions))


@dataclass(frozen=True)
class MotionClip:
    """Fixed-rate sequence of poses: frames is (F, J, 3), all finite."""

    fps: float
    joint_names: tuple[str, ...]
    frames: np.ndarray

    def __post_init__(self):
        fps = float(self.fps)
        if not math.isfinite(fps) or fps <= 0:
            raise ValueError(f"fps must be positive and finite, got {self.fps}")
        object.__setattr__(self, "fps", fps)
        names = tuple(self.joint_names)
        if not names:
            raise ValueError("joint_names must be non-empty")
        object.__setattr__(self, "joint_names", names)
        arr = np.asarray(self.frames, dtype=np.float64)
        if arr.ndim != 3 or arr.shape[0] < 1 or arr.shape[2] != 3:
            raise ValueError(f"frames must be (F, J, 3), got {arr.shape}")
        if arr.shape[1] != len(names):
            raise ValueError(
                f"frames carry {arr.shape[1]} joints but {len(names)} names given")
        if not np.isfinite(arr).all():
            raise ValueError("frames contain non-finite values")
        arr.setflags(write=False)
        object.__setattr__(self, "frames", arr)

    @property
    def frame_count(self) -> int:
        return self.frames.shape[0]

    @property
    def joint_count(self) -> int:
        return self.frames.shape[1]

    @property
    def duration_s(self) -> float:
        return (self.frame_count - 1) / self.fps

    def pose(self, frame: int) -> Pose:
        return Pose(self.joint_names, self.frames[frame])

    def __eq__(self, other):
        if not isinstance(other, MotionClip):
            return NotImplemented
        return (self.fps == other.fps
                and self.joint_names == other.joint_names
                and np.array_equal(self.frames, other.frames))


@dataclass(frozen=True)
class LossReport:
    """L1 reconstruction error split by derivative order.

    Velocity and acceleration terms are computed on raw frame differences
    (not divided by the frame period), which keeps the metric identical for
    the same clip stored at any fps.
    """

    position_l1: float
    velocity_l1: float
    acceleration_l1: float
    total: float = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        for name in ("position_l1", "velocity_l1", "acceleration_l1"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {v}")
            object.__setattr__(self, name, v)
        total = self.position_l1 + self.velocity_l1 + self.acceleration_l1
        if self.total is not None and not math.isclose(
                float(self.total), total, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError("total must equal the sum of the three terms")
        object.__setattr__(self, "total", total)

    def to_obj(self) -> dict:
        return {"position_l1": self.position_l1,
                "velocity_l1": self.velocity_l1,
                "acceleration_l1": self.acceleration_l1,
                "total": self.total}


# ---------------------------------------------------------------------------
# sampling helpers

def _frame_count_for(duration_s: float, fps: float) -> int:
    # round-half-up keeps the count deterministic across platforms
    return int(math.floor(duration_s * fps + 0.5)) + 1

def _sample_linear(frames: np.ndarray, positions: np.ndarray) -> np.ndarray:
    """Linearly interpolate frames at fractional frame positions (clamped)."""
    last = frames.shape[0] - 1
    x = np.clip(positions, 0.0, float(last))
    i0 = np.floor(x).astype(int)
    i1 = np.minimum(i0 + 1, last)
    w = (x - i0)[:, None, None]
    return (1.0 - w) * frames[i0] + w * frames[i1]


def require_compatible(a: MotionClip, b: MotionClip, frames: bool = False) -> None:
    if a.fps != b.fps:
        raise IncompatibleClips(f"fps mismatch: {a.fps} vs {b.fps}")
    if a.joint_names != b.joint_names:
        raise IncompatibleClips("joint names differ")
    if frames and a.frame_count != b.frame_count:
        raise IncompatibleClips(
            f"frame count mismatch: {a.frame_count} vs {b.frame_count}")


# ---------------------------------------------------------------------------
# operations

def resample(clip: MotionClip, target_fps: float) -> MotionClip:
    """Resample a clip to a new frame rate by linear interpolation.

    Output has round(duration * target_fps) + 1 frames; the first and last
    frames reproduce the input endpoints exactly.
    """
    target_fps = float(target_fps)
    if not math.isfinite(target_fps) or target_fps <= 0:
        raise ValueError(f"target_fps must be positive, got {target_fps}")
    if target_fps == clip.fps:
        return clip
    n_out = _frame_count_for(clip.duration_s, target_fps)
    times = np.arange(n_out) / target_fps
    return MotionClip(target_fps, clip.joint_names,
                      _sample_linear(clip.frames, times * clip.fps))


def derivative(clip: MotionClip) -> MotionClip:
    """Forward frame difference: out[t] = in[t+1] - in[t], F-1 frames."""
    if clip.frame_count < 2:
        raise ValueError("derivative needs at least 2 frames")
    return MotionClip(clip.fps, clip.joint_names, np.diff(clip.frames, axis=0))


def l1_loss(reference: MotionClip, predicted: MotionClip) -> LossReport:
    """Mean absolute error on positions plus first and second differences.

    Each term is the mean of |reference - predicted| over every frame,
    joint, and component at that derivative order; total is their sum.
    Symmetric in its arguments.
    """
    require_compatible(reference, predicted, frames=True)
    if reference.frame_count < 3:
        raise ValueError("l1_loss needs at least 3 frames")
    a, b = reference.frames, predicted.frames
    pos = float(np.mean(np.abs(a - b)))
    da, db = np.diff(a, axis=0), np.diff(b, axis=0)
    vel = float(np.mean(np.abs(da - db)))
    acc = float(np.mean(np.abs(np.diff(da, axis=0) - np.diff(db, axis=0))))
    return LossReport(pos, vel, acc)


class PiecewiseWarp:
    """Monotone piecewise-linear map of normalized time [0,1] -> [0,1].

    Knots are (u, s) pairs: u in output-normalized time, s in
    source-normalized time. Duplicate u knots express an instantaneous
    skip of source material; the later s wins at the shared u.
    """

    def __init__(self, knots):
        pts = [(float(u), float(s)) for u, s in knots]
        if len(pts) < 2:
            raise ValueError("warp needs at least 2 knots")
        if abs(pts[0][0]) > 1e-12 or abs(pts[0][1]) > 1e-12:
            raise ValueError("warp must start at (0, 0)")
        if abs(pts[-1][0] - 1) > 1e-12 or abs(pts[-1][1] - 1) > 1e-12:
            raise ValueError("warp must end at (1, 1)")
        for (u0, s0), (u1, s1) in zip(pts, pts[1:]):
            if u1 < u0 - 1e-12 or s1 < s0 - 1e-12:
                raise ValueError("warp knots must be nondecreasing")
        dedup: list[tuple[float, float]] = []
        for u, s in pts:
            if dedup and abs(dedup[-1][0] - u) <= 1e-15:
                dedup[-1] = (u, max(dedup[-1][1], s))
            else:
                dedup.append((u, s))
        self.knots = tuple(dedup)
        self._u = np.array([u for u, _ in self.knots])
        self._s = np.array([s for _, s in self.knots])

    @classmethod
    def identity(cls) -> "PiecewiseWarp":
        return cls([(0.0, 0.0), (1.0, 1.0)])

    def __call__(self, u):
        return np.interp(u, self._u, self._s)

    def invert(self, s: float) -> float:
        """Leftmost u with warp(u) = s (warp is nondecreasing)."""
        return float(np.interp(s, self._s, self._u))

    def to_obj(self) -> list[list[float]]:
        return [[u, s] for u, s in self.knots]

    @classmethod
    def from_obj(cls, obj) -> "PiecewiseWarp":
        return cls([(u, s) for u, s in obj])


def time_warp(clip: MotionClip, warp, target_duration_s: float) -> MotionClip:
    """Retimed copy of a clip sampled at its own fps over a new duration.

    ``warp`` maps output-normalized time u to source-normalized time and
    must satisfy warp(0)=0, warp(1)=1, nondecreasing; it is checked at the
    output sample points. Endpoint poses are preserved exactly and samples
    never extrapolate outside the source time range.
    """
    target_duration_s = float(target_duration_s)
    if not math.isfinite(target_duration_s) or target_duration_s <= 0:
        raise ValueError("target_duration_s must be positive")
    n_out = max(_frame_count_for(target_duration_s, clip.fps), 1)
    if n_out == 1:
        u = np.array([0.0])
    else:
        u = np.arange(n_out) / (n_out - 1)
    s = np.asarray([float(warp(float(ui))) for ui in u], dtype=np.float64)
    if abs(s[0]) > 1e-9 or abs(s[-1] - 1.0) > 1e-9:
        raise ValueError("warp must map 0 -> 0 and 1 -> 1")
    if np.any(np.diff(s) < -1e-12):
        raise ValueError("warp is not monotone")
    s = np.clip(s, 0.0, 1.0)
    s[0], s[-1] = 0.0, 1.0
    frames = _sample_linear(clip.frames, s * (clip.frame_count - 1))
    return MotionClip(clip.fps, clip.joint_names, frames)


def smoothstep(u):
    u = np.clip(u, 0.0, 1.0)
    return u * u * (3.0 - 2.0 * u)


def additive_blend(base: MotionClip,
                   offset_layers: list[tuple[int, MotionClip]],
                   ramp_s: float = 0.2) -> MotionClip:
    """Add offset layers onto a base clip with smoothstep edge ramps.

    Each layer is (start_frame, clip-of-offsets) sharing the base fps and
    joints. Layer weights rise 0 -> 1 over ramp_s at the layer head and fall
    back over ramp_s at its tail; frames outside the base range are clamped
    away.
    """
    if ramp_s < 0:
        raise ValueError("ramp_s must be >= 0")
    out = np.array(base.frames)
    ramp_frames = ramp_s * base.fps
    for start, layer in offset_layers:
        require_compatible(base, layer)
        n = layer.frame_count
        if ramp_frames > 0:
            k = np.arange(n)
            head = smoothstep(k / ramp_frames)
            tail = smoothstep((n - 1 - k) / ramp_frames)
            w = np.minimum(head, tail)
        else:
            w = np.ones(n)
        t0 = max(0, start)
        t1 = min(base.frame_count, start + n)
        if t0 >= t1:
            continue
        weighted = w[:, None, None] * layer.frames
        out[t0:t1] += weighted[t0 - start:t1 - start]
    return MotionClip(base.fps, base.joint_names, out)


# ---------------------------------------------------------------------------
# file formats

def clip_to_obj(clip: MotionClip) -> dict:
    return {"version": 1, "fps": clip.fps,
            "joints": list(clip.joint_names),
            "frames": clip.frames.tolist()}


def clip_from_obj(obj) -> MotionClip:
    if not isinstance(obj, dict):
        raise ValueError("motion file must be a JSON object")
    if obj.get("version") != 1:
        raise ValueError(f"unsupported motion file version {obj.get('version')!r}")
    for key in ("fps", "joints", "frames"):
        if key not in obj:
            raise ValueError(f"motion file missing {key!r}")
    return MotionClip(obj["fps"], tuple(obj["joints"]), obj["frames"])


def clip_dumps(clip: MotionClip) -> str:
    return canonical_dumps(clip_to_obj(clip))


def pose_to_obj(pose: Pose) -> dict:
    return {"version": 1, "joints": list(pose.joint_names),
            "positions": pose.positions.tolist()}


def pose_from_obj(obj) -> Pose:
    if not isinstance(obj, dict) or obj.get("version") != 1:
        raise ValueError("pose file must be a JSON object with version 1")
    return Pose(tuple(obj["joints"]), obj["positions"])
