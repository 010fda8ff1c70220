import math

import numpy as np
import pytest

from gesturekit.errors import IncompatibleClips
from gesturekit.motion import MotionClip, PiecewiseWarp, Pose, \
    additive_blend, clip_dumps, clip_from_obj, clip_to_obj, derivative, \
    l1_loss, resample, smoothstep, time_warp

from conftest import make_clip, random_clip


def brute_force_l1(a: MotionClip, b: MotionClip):
    """Independent oracle: plain triple loops, no shared code path."""
    def mean_abs(x, y):
        total = 0.0
        count = 0
        for f in range(len(x)):
            for j in range(len(x[f])):
                for c in range(3):
                    total += abs(x[f][j][c] - y[f][j][c])
                    count += 1
        return total / count

    def diff(x):
        return [[[x[f + 1][j][c] - x[f][j][c] for c in range(3)]
                 for j in range(len(x[f]))] for f in range(len(x) - 1)]

    xa = a.frames.tolist()
    xb = b.frames.tolist()
    pos = mean_abs(xa, xb)
    da, db = diff(xa), diff(xb)
    vel = mean_abs(da, db)
    acc = mean_abs(diff(da), diff(db))
    return pos, vel, acc


class TestMotionClip:
    def test_validates_shape(self):
        with pytest.raises(ValueError):
            MotionClip(10.0, ("a",), np.zeros((2, 2, 3)))

    def test_rejects_nonfinite(self):
        frames = np.zeros((2, 1, 3))
        frames[1, 0, 0] = np.nan
        with pytest.raises(ValueError):
            MotionClip(10.0, ("a",), frames)

    def test_rejects_bad_fps(self):
        for fps in (0, -1, float("inf")):
            with pytest.raises(ValueError):
                MotionClip(fps, ("a",), np.zeros((1, 1, 3)))

    def test_duration(self):
        assert make_clip([0, 1, 2, 3], fps=10).duration_s == pytest.approx(
            0.3)

    def test_frames_immutable(self):
        clip = make_clip([0, 1])
        with pytest.raises(ValueError):
            clip.frames[0, 0, 0] = 5.0

    def test_json_round_trip(self):
        clip = make_clip([0.0, 0.25, 1.0], fps=12.5, joints=2)
        text = clip_dumps(clip)
        again = clip_from_obj(__import__("json").loads(text))
        assert again == clip
        assert clip_dumps(again) == text

    def test_json_rejects_bad_version(self):
        obj = clip_to_obj(make_clip([0, 1]))
        obj["version"] = 2
        with pytest.raises(ValueError):
            clip_from_obj(obj)


class TestResample:
    def test_linear_ramp_doubles(self):
        clip = make_clip([0, 1, 2, 3], fps=10)
        out = resample(clip, 20.0)
        assert out.frame_count == 7
        np.testing.assert_allclose(out.frames[:, 0, 0],
                                   [0, 0.5, 1, 1.5, 2, 2.5, 3])

    def test_own_fps_is_identity(self):
        clip = make_clip([0, 3, 1, 4], fps=15)
        assert resample(clip, 15.0) == clip

    def test_frame_count_formula_and_endpoints(self):
        # 61 frames at 15 fps spans 4 s; at 25 fps that is 101 frames
        rng = np.random.default_rng(7)
        frames = rng.standard_normal((61, 3, 3))
        clip = MotionClip(15.0, ("a", "b", "c"), frames)
        out = resample(clip, 25.0)
        assert out.frame_count == round(clip.duration_s * 25.0) + 1 == 101
        np.testing.assert_array_equal(out.frames[0], clip.frames[0])
        np.testing.assert_array_equal(out.frames[-1], clip.frames[-1])

    def test_round_trip_on_refining_grid(self):
        # original timestamps are a subset of the doubled grid
        clip = make_clip([0, 1, 0, 2], fps=10)
        back = resample(resample(clip, 20.0), 10.0)
        np.testing.assert_allclose(back.frames, clip.frames, atol=1e-9)

    def test_rejects_bad_fps(self):
        with pytest.raises(ValueError):
            resample(make_clip([0, 1]), 0.0)


class TestDerivative:
    def test_constant_clip(self):
        out = derivative(make_clip([2, 2, 2, 2]))
        assert out.frame_count == 3
        assert np.all(out.frames == 0)

    def test_ramp(self):
        out = derivative(make_clip([0, 1, 2, 3]))
        np.testing.assert_array_equal(out.frames[:, 0, 0], [1, 1, 1])

    def test_second_difference_of_linear_is_zero(self):
        out = derivative(derivative(make_clip([0, 1, 2, 3])))
        np.testing.assert_array_equal(out.frames[:, 0, 0], [0, 0])

    def test_affine_in_time_gives_constant(self):
        rng = np.random.default_rng(0)
        slope = rng.standard_normal((2, 3))
        start = rng.standard_normal((2, 3))
        t = np.arange(8)[:, None, None]
        clip = MotionClip(10.0, ("a", "b"), start[None] + slope[None] * t)
        out = derivative(clip)
        np.testing.assert_allclose(out.frames, np.broadcast_to(
            slope, out.frames.shape), atol=1e-12)

    def test_needs_two_frames(self):
        with pytest.raises(ValueError):
            derivative(make_clip([1]))


class TestL1Loss:
    def test_identical_clips_zero(self):
        clip = random_clip(np.random.default_rng(1))
        report = l1_loss(clip, clip)
        assert report.position_l1 == 0
        assert report.velocity_l1 == 0
        assert report.acceleration_l1 == 0
        assert report.total == 0

    def test_constant_offset(self):
        clip = random_clip(np.random.default_rng(2))
        shifted = MotionClip(clip.fps, clip.joint_names, clip.frames + 0.5)
        report = l1_loss(clip, shifted)
        assert report.position_l1 == pytest.approx(0.5, abs=1e-12)
        assert report.velocity_l1 == pytest.approx(0.0, abs=1e-12)
        assert report.acceleration_l1 == pytest.approx(0.0, abs=1e-12)
        assert report.total == pytest.approx(0.5, abs=1e-12)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            a = random_clip(rng)
            b = random_clip(rng)
            report = l1_loss(a, b)
            pos, vel, acc = brute_force_l1(a, b)
            assert report.position_l1 == pytest.approx(pos, abs=1e-12)
            assert report.velocity_l1 == pytest.approx(vel, abs=1e-12)
            assert report.acceleration_l1 == pytest.approx(acc, abs=1e-12)

    def test_symmetry(self):
        rng = np.random.default_rng(4)
        a, b = random_clip(rng), random_clip(rng)
        assert l1_loss(a, b) == l1_loss(b, a)

    def test_fps_invariant_for_fixed_frames(self):
        # frame differences are not scaled by fps, so relabeling the rate
        # leaves every term unchanged
        rng = np.random.default_rng(14)
        frames_a = rng.standard_normal((12, 3, 3))
        frames_b = rng.standard_normal((12, 3, 3))
        names = ("a", "b", "c")
        slow = l1_loss(MotionClip(10.0, names, frames_a),
                       MotionClip(10.0, names, frames_b))
        fast = l1_loss(MotionClip(60.0, names, frames_a),
                       MotionClip(60.0, names, frames_b))
        assert slow == fast

    def test_derivative_self_consistency(self):
        rng = np.random.default_rng(5)
        a, b = random_clip(rng), random_clip(rng)
        report = l1_loss(a, b)
        assert report.velocity_l1 == pytest.approx(
            l1_loss(derivative(a), derivative(b)).position_l1, abs=1e-12)
        assert report.acceleration_l1 == pytest.approx(
            l1_loss(derivative(derivative(a)),
                    derivative(derivative(b))).position_l1, abs=1e-12)

    def test_shape_mismatch(self):
        a = make_clip([0, 1, 2])
        with pytest.raises(IncompatibleClips):
            l1_loss(a, make_clip([0, 1, 2], fps=20))
        with pytest.raises(IncompatibleClips):
            l1_loss(a, make_clip([0, 1, 2, 3]))
        with pytest.raises(IncompatibleClips):
            l1_loss(a, make_clip([0, 1, 2], joints=2))

    def test_needs_three_frames(self):
        short = make_clip([0, 1])
        with pytest.raises(ValueError):
            l1_loss(short, short)


class TestTimeWarp:
    def test_identity_same_duration(self):
        clip = make_clip([0, 2, 1, 3], fps=10)
        out = time_warp(clip, lambda u: u, clip.duration_s)
        assert out == clip

    def test_uniform_stretch_of_ramp(self):
        clip = make_clip([0, 1, 2], fps=1)
        out = time_warp(clip, lambda u: u, 4.0)
        np.testing.assert_allclose(out.frames[:, 0, 0],
                                   [0, 0.5, 1, 1.5, 2])

    def test_apex_preserving_piecewise_warp(self):
        # tent clip, apex at frame 8 of 20 (u = 0.4); the warp maps output
        # u = 0.5 to source u = 0.4, so the apex pose must appear exactly
        values = [min(i, 16 - i) if i <= 16 else 0 for i in range(21)]
        clip = make_clip(values, fps=10)
        warp = PiecewiseWarp([(0, 0), (0.5, 0.4), (1, 1)])
        out = time_warp(clip, warp, clip.duration_s)
        apex_out = out.frames[out.frame_count // 2]
        np.testing.assert_array_equal(apex_out, clip.frames[8])

    def test_endpoints_exact(self):
        rng = np.random.default_rng(6)
        clip = random_clip(rng, frames=9)
        out = time_warp(clip, lambda u: u * u, 1.7)
        np.testing.assert_array_equal(out.frames[0], clip.frames[0])
        np.testing.assert_array_equal(out.frames[-1], clip.frames[-1])

    def test_never_extrapolates(self):
        clip = make_clip([0, 1, 2, 3], fps=10)
        out = time_warp(clip, lambda u: min(1.0, u * 1.5), 0.6)
        assert out.frames[:, 0, 0].max() <= 3.0
        assert out.frames[:, 0, 0].min() >= 0.0

    def test_rejects_non_monotone(self):
        clip = make_clip([0, 1, 2, 3], fps=10)
        with pytest.raises(ValueError):
            time_warp(clip, lambda u: 1.0 - u if 0 < u < 1 else u, 0.3)

    def test_rejects_bad_endpoints(self):
        clip = make_clip([0, 1, 2, 3], fps=10)
        with pytest.raises(ValueError):
            time_warp(clip, lambda u: 0.5 * u, 0.3)


class TestPiecewiseWarp:
    def test_knot_validation(self):
        with pytest.raises(ValueError):
            PiecewiseWarp([(0, 0.2), (1, 1)])
        with pytest.raises(ValueError):
            PiecewiseWarp([(0, 0), (0.6, 0.8), (0.5, 0.9), (1, 1)])

    def test_invert_round_trip(self):
        warp = PiecewiseWarp([(0, 0), (0.3, 0.6), (0.8, 0.7), (1, 1)])
        for s in (0.0, 0.25, 0.61, 0.94, 1.0):
            assert warp(warp.invert(s)) == pytest.approx(s, abs=1e-12)

    def test_serialization(self):
        warp = PiecewiseWarp([(0, 0), (0.4, 0.2), (1, 1)])
        assert PiecewiseWarp.from_obj(warp.to_obj()).knots == warp.knots


class TestAdditiveBlend:
    def test_empty_layer_list(self):
        base = random_clip(np.random.default_rng(8))
        out = additive_blend(base, [], ramp_s=0.2)
        np.testing.assert_array_equal(out.frames, base.frames)

    def test_zero_offsets(self):
        base = random_clip(np.random.default_rng(9), frames=20)
        zeros = MotionClip(base.fps, base.joint_names,
                           np.zeros((5, base.joint_count, 3)))
        out = additive_blend(base, [(3, zeros)], ramp_s=0.2)
        np.testing.assert_array_equal(out.frames, base.frames)

    def test_no_ramp_interior_addition(self):
        base = random_clip(np.random.default_rng(10), frames=20)
        layer = random_clip(np.random.default_rng(11), frames=6)
        out = additive_blend(base, [(4, layer)], ramp_s=0.0)
        for t in range(4, 10):
            np.testing.assert_allclose(out.frames[t] - base.frames[t],
                                       layer.frames[t - 4], atol=1e-12)
        np.testing.assert_array_equal(out.frames[:4], base.frames[:4])
        np.testing.assert_array_equal(out.frames[10:], base.frames[10:])

    def test_linear_in_layers(self):
        base = random_clip(np.random.default_rng(12), frames=30)
        layer = random_clip(np.random.default_rng(13), frames=12)
        alpha = 0.37
        scaled = MotionClip(layer.fps, layer.joint_names,
                            alpha * layer.frames)
        one = additive_blend(base, [(5, layer)], ramp_s=0.2)
        two = additive_blend(base, [(5, scaled)], ramp_s=0.2)
        np.testing.assert_allclose(two.frames - base.frames,
                                   alpha * (one.frames - base.frames),
                                   atol=1e-12)

    def test_ramp_weights_rise_smoothly(self):
        base = MotionClip(10.0, ("a",), np.zeros((40, 1, 3)))
        layer = MotionClip(10.0, ("a",), np.ones((20, 1, 3)))
        out = additive_blend(base, [(10, layer)], ramp_s=0.5)
        w = out.frames[10:30, 0, 0]
        assert w[0] == 0.0
        assert w[-1] == 0.0
        # ramp covers 5 frames: value at full weight inside
        np.testing.assert_allclose(w[5:15], 1.0)
        assert np.all(np.diff(w[:6]) >= 0)
        np.testing.assert_allclose(w[1], smoothstep(1 / 5), atol=1e-12)

    def test_layer_clamped_to_base(self):
        base = MotionClip(10.0, ("a",), np.zeros((10, 1, 3)))
        layer = MotionClip(10.0, ("a",), np.ones((8, 1, 3)))
        out = additive_blend(base, [(6, layer)], ramp_s=0.0)
        np.testing.assert_allclose(out.frames[6:, 0, 0], 1.0)
        np.testing.assert_array_equal(out.frames[:6], base.frames[:6])

    def test_joint_mismatch(self):
        base = make_clip([0, 1, 2])
        layer = make_clip([0, 1], joints=2)
        with pytest.raises(IncompatibleClips):
            additive_blend(base, [(0, layer)], 0.0)


def test_pose_validation():
    with pytest.raises(ValueError):
        Pose(("a", "b"), np.zeros((1, 3)))
    with pytest.raises(ValueError):
        Pose(("a",), [[math.inf, 0, 0]])
