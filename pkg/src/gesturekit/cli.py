"""Command line front end.

Exit codes: 0 success, 1 validation/usage error, 2 I/O or transport error.
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from .dictionary import Dictionary, GestureUnit, load_dictionary, \
    save_dictionary, stages_from_obj, validate_unit
from .errors import DictionaryError, GestureKitError, TransportError
from .jsonio import read_json, write_canonical
from .motion import Pose, clip_from_obj, clip_to_obj, l1_loss, pose_from_obj
from .nlu import LlmConfig, assemble_script, classify, load_lexicon
from .script import Intent, parse_script, segment_sentences, \
    serialize_script, attach_timings, timings_from_obj
from .segmentation import SegmentationParams, compute_speed, detect_units, \
    export_units, rest_threshold
from .synthesis import SynthesisConfig, parse_base_spec, synthesize
from .textgrid import parse_textgrid


class _Parser(argparse.ArgumentParser):
    """Argument parser that exits 1 on usage errors, per our exit codes."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _load_timings(args):
    if args.textgrid:
        return parse_textgrid(Path(args.textgrid).read_text(encoding="utf-8"))
    return timings_from_obj(read_json(args.timings))


def _manifest_path(path_text: str) -> Path:
    path = Path(path_text)
    if path.is_dir():
        return path / "manifest.json"
    return path


def cmd_parse(args) -> int:
    text = Path(args.text).read_text(encoding="utf-8")
    timings = _load_timings(args)
    sentences = segment_sentences(text)
    timed = attach_timings(sentences, timings)
    lexicon = load_lexicon(args.lexicon)
    mode = "offline"
    if args.llm:
        mode = "llm-strict" if args.strict_online else "llm"
    results = classify([ts.text for ts in timed], lexicon,
                       tokens=[ts.tokens for ts in timed], mode=mode,
                       config=LlmConfig(), cache_dir=args.cache)
    script, notes = assemble_script(timed, results)
    Path(args.out).write_text(serialize_script(script), encoding="utf-8")
    print(f"{'idx':>3}  {'intent':<14}  {'keyword':<18}  provenance")
    for entry, res in zip(script.sentences, results):
        print(f"{entry.index:>3}  {entry.intent.value:<14}  "
              f"{entry.keyword:<18}  {res.provenance}")
    for note in notes:
        print(f"note: {note}")
    print(f"wrote {args.out}")
    return 0


def cmd_synth(args) -> int:
    if args.fps <= 0:
        raise ValueError("--fps must be positive")
    script = parse_script(Path(args.script).read_text(encoding="utf-8"))
    dictionary = load_dictionary(_manifest_path(args.dict),
                                 eps_rest=args.eps_rest)
    base_spec = parse_base_spec(args.base, strict=args.strict_base)
    config = SynthesisConfig(fps=args.fps, ramp_s=args.ramp_s,
                             mode=args.mode, seed=args.seed,
                             min_gesture_s=args.min_gesture_s)
    result = synthesize(script, dictionary, base_spec, config)

    out = Path(args.out)
    write_canonical(out, clip_to_obj(result.motion))
    schedule_path = Path(args.schedule) if args.schedule \
        else out.with_suffix(".schedule.json")
    write_canonical(schedule_path, result.schedule.to_obj())
    report_path = Path(args.report) if args.report \
        else out.with_suffix(".report.txt")
    report_path.write_text(result.report.to_text() + "\n", encoding="utf-8")

    if args.csv:
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["frame", "joint", "x", "y", "z"])
            for f in range(result.motion.frame_count):
                for j, name in enumerate(result.motion.joint_names):
                    x, y, z = result.motion.frames[f, j]
                    writer.writerow([f, name, x, y, z])
    if args.figures:
        from . import viz
        figdir = Path(args.figures)
        figdir.mkdir(parents=True, exist_ok=True)
        viz.save_schedule_figure(result.schedule, script,
                                 figdir / "schedule.png")
        viz.save_motion_speed_figure(result.motion,
                                     figdir / "motion_speed.png",
                                     schedule=result.schedule)
    print(result.report.to_text())
    print(f"wrote {out}, {schedule_path}, {report_path}")
    return 0


def cmd_segment(args) -> int:
    clip = clip_from_obj(read_json(args.clip))
    params = SegmentationParams(
        smoothing_window_frames=args.window,
        rest_speed_fraction=args.rest_fraction,
        min_rest_s=args.min_rest, min_unit_s=args.min_unit,
        stroke_fraction=args.stroke_fraction, min_hold_s=args.min_hold)
    detections = detect_units(clip, params)
    out_dir = Path(args.out_dir)
    fragment = export_units(clip, detections, out_dir)
    write_canonical(out_dir / "units.json", fragment)
    if args.figures:
        from . import viz
        figdir = Path(args.figures)
        figdir.mkdir(parents=True, exist_ok=True)
        series = compute_speed(clip, params.smoothing_window_frames)
        viz.save_speed_figure(series, rest_threshold(series, params),
                              detections, figdir / "speed.png")
    print(f"{len(detections)} units")
    return 0


def cmd_dict_build(args) -> int:
    fragment = read_json(args.fragment)
    clips_dir = Path(args.clips_dir) if args.clips_dir \
        else Path(args.fragment).parent
    labels = read_json(args.labels).get("labels", {})
    units = []
    missing = []
    for raw in fragment.get("units", []):
        uid = raw["id"]
        label = labels.get(uid)
        if label is None:
            missing.append(uid)
            continue
        clip = clip_from_obj(read_json(clips_dir / raw["file"]))
        units.append(GestureUnit(
            id=uid, intent=Intent(label["intent"]),
            duration_variant_s=int(label["duration_variant_s"]),
            clip=clip, stages=stages_from_obj(raw["stages"], uid),
            semantic_tag=label.get("semantic_tag"),
            clip_file=f"clips/{raw['file']}"))
    if missing:
        raise DictionaryError(
            f"no label for unit(s): {', '.join(missing)}")
    if args.rest:
        rest = pose_from_obj(read_json(args.rest))
    elif units:
        rest = Pose(units[0].clip.joint_names, units[0].clip.frames[0])
    else:
        raise DictionaryError("empty fragment and no --rest pose given")
    errors = []
    for unit in units:
        errors.extend(validate_unit(unit, rest, args.eps_rest))
    if errors:
        raise DictionaryError(
            f"{len(errors)} validation failure(s):\n" + "\n".join(errors))
    dictionary = Dictionary(rest_pose=rest, units=tuple(units))
    manifest = save_dictionary(dictionary, args.out_dir)
    print(f"{len(units)} units -> {manifest}")
    return 0


def cmd_dict_check(args) -> int:
    dictionary = load_dictionary(_manifest_path(args.dict),
                                 eps_rest=args.eps_rest)
    print(f"{len(dictionary.units)} units ok")
    return 0


def cmd_eval(args) -> int:
    ref = clip_from_obj(read_json(args.ref))
    pred = clip_from_obj(read_json(args.pred))
    report = l1_loss(ref, pred)
    print(f"position_l1 {report.position_l1:.6f}")
    print(f"velocity_l1 {report.velocity_l1:.6f}")
    print(f"acceleration_l1 {report.acceleration_l1:.6f}")
    print(f"total {report.total:.6f}")
    if args.figures:
        from . import viz
        figdir = Path(args.figures)
        figdir.mkdir(parents=True, exist_ok=True)
        viz.save_loss_figure(report, figdir / "loss.png")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    dictionary = load_dictionary(_manifest_path(args.dict))
    mode = "offline"
    if args.llm:
        mode = "llm-strict" if args.strict_online else "llm"
    app = create_app(dictionary, mode=mode, cache_dir=args.cache,
                     cors_origin=args.cors_origin)
    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def _add_llm_flags(sub):
    group = sub.add_mutually_exclusive_group()
    group.add_argument("--offline", action="store_true", default=True,
                       help="deterministic lexicon classifier (default)")
    group.add_argument("--llm", action="store_true", default=False,
                       help="LLM classification with offline fallback")
    sub.add_argument("--strict-online", action="store_true",
                     help="with --llm: fail instead of falling back on "
                          "transport errors")
    sub.add_argument("--cache", default=None, metavar="DIR",
                     help="replay cache directory for LLM exchanges")
    sub.add_argument("--lexicon", default=None, metavar="FILE",
                     help="override the packaged cue lexicon")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gesturekit",
                     description="Co-speech gesture synthesis toolkit")
    subs = parser.add_subparsers(dest="command", required=True,
                                 parser_class=_Parser)

    p = subs.add_parser("parse",
                        help="text + word timings -> gesture script")
    p.add_argument("--text", required=True, metavar="FILE")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--timings", metavar="FILE",
                     help="word-timing JSON file")
    src.add_argument("--textgrid", metavar="FILE",
                     help="Praat long-form TextGrid with a words tier")
    p.add_argument("--out", required=True, metavar="FILE")
    _add_llm_flags(p)
    p.set_defaults(func=cmd_parse)

    p = subs.add_parser("synth",
                        help="gesture script + dictionary -> motion")
    p.add_argument("--script", required=True, metavar="FILE")
    p.add_argument("--dict", required=True, metavar="DIR",
                   help="dictionary directory or manifest path")
    p.add_argument("--base", default="rest",
                   help="rest | sway | file:PATH (default rest)")
    p.add_argument("--mode", choices=("onset", "stroke"), default="onset")
    p.add_argument("--fps", type=float, default=25.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ramp-s", type=float, default=0.2, dest="ramp_s")
    p.add_argument("--min-gesture-s", type=float, default=1.5,
                   dest="min_gesture_s")
    p.add_argument("--eps-rest", type=float, default=0.02, dest="eps_rest")
    p.add_argument("--strict-base", action="store_true",
                   help="error when a file base is shorter than the "
                        "timeline")
    p.add_argument("--out", required=True, metavar="FILE")
    p.add_argument("--schedule", metavar="FILE",
                   help="schedule JSON (default: <out>.schedule.json)")
    p.add_argument("--report", metavar="FILE",
                   help="report text (default: <out>.report.txt)")
    p.add_argument("--csv", metavar="FILE",
                   help="per-frame CSV export (frame, joint, x, y, z)")
    p.add_argument("--figures", metavar="DIR",
                   help="render schedule/speed figures into DIR")
    p.set_defaults(func=cmd_synth)

    p = subs.add_parser("segment",
                        help="motion clip -> gesture unit files")
    p.add_argument("--clip", required=True, metavar="FILE")
    p.add_argument("--out-dir", required=True, metavar="DIR",
                   dest="out_dir")
    p.add_argument("--window", type=int, default=5,
                   help="speed smoothing window (odd frames)")
    p.add_argument("--rest-fraction", type=float, default=0.05,
                   dest="rest_fraction")
    p.add_argument("--min-rest", type=float, default=0.3, dest="min_rest")
    p.add_argument("--min-unit", type=float, default=0.8, dest="min_unit")
    p.add_argument("--stroke-fraction", type=float, default=0.5,
                   dest="stroke_fraction")
    p.add_argument("--min-hold", type=float, default=0.2, dest="min_hold")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_segment)

    p = subs.add_parser("dict-build",
                        help="labeled unit stubs -> loadable dictionary")
    p.add_argument("--fragment", required=True, metavar="FILE",
                   help="units.json written by segment")
    p.add_argument("--clips-dir", metavar="DIR", dest="clips_dir",
                   help="directory holding the unit clips (default: "
                        "fragment directory)")
    p.add_argument("--labels", required=True, metavar="FILE",
                   help='{"labels": {unit_id: {intent, duration_variant_s, '
                        'semantic_tag?}}}')
    p.add_argument("--rest", metavar="FILE",
                   help="rest pose JSON (default: first frame of the first "
                        "unit)")
    p.add_argument("--eps-rest", type=float, default=0.02, dest="eps_rest")
    p.add_argument("--out-dir", required=True, metavar="DIR", dest="out_dir")
    p.set_defaults(func=cmd_dict_build)

    p = subs.add_parser("dict-check",
                        help="validate a dictionary")
    p.add_argument("--dict", required=True, metavar="DIR")
    p.add_argument("--eps-rest", type=float, default=0.02, dest="eps_rest")
    p.set_defaults(func=cmd_dict_check)

    p = subs.add_parser("eval",
                        help="L1 position/velocity/acceleration error "
                             "between two motions")
    p.add_argument("--ref", required=True, metavar="FILE")
    p.add_argument("--pred", required=True, metavar="FILE")
    p.add_argument("--figures", metavar="DIR")
    p.set_defaults(func=cmd_eval)

    p = subs.add_parser("serve",
                        help="local HTTP service for the viewer")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--dict", required=True, metavar="DIR")
    p.add_argument("--cors-origin", default=None, dest="cors_origin")
    _add_llm_flags(p)
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else (0 if code is None else 1)
    except (TransportError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, GestureKitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
