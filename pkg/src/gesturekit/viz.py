"""Figure rendering for the report paths of the CLI.

Everything draws through the Agg backend and saves straight to files, so
these work headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .motion import LossReport, MotionClip
from .scheduling import Schedule
from .script import GestureScript
from .segmentation import SpeedSeries, UnitDetection, compute_speed

_KIND_COLORS = {"identity": "#4c72b0", "uniform": "#dd8452",
                "stage_aware": "#55a868"}


def save_schedule_figure(schedule: Schedule, script: GestureScript,
                         path) -> Path:
    """Timeline of sentence spans, placed units, apexes, and keywords."""
    fig, ax = plt.subplots(figsize=(10, 3.2))
    for s in script.sentences:
        ax.axvspan(s.start_s, s.end_s, color="0.92", zorder=0)
        ax.axvline((s.keyword_start_s + s.keyword_end_s) / 2, color="0.4",
                   linestyle=":", linewidth=0.9, zorder=1)
    for e in schedule.entries:
        color = _KIND_COLORS.get(e.kind, "0.5")
        ax.barh(0.5, e.target_duration_s, left=e.onset_s, height=0.55,
                color=color, edgecolor="black", linewidth=0.5, zorder=2)
        ax.plot([e.apex_time_s], [0.5], marker="v", color="crimson",
                markersize=7, zorder=3)
        ax.annotate(e.unit_id.rsplit("_", 1)[0], (e.onset_s, 0.82),
                    fontsize=6, rotation=20)
    ax.set_xlim(0, max(schedule.total_duration_s, 1e-3))
    ax.set_ylim(0, 1.2)
    ax.set_yticks([])
    ax.set_xlabel("time (s)")
    ax.set_title("gesture schedule (markers: stroke apex; dotted: keyword "
                 "midpoints)")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_speed_figure(series: SpeedSeries, tau: float,
                      detections: list[UnitDetection], path) -> Path:
    """Smoothed speed signal with the rest threshold and detected units."""
    fig, ax = plt.subplots(figsize=(10, 3.2))
    t = np.arange(series.values.shape[0]) / series.fps
    ax.plot(t, series.values, color="#4c72b0", linewidth=1.0,
            label="smoothed speed")
    ax.axhline(tau, color="crimson", linestyle="--", linewidth=0.9,
               label="rest threshold")
    for det in detections:
        ax.axvspan(det.start / series.fps, det.end / series.fps,
                   color="#55a868", alpha=0.18)
        apex = (det.start + det.stages.stroke_apex) / series.fps
        ax.axvline(apex, color="#55a868", linewidth=0.8, linestyle=":")
    ax.set_xlabel("time (s)")
    ax.set_ylabel("mean joint speed (units/frame)")
    ax.legend(loc="upper right", fontsize=8)
    ax.set_title(f"unit detection: {len(detections)} unit(s)")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_motion_speed_figure(clip: MotionClip, path,
                             schedule: Schedule | None = None) -> Path:
    """Speed profile of a finished motion, optionally with the schedule."""
    series = compute_speed(clip, smoothing_window_frames=1)
    fig, ax = plt.subplots(figsize=(10, 3.2))
    t = np.arange(series.values.shape[0]) / series.fps
    ax.plot(t, series.values, color="#4c72b0", linewidth=1.0)
    if schedule is not None:
        for e in schedule.entries:
            ax.axvspan(e.onset_s, e.end_s, color="#55a868", alpha=0.15)
    ax.set_xlabel("time (s)")
    ax.set_ylabel("mean joint speed (units/frame)")
    ax.set_title("output motion speed profile")
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_loss_figure(report: LossReport, path) -> Path:
    """Bar chart of the three error terms and their total."""
    fig, ax = plt.subplots(figsize=(5, 3.2))
    labels = ["position", "velocity", "acceleration", "total"]
    values = [report.position_l1, report.velocity_l1,
              report.acceleration_l1, report.total]
    ax.bar(labels, values,
           color=["#4c72b0", "#dd8452", "#55a868", "#8172b3"])
    ax.set_ylabel("mean absolute error")
    ax.set_title("reconstruction error by derivative order")
    for i, v in enumerate(values):
        ax.annotate(f"{v:.4g}", (i, v), ha="center", va="bottom", fontsize=8)
    fig.tight_layout()
    path = Path(path)
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
