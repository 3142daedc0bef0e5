"""Detect the hub, seed a tracking ROI from it, and track through a sequence.

Frames on disk are binary PPMs named ``frame_%06d.ppm`` starting at 0. The
tracking log is JSON Lines with exactly the fields of :class:`TrackLogRecord`.
"""

import json
import logging
import os
import re
from dataclasses import asdict, dataclass, field, fields

from .annotate import annotate
from .errors import DetectionError, FrameSourceError, ParameterError
from .histogram import HistParams
from .hough import HoughParams, _detect
from .image import Roi, gaussian_blur, load_pnm, save_pnm, to_grayscale
from .tracker import TrackingSession, TrackParams, round_half_away

__all__ = [
    "PipelineConfig",
    "TrackLogRecord",
    "PipelineResult",
    "detect_and_seed",
    "frame_name",
    "list_frames",
    "load_frames",
    "write_frames",
    "run_pipeline",
    "track_frames",
    "write_log",
]

log = logging.getLogger(__name__)

FRAME_PATTERN = re.compile(r"^frame_(\d{6})\.ppm$")


def frame_name(index):
    return f"frame_{index:06d}.ppm"


def _build(cls, values, section):
    if isinstance(values, cls):
        return values
    if not isinstance(values, dict):
        raise ParameterError(f"config section {section!r} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = set(values) - known
    if unknown:
        raise ParameterError(f"unknown keys in {section!r}: {sorted(unknown)}")
    return cls(**values)


@dataclass(frozen=True)
class PipelineConfig:
    hough: HoughParams = field(default_factory=HoughParams)
    hist: HistParams = field(default_factory=HistParams)
    track: TrackParams = field(default_factory=TrackParams)
    blur_sigma: float = 1.0
    roi_scale: float = 1.4

    def __post_init__(self):
        if not self.blur_sigma >= 0:
            raise ParameterError(f"blur_sigma must be >= 0, got {self.blur_sigma}")
        if not self.roi_scale >= 1:
            raise ParameterError(f"roi_scale must be >= 1, got {self.roi_scale}")

    @classmethod
    def from_dict(cls, d):
        """Build from a JSON-style dict; missing keys take defaults."""
        if not isinstance(d, dict):
            raise ParameterError("config must be a JSON object")
        unknown = set(d) - {f.name for f in fields(cls)} - {"seed"}
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        kwargs = {}
        for name, sub in (("hough", HoughParams), ("hist", HistParams), ("track", TrackParams)):
            if name in d:
                kwargs[name] = _build(sub, d[name], name)
        for name in ("blur_sigma", "roi_scale"):
            if name in d:
                kwargs[name] = d[name]
        return cls(**kwargs)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TrackLogRecord:
    frame: int
    cx: float
    cy: float
    w: int
    h: int
    m00: float
    iterations: int
    converged: bool

    @classmethod
    def from_state(cls, state):
        return cls(
            frame=state.frame_index,
            cx=float(state.centroid[0]),
            cy=float(state.centroid[1]),
            w=int(state.window.w),
            h=int(state.window.h),
            m00=float(state.m00),
            iterations=int(state.iterations),
            converged=bool(state.converged),
        )

    def to_json(self):
        return json.dumps(asdict(self))


@dataclass
class PipelineResult:
    hit: object
    roi: Roi
    states: list
    records: list


def detect_and_seed(frame, cfg):
    """Find the strongest circle on ``frame`` and a square ROI around it.

    The ROI side is ``roi_scale * 2 * radius`` (rounded), centred on the hit
    and shifted/shrunk to stay inside the frame.
    """
    gray = to_grayscale(frame)
    if cfg.blur_sigma > 0:
        gray = gaussian_blur(gray, cfg.blur_sigma)
    hits, n_candidates = _detect(gray, cfg.hough)
    if not hits:
        raise DetectionError(
            f"no circle detected ({n_candidates} accumulator candidates)", n_candidates
        )
    hit = hits[0]
    side = max(1, round_half_away(cfg.roi_scale * 2.0 * hit.radius))
    w = min(side, frame.width)
    h = min(side, frame.height)
    x = min(max(round_half_away(hit.cx - (w - 1) / 2.0), 0), frame.width - w)
    y = min(max(round_half_away(hit.cy - (h - 1) / 2.0), 0), frame.height - h)
    return hit, Roi(x, y, w, h)


def list_frames(frame_dir):
    """Sorted frame paths; the indices must run 0, 1, 2, ... without gaps."""
    if not os.path.isdir(frame_dir):
        raise FrameSourceError(f"{frame_dir} is not a directory")
    indexed = []
    for name in os.listdir(frame_dir):
        m = FRAME_PATTERN.match(name)
        if m:
            indexed.append((int(m.group(1)), name))
    if not indexed:
        raise FrameSourceError(f"no frame_NNNNNN.ppm files in {frame_dir}")
    indexed.sort()
    for expected, (index, name) in enumerate(indexed):
        if index != expected:
            raise FrameSourceError(f"frame sequence has a gap: expected {frame_name(expected)}, found {name}")
    return [os.path.join(frame_dir, name) for _, name in indexed]


def load_frames(frame_dir):
    frames = []
    for path in list_frames(frame_dir):
        frame = load_pnm(path)
        if frame.channels != 3:
            raise FrameSourceError(f"{path} is not a colour (P6) frame")
        frames.append(frame)
    return frames


def write_frames(frames, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for i, frame in enumerate(frames):
        save_pnm(frame, os.path.join(out_dir, frame_name(i)))


def write_log(records, path):
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")


def track_frames(frames, seed, cfg, hit=None, annotate_dir=None):
    """Run CamShift over ``frames`` from ``seed``; optionally save overlays."""
    session = TrackingSession(frames[0], seed, cfg.hist, cfg.track)
    states, records = [], []
    if annotate_dir is not None:
        os.makedirs(annotate_dir, exist_ok=True)
    for i, frame in enumerate(frames):
        state = session.step(frame)
        states.append(state)
        records.append(TrackLogRecord.from_state(state))
        if annotate_dir is not None:
            circles = [hit] if (hit is not None and i == 0) else []
            save_pnm(annotate(frame, circles, state.window), os.path.join(annotate_dir, frame_name(i)))
    return states, records


def run_pipeline(frame_dir, cfg, out_dir, annotate_frames=False, log_path=None):
    """Detect on frame 0, track every frame, write ``track.jsonl`` to ``out_dir``.

    Errors surface as :class:`~wheeltrack.errors.WheelTrackError` subclasses
    whose ``exit_code`` follows the CLI convention (2 detection failure,
    3 I/O or parse error, 4 invalid configuration).
    """
    frames = load_frames(frame_dir)
    hit, roi = detect_and_seed(frames[0], cfg)
    log.info("seed circle cx=%g cy=%g r=%d votes=%d -> roi %s", hit.cx, hit.cy, hit.radius, hit.votes, roi)
    os.makedirs(out_dir, exist_ok=True)
    states, records = track_frames(frames, roi, cfg, hit, out_dir if annotate_frames else None)
    write_log(records, log_path or os.path.join(out_dir, "track.jsonl"))
    return PipelineResult(hit, roi, states, records)
