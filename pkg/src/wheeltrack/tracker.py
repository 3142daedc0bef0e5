"""Image moments, mean shift and CamShift window adaptation.

Moments use absolute map coordinates (column ``x``, row ``y``), so the
centroid of a window is directly a pixel position in the frame.

Two window-sizing rules are available. ``"central-moments"`` (default) sizes
the window as ``area_scale * sqrt(m00)`` with an aspect ratio taken from the
central second moments. ``"paper-eq78"`` applies the raw-moment formulas

    ratio  = (m20 / xc**2) / (m02 / yc**2)
    width  = 2 * m00 * ratio
    height = 2 * m00 / ratio

verbatim. That rule grows linearly with target area and depends on where the
target sits in the frame, so it is kept only for checking the formulas.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import BoundsError, NoMassError, ParameterError
from .histogram import HistParams, back_project, compute_hue_histogram
from .image import Roi, rgb_to_hsv

__all__ = [
    "Moments",
    "Window",
    "TrackState",
    "TrackParams",
    "compute_moments",
    "centroid",
    "mean_shift",
    "update_window",
    "camshift_step",
    "TrackingSession",
    "track_sequence",
    "round_half_away",
]

WINDOW_MODES = ("central-moments", "paper-eq78")


def round_half_away(value):
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


@dataclass(frozen=True)
class Moments:
    m00: float
    m10: float
    m01: float
    m20: float
    m02: float


@dataclass(frozen=True)
class Window:
    x: int
    y: int
    w: int
    h: int

    @property
    def center(self):
        return (self.x + (self.w - 1) / 2.0, self.y + (self.h - 1) / 2.0)

    @classmethod
    def from_roi(cls, roi):
        return cls(roi.x, roi.y, roi.w, roi.h)

    def contains(self, x, y):
        return self.x - 0.5 <= x <= self.x + self.w - 0.5 and self.y - 0.5 <= y <= self.y + self.h - 0.5

    def clamp(self, width, height):
        """Resize to fit and shift so the window lies inside a map."""
        w = min(max(self.w, 2), width)
        h = min(max(self.h, 2), height)
        x = min(max(self.x, 0), width - w)
        y = min(max(self.y, 0), height - h)
        return Window(x, y, w, h)


@dataclass(frozen=True)
class TrackParams:
    eps: float = 1.0
    max_iter: int = 10
    window_mode: str = "central-moments"
    area_scale: float = 2.0

    def __post_init__(self):
        if not self.eps > 0:
            raise ParameterError(f"eps must be > 0, got {self.eps}")
        if int(self.max_iter) != self.max_iter or self.max_iter < 1:
            raise ParameterError(f"max_iter must be an integer >= 1, got {self.max_iter}")
        if self.window_mode not in WINDOW_MODES:
            raise ParameterError(f"window_mode must be one of {WINDOW_MODES}, got {self.window_mode!r}")
        if not self.area_scale > 0:
            raise ParameterError(f"area_scale must be > 0, got {self.area_scale}")


@dataclass(frozen=True)
class TrackState:
    frame_index: int
    window: Window
    centroid: tuple
    m00: float
    iterations: int
    converged: bool


def _check_window(p, win):
    height, width = p.p.shape
    if win.w < 1 or win.h < 1 or win.x < 0 or win.y < 0 or win.x + win.w > width or win.y + win.h > height:
        raise BoundsError(f"{win} not inside {width}x{height} probability map")


def compute_moments(p, win):
    """Raw moments up to second order of ``p`` inside ``win``."""
    _check_window(p, win)
    block = p.p[win.y:win.y + win.h, win.x:win.x + win.w]
    xs = np.arange(win.x, win.x + win.w, dtype=np.float64)
    ys = np.arange(win.y, win.y + win.h, dtype=np.float64)
    col = block.sum(axis=0)
    row = block.sum(axis=1)
    return Moments(
        m00=float(col.sum()),
        m10=float(col @ xs),
        m01=float(row @ ys),
        m20=float(col @ (xs * xs)),
        m02=float(row @ (ys * ys)),
    )


def centroid(m):
    if not m.m00 > 0:
        raise NoMassError("zero probability mass; centroid undefined")
    return (m.m10 / m.m00, m.m01 / m.m00)


def _centered(win, c, w, h, width, height):
    x = round_half_away(c[0] - (w - 1) / 2.0)
    y = round_half_away(c[1] - (h - 1) / 2.0)
    return Window(x, y, w, h).clamp(width, height)


def mean_shift(p, win, params=None, trace=None):
    """Move a fixed-size window onto the centre of mass until it settles.

    Returns ``(window, iterations, converged)``. If ``trace`` is a list, the
    zeroth moment seen at each iteration is appended to it.
    """
    params = params or TrackParams()
    _check_window(p, win)
    height, width = p.p.shape
    converged = False
    iterations = 0
    for iterations in range(1, params.max_iter + 1):
        m = compute_moments(p, win)
        if not m.m00 > 0:
            raise NoMassError(f"no probability mass inside {win}")
        if trace is not None:
            trace.append(m.m00)
        moved = _centered(win, centroid(m), win.w, win.h, width, height)
        shift = math.hypot(moved.x - win.x, moved.y - win.y)
        win = moved
        if shift < params.eps:
            converged = True
            break
    return win, iterations, converged


def update_window(m, c, mode="central-moments", area_scale=2.0, bounds=None):
    """New window ``(w, h)`` from moments and centroid.

    ``bounds`` is the ``(width, height)`` of the map; sizes are clamped to
    ``[2, bound]`` (only the lower limit applies when omitted).
    """
    if not m.m00 > 0:
        raise ParameterError("update_window needs m00 > 0")
    xc, yc = c
    if mode == "paper-eq78":
        if not (xc > 0 and yc > 0):
            raise ParameterError("paper-eq78 sizing needs a strictly positive centroid")
        if not (m.m20 > 0 and m.m02 > 0):
            raise ParameterError("paper-eq78 sizing needs positive second moments")
        ratio = (m.m20 / xc ** 2) / (m.m02 / yc ** 2)
        w = 2.0 * m.m00 * ratio
        h = 2.0 * m.m00 / ratio
    elif mode == "central-moments":
        if not area_scale > 0:
            raise ParameterError(f"area_scale must be > 0, got {area_scale}")
        mu20 = m.m20 / m.m00 - xc * xc
        mu02 = m.m02 / m.m00 - yc * yc
        r = math.sqrt(mu20 / mu02) if mu20 > 0 and mu02 > 0 else 1.0
        w = area_scale * math.sqrt(m.m00 * r)
        h = area_scale * math.sqrt(m.m00 / r)
    else:
        raise ParameterError(f"unknown window mode {mode!r}")
    w = max(2, round_half_away(w))
    h = max(2, round_half_away(h))
    if bounds is not None:
        w = min(w, bounds[0])
        h = min(h, bounds[1])
    return w, h


def camshift_step(p, win, params=None, frame_index=0):
    """One CamShift frame: mean shift, then resize around the centroid."""
    params = params or TrackParams()
    height, width = p.p.shape
    settled, iterations, converged = mean_shift(p, win, params)
    m = compute_moments(p, settled)
    if not m.m00 > 0:
        raise NoMassError(f"no probability mass inside {settled}")
    c = centroid(m)
    w, h = update_window(m, c, params.window_mode, params.area_scale, (width, height))
    return TrackState(
        frame_index=frame_index,
        window=_centered(settled, c, w, h, width, height),
        centroid=c,
        m00=m.m00,
        iterations=iterations,
        converged=converged,
    )


class TrackingSession:
    """Stateful CamShift tracker over a sequence of RGB8 frames.

    The hue model is learned once from ``seed`` on ``first_frame`` and kept
    fixed. When a frame has no mass under the window the session coasts:
    it reports a non-converged state and reuses the previous window.
    """

    def __init__(self, first_frame, seed, hist_params=None, track_params=None):
        self.hist_params = hist_params or HistParams()
        self.track_params = track_params or TrackParams()
        seed.check_inside(first_frame.width, first_frame.height)
        roi_hsv = rgb_to_hsv(first_frame, roi=seed)
        self.hist = compute_hue_histogram(
            roi_hsv, Roi(0, 0, seed.w, seed.h),
            self.hist_params.bins, self.hist_params.smin, self.hist_params.vmin,
        )
        self.window = Window.from_roi(seed).clamp(first_frame.width, first_frame.height)
        self.frame_index = 0

    def step(self, frame):
        p = back_project(rgb_to_hsv(frame), self.hist)
        try:
            state = camshift_step(p, self.window, self.track_params, self.frame_index)
        except NoMassError:
            state = TrackState(self.frame_index, self.window, self.window.center, 0.0, 0, False)
        self.window = state.window
        self.frame_index += 1
        return state


def track_sequence(frames, seed, hist_params=None, track_params=None):
    """Track through ``frames`` starting from the ``seed`` ROI on frame 0."""
    frames = list(frames)
    if not frames:
        raise ParameterError("track_sequence needs at least one frame")
    session = TrackingSession(frames[0], seed, hist_params, track_params)
    return [session.step(frame) for frame in frames]
