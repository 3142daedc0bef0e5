"""Circle detection with the Hough gradient method.

Instead of a 3-D (x, y, r) accumulator, each edge pixel votes for centres
along its gradient line; radii are chosen afterwards from the distribution of
edge-pixel distances around every accepted centre.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .edges import _canny_from_gradient, sobel
from .errors import ParameterError, SizeError
from .image import Model, _require

__all__ = [
    "HoughParams",
    "CircleHit",
    "CenterAccumulator",
    "accumulate_centers",
    "select_candidates",
    "estimate_radius",
    "detect_circles",
]

_CHUNK = 1024


@dataclass(frozen=True)
class HoughParams:
    """Detector settings, named after the usual ``HoughCircles`` arguments.

    ``canny_high`` is Param_1 (the Canny high threshold, low = high/2) and
    ``acc_threshold`` is Param_2 (minimum votes for a centre and minimum
    edge support for its radius). ``max_radius = 0`` means unbounded and
    ``min_radius = 0`` means 1. ``dp`` below 1 is treated as 1.
    """

    dp: float = 1.0
    min_dist: float = 18.0
    canny_high: float = 50.0
    acc_threshold: int = 33
    min_radius: int = 0
    max_radius: int = 0

    def __post_init__(self):
        if not self.dp > 0:
            raise ParameterError(f"dp must be > 0, got {self.dp}")
        if not self.min_dist >= 1:
            raise ParameterError(f"min_dist must be >= 1, got {self.min_dist}")
        if not self.canny_high > 0:
            raise ParameterError(f"canny_high must be > 0, got {self.canny_high}")
        if int(self.acc_threshold) != self.acc_threshold or self.acc_threshold < 1:
            raise ParameterError(f"acc_threshold must be an integer >= 1, got {self.acc_threshold}")
        if self.min_radius < 0 or self.max_radius < 0:
            raise ParameterError("radii must be non-negative")
        if self.max_radius > 0 and self.min_radius > self.max_radius:
            raise ParameterError(
                f"min_radius {self.min_radius} exceeds max_radius {self.max_radius}"
            )

    @property
    def effective_dp(self):
        return max(float(self.dp), 1.0)

    @property
    def r_min(self):
        return max(int(self.min_radius), 1)

    def r_max(self, width, height):
        if self.max_radius > 0:
            return int(self.max_radius)
        return int(math.ceil(math.hypot(width, height)))


@dataclass(frozen=True)
class CircleHit:
    cx: float
    cy: float
    radius: int
    votes: int
    support: int


@dataclass(frozen=True, eq=False)
class CenterAccumulator:
    """Vote counts over candidate centres, shape ``(aheight, awidth)``."""

    counts: np.ndarray
    dp: float = 1.0

    @property
    def awidth(self):
        return self.counts.shape[1]

    @property
    def aheight(self):
        return self.counts.shape[0]

    def cell_to_image(self, ax, ay):
        """Image coordinates of the centre of accumulator cell ``(ax, ay)``."""
        return ((ax + 0.5) * self.dp - 0.5, (ay + 0.5) * self.dp - 0.5)


def accumulate_centers(edges, grad, params):
    """Vote along both gradient directions of every edge pixel.

    Returns the accumulator and the ``(x, y)`` coordinates of all edge pixels
    as an ``(n, 2)`` integer array (the "nonzero list" used for radii).
    A point at image position ``p`` falls in cell ``floor((p + 0.5) / dp)``.
    """
    if edges.edges.shape != grad.magnitude.shape:
        raise SizeError(
            f"edge map {edges.edges.shape} and gradient {grad.magnitude.shape} differ"
        )
    h, w = edges.edges.shape
    dp = params.effective_dp
    aw, ah = int(math.ceil(w / dp)), int(math.ceil(h / dp))
    counts = np.zeros(ah * aw, dtype=np.int64)

    ys, xs = np.nonzero(edges.edges)
    nonzero = np.stack([xs, ys], axis=1).astype(np.int64)

    mag = grad.magnitude[ys, xs]
    voting = mag > 0
    vx, vy, vmag = xs[voting], ys[voting], mag[voting]
    ux = grad.gx[vy, vx] / vmag
    uy = grad.gy[vy, vx] / vmag

    r_lo, r_hi = params.r_min, params.r_max(w, h)
    if r_hi >= r_lo and len(vx):
        steps = np.arange(r_lo, r_hi + 1, dtype=np.float64)
        for sign in (1.0, -1.0):
            dist = sign * steps
            for start in range(0, len(vx), _CHUNK):
                sl = slice(start, start + _CHUNK)
                px = vx[sl, None] + dist[None, :] * ux[sl, None]
                py = vy[sl, None] + dist[None, :] * uy[sl, None]
                cx = np.floor((px + 0.5) / dp).astype(np.int64)
                cy = np.floor((py + 0.5) / dp).astype(np.int64)
                fresh = np.ones(cx.shape, dtype=bool)
                fresh[:, 1:] = (cx[:, 1:] != cx[:, :-1]) | (cy[:, 1:] != cy[:, :-1])
                ok = fresh & (cx >= 0) & (cx < aw) & (cy >= 0) & (cy < ah)
                counts += np.bincount(cy[ok] * aw + cx[ok], minlength=ah * aw)

    return CenterAccumulator(counts.reshape(ah, aw), dp), nonzero


def select_candidates(acc, params):
    """Accumulator peaks as ``(cx, cy, votes)``, strongest first.

    A peak is a cell at or above ``acc_threshold`` that beats all eight
    neighbours. For a flat plateau of equal counts that beats everything
    around it, only its first cell in (row, column) order is reported.
    """
    counts = acc.counts
    thr = params.acc_threshold
    if counts.size == 0 or counts.max(initial=0) < thr:
        return []
    footprint = np.ones((3, 3), dtype=bool)
    neigh_max = ndimage.maximum_filter(counts, footprint=footprint, mode="constant", cval=-1)
    local = (counts >= thr) & (counts == neigh_max)

    # a plateau member touching an equal cell that is not itself a local
    # maximum belongs to a plateau that some higher cell overlooks
    padded_local = np.pad(local, 1, constant_values=False)
    padded_counts = np.pad(counts, 1, constant_values=-1)
    tainted = np.zeros_like(local)
    ah, aw = counts.shape
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            nb_counts = padded_counts[1 + dy:1 + dy + ah, 1 + dx:1 + dx + aw]
            nb_local = padded_local[1 + dy:1 + dy + ah, 1 + dx:1 + dx + aw]
            tainted |= local & (nb_counts == counts) & ~nb_local

    labels, n = ndimage.label(local, structure=footprint)
    out = []
    if n:
        bad = ndimage.maximum(tainted, labels, index=np.arange(1, n + 1))
        flat = labels.ravel()
        order = np.flatnonzero(flat)
        # first raster-order cell of every label
        labs, first = np.unique(flat[order], return_index=True)
        for lab, idx in zip(labs, order[first]):
            if bad[lab - 1]:
                continue
            ay, ax = divmod(int(idx), aw)
            cx, cy = acc.cell_to_image(ax, ay)
            out.append((cx, cy, int(counts[ay, ax]), ay, ax))
    out.sort(key=lambda c: (-c[2], c[3], c[4]))
    return [(cx, cy, votes) for cx, cy, votes, _, _ in out]


def estimate_radius(center, nonzero, params, r_max=None):
    """Best-supported radius around ``center`` and its edge-pixel count.

    Distances are binned at 1 px (a pixel at distance ``d`` counts towards
    radius ``floor(d + 0.5)``) over ``[r_min, r_max]``. ``r_max`` defaults to
    ``params.max_radius``, or no upper bound when that is 0. Ties go to the
    smaller radius. Returns ``None`` when the best bin holds fewer than
    ``acc_threshold`` pixels.
    """
    nonzero = np.asarray(nonzero, dtype=np.float64).reshape(-1, 2)
    if len(nonzero) == 0:
        return None
    if r_max is None:
        r_max = params.max_radius if params.max_radius > 0 else None
    r_lo = params.r_min
    dist = np.hypot(nonzero[:, 0] - center[0], nonzero[:, 1] - center[1])
    bins = np.floor(dist + 0.5).astype(np.int64)
    keep = bins >= r_lo
    if r_max is not None:
        keep &= bins <= r_max
    bins = bins[keep]
    if len(bins) == 0:
        return None
    hist = np.bincount(bins - r_lo)
    best = int(np.argmax(hist))
    support = int(hist[best])
    if support < params.acc_threshold:
        return None
    return best + r_lo, support


def _detect(image, params):
    _require(image, Model.GRAY8)
    grad = sobel(image)
    edges = _canny_from_gradient(grad, params.canny_high)
    acc, nonzero = accumulate_centers(edges, grad, params)
    candidates = select_candidates(acc, params)
    r_max = params.r_max(image.width, image.height)
    hits = []
    for cx, cy, votes in candidates:
        if any(math.hypot(cx - h.cx, cy - h.cy) < params.min_dist for h in hits):
            continue
        found = estimate_radius((cx, cy), nonzero, params, r_max=r_max)
        if found is None:
            continue
        radius, support = found
        hits.append(CircleHit(cx, cy, radius, votes, support))
    return hits, len(candidates)


def detect_circles(image, params):
    """Full Hough-gradient detection on a Gray8 image.

    Hits come back in descending vote order; every returned centre is at
    least ``min_dist`` pixels from the others.
    """
    return _detect(image, params)[0]
