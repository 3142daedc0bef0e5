"""Colour models for tracking: hue histograms, back-projection, BGR counts."""

from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .image import Model, _require

__all__ = [
    "HistParams",
    "HueHistogram",
    "ProbabilityMap",
    "ChannelHistogram",
    "hue_bins",
    "saturation_value_mask",
    "compute_hue_histogram",
    "back_project",
    "compute_channel_histograms",
]


@dataclass(frozen=True)
class HistParams:
    bins: int = 16
    smin: float = 0.125
    vmin: float = 0.125

    def __post_init__(self):
        if int(self.bins) != self.bins or self.bins < 1:
            raise ParameterError(f"bins must be an integer >= 1, got {self.bins}")
        for name in ("smin", "vmin"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ParameterError(f"{name} must lie in [0, 1], got {value}")


@dataclass(frozen=True, eq=False)
class HueHistogram:
    """Max-normalised hue histogram plus the S/V mask it was learned with."""

    weights: np.ndarray
    smin: float = 0.125
    vmin: float = 0.125

    @property
    def bins(self):
        return len(self.weights)


@dataclass(frozen=True, eq=False)
class ProbabilityMap:
    p: np.ndarray

    @property
    def width(self):
        return self.p.shape[1]

    @property
    def height(self):
        return self.p.shape[0]


@dataclass(frozen=True, eq=False)
class ChannelHistogram:
    channel: str
    counts: np.ndarray = field(repr=False)


def hue_bins(hue, bins):
    """Bin index ``floor(H / 360 * bins)``, with H = 360 folded into the last bin."""
    idx = np.floor(np.asarray(hue, dtype=np.float64) / 360.0 * bins).astype(np.int64)
    return np.clip(idx, 0, bins - 1)


def saturation_value_mask(image, smin, vmin):
    return (image.data[..., 1] >= smin) & (image.data[..., 2] >= vmin)


def compute_hue_histogram(image, roi, bins=16, smin=0.125, vmin=0.125):
    """Hue histogram of the masked pixels inside ``roi``, scaled so max = 1."""
    _require(image, Model.HSV)
    HistParams(bins, smin, vmin)
    region = image.crop(roi)
    mask = saturation_value_mask(region, smin, vmin)
    idx = hue_bins(region.data[..., 0][mask], bins)
    counts = np.bincount(idx, minlength=bins).astype(np.float64)
    top = counts.max()
    weights = counts / top if top > 0 else counts
    return HueHistogram(weights, smin, vmin)


def back_project(image, hist):
    """Per-pixel lookup ``P(x, y) = h(bin(H(x, y)))``; masked pixels get 0."""
    _require(image, Model.HSV)
    idx = hue_bins(image.data[..., 0], hist.bins)
    p = np.asarray(hist.weights, dtype=np.float64)[idx]
    p[~saturation_value_mask(image, hist.smin, hist.vmin)] = 0.0
    return ProbabilityMap(p)


def compute_channel_histograms(image):
    """256-bin exact counts for each channel, returned in B, G, R order."""
    _require(image, Model.RGB8)
    out = []
    for name, ch in (("B", 2), ("G", 1), ("R", 0)):
        counts = np.bincount(image.data[..., ch].ravel(), minlength=256)
        out.append(ChannelHistogram(name, counts.astype(np.int64)))
    return out
