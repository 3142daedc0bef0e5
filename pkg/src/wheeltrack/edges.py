"""Sobel gradients and the Canny edge detector.

The Canny low threshold is not configurable: it is always half the high
threshold, so callers tune a single number.
"""

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ParameterError, SizeError
from .image import Image, Model, _require

__all__ = ["GradientField", "EdgeMap", "sobel", "canny", "non_max_suppression",
           "hysteresis", "quantize_direction"]


@dataclass(frozen=True, eq=False)
class GradientField:
    """Per-pixel Sobel derivatives (``gx``, ``gy``) plus magnitude/direction.

    Coordinates are image coordinates with y pointing down, so a positive
    ``gy`` means intensity increases towards the bottom row.
    """

    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    direction: np.ndarray

    @property
    def width(self):
        return self.gx.shape[1]

    @property
    def height(self):
        return self.gx.shape[0]

    @classmethod
    def from_derivatives(cls, gx, gy):
        gx = np.asarray(gx, dtype=np.float64)
        gy = np.asarray(gy, dtype=np.float64)
        if gx.shape != gy.shape or gx.ndim != 2:
            raise SizeError(f"gx {gx.shape} and gy {gy.shape} must be equal 2-D shapes")
        return cls(gx, gy, np.sqrt(gx * gx + gy * gy), np.arctan2(gy, gx))


@dataclass(frozen=True, eq=False)
class EdgeMap:
    edges: np.ndarray

    @property
    def width(self):
        return self.edges.shape[1]

    @property
    def height(self):
        return self.edges.shape[0]

    def count(self):
        return int(np.count_nonzero(self.edges))

    def to_image(self):
        """Edges as a 0/255 Gray8 image, for dumping to PGM."""
        return Image(Model.GRAY8, np.where(self.edges, 255, 0).astype(np.uint8))


def sobel(image):
    """3x3 Sobel derivatives with replicated borders."""
    _require(image, Model.GRAY8)
    h, w = image.height, image.width
    if h < 3 or w < 3:
        raise SizeError(f"sobel needs at least a 3x3 image, got {w}x{h}")
    p = np.pad(image.data.astype(np.int32), 1, mode="edge")
    left, right = p[:, :w], p[:, 2:]
    dx = right - left
    gx = dx[:h] + 2 * dx[1:h + 1] + dx[2:]
    top, bottom = p[:h], p[2:]
    dy = bottom - top
    gy = dy[:, :w] + 2 * dy[:, 1:w + 1] + dy[:, 2:]
    return GradientField.from_derivatives(gx, gy)


def quantize_direction(direction):
    """Map gradient angles to 0, 1, 2, 3 for 0, 45, 90 and 135 degrees."""
    deg = np.mod(np.degrees(direction), 180.0)
    bins = np.full(deg.shape, 0, dtype=np.int8)
    bins[(deg >= 22.5) & (deg < 67.5)] = 1
    bins[(deg >= 67.5) & (deg < 112.5)] = 2
    bins[(deg >= 112.5) & (deg < 157.5)] = 3
    return bins


# (dy, dx) of the neighbour that precedes the pixel in raster order, per bin;
# the following neighbour is the mirror offset.
_EARLIER = {0: (0, -1), 1: (-1, -1), 2: (-1, 0), 3: (-1, 1)}


def non_max_suppression(grad):
    """Boolean mask of pixels that are maxima along their gradient direction.

    A pixel must beat the neighbour earlier in raster order strictly and the
    later neighbour non-strictly, so a two-pixel plateau keeps only its first
    pixel. Neighbours outside the image count as zero magnitude.
    """
    mag = grad.magnitude
    h, w = mag.shape
    padded = np.pad(mag, 1, mode="constant")
    bins = quantize_direction(grad.direction)
    keep = np.zeros((h, w), dtype=bool)
    for b, (dy, dx) in _EARLIER.items():
        before = padded[1 + dy:1 + dy + h, 1 + dx:1 + dx + w]
        after = padded[1 - dy:1 - dy + h, 1 - dx:1 - dx + w]
        keep |= (bins == b) & (mag > before) & (mag >= after)
    return keep & (mag > 0)


def hysteresis(mag, thinned, low, high):
    """Keep thinned pixels >= ``low`` that are 8-connected to one >= ``high``."""
    weak = thinned & (mag >= low)
    strong = weak & (mag >= high)
    labels, n = ndimage.label(weak, structure=np.ones((3, 3), dtype=bool))
    if n == 0:
        return np.zeros_like(weak)
    seeded = np.zeros(n + 1, dtype=bool)
    seeded[np.unique(labels[strong])] = True
    seeded[0] = False
    return seeded[labels]


def _canny_from_gradient(grad, high_threshold):
    if not high_threshold > 0:
        raise ParameterError(f"canny high threshold must be > 0, got {high_threshold}")
    thinned = non_max_suppression(grad)
    return EdgeMap(hysteresis(grad.magnitude, thinned, high_threshold / 2.0, high_threshold))


def canny(image, high_threshold):
    """Canny edges with ``low = high_threshold / 2``."""
    if not high_threshold > 0:
        raise ParameterError(f"canny high threshold must be > 0, got {high_threshold}")
    return _canny_from_gradient(sobel(image), high_threshold)
