"""Pixel buffers, colour conversion, Gaussian blur and binary PGM/PPM I/O.

Images are immutable: the backing array is made read-only on construction and
every operation returns a new :class:`Image`.

Memory layout is row-major ``(height, width)`` for Gray8 and
``(height, width, 3)`` for RGB8/HSV. RGB8 channels are stored in R, G, B
order; HSV stores hue in degrees ``[0, 360)`` and S, V in ``[0, 1]``.
"""

import enum
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundsError,
    InvalidModelError,
    MalformedHeaderError,
    ParameterError,
    SizeError,
    TruncatedDataError,
    UnsupportedFormatError,
    UnsupportedMaxvalError,
)

__all__ = [
    "Model",
    "Image",
    "Roi",
    "load_pnm",
    "save_pnm",
    "encode_pnm",
    "decode_pnm",
    "to_grayscale",
    "rgb_to_hsv",
    "hsv_to_rgb",
    "gaussian_kernel",
    "gaussian_blur",
    "round_half_up",
]


class Model(enum.Enum):
    GRAY8 = "gray8"
    RGB8 = "rgb8"
    HSV = "hsv"

    @property
    def channels(self):
        return 1 if self is Model.GRAY8 else 3


@dataclass(frozen=True, eq=False)
class Image:
    """A width x height pixel buffer in one of the three pixel models."""

    model: Model
    data: np.ndarray

    def __post_init__(self):
        data = np.asarray(self.data)
        if self.model is Model.GRAY8:
            if data.ndim != 2:
                raise SizeError(f"Gray8 data must be 2-D, got shape {data.shape}")
        elif data.ndim != 3 or data.shape[2] != 3:
            raise SizeError(f"{self.model.name} data must be (h, w, 3), got {data.shape}")
        if data.shape[0] < 1 or data.shape[1] < 1:
            raise SizeError(f"image must be at least 1x1, got {data.shape[1]}x{data.shape[0]}")

        if self.model is Model.HSV:
            data = np.array(data, dtype=np.float64)
        else:
            if data.dtype != np.uint8:
                if np.any(data < 0) or np.any(data > 255):
                    raise ParameterError("8-bit samples must lie in [0, 255]")
                data = data.astype(np.uint8)
            else:
                data = data.copy()
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    @classmethod
    def gray(cls, data):
        return cls(Model.GRAY8, data)

    @classmethod
    def rgb(cls, data):
        return cls(Model.RGB8, data)

    @classmethod
    def hsv(cls, data):
        return cls(Model.HSV, data)

    @property
    def width(self):
        return self.data.shape[1]

    @property
    def height(self):
        return self.data.shape[0]

    @property
    def channels(self):
        return self.model.channels

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.model is other.model and np.array_equal(self.data, other.data)

    def __repr__(self):
        return f"Image({self.model.name}, {self.width}x{self.height})"

    def crop(self, roi):
        roi.check_inside(self.width, self.height)
        return Image(self.model, self.data[roi.y:roi.y + roi.h, roi.x:roi.x + roi.w])


@dataclass(frozen=True)
class Roi:
    """Axis-aligned rectangle; ``x, y`` is the top-left pixel."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 1 or self.h < 1:
            raise ParameterError(f"ROI extent must be >= 1, got {self.w}x{self.h}")

    def check_inside(self, width, height):
        if self.x < 0 or self.y < 0 or self.x + self.w > width or self.y + self.h > height:
            raise BoundsError(f"{self} not inside {width}x{height} image")

    @property
    def center(self):
        return (self.x + (self.w - 1) / 2.0, self.y + (self.h - 1) / 2.0)


def _require(image, model):
    if image.model is not model:
        raise InvalidModelError(f"expected {model.name} image, got {image.model.name}")


def round_half_up(values):
    """Round to nearest integer with .5 going up (towards +inf)."""
    return np.floor(np.asarray(values, dtype=np.float64) + 0.5)


# ---------------------------------------------------------------- PNM I/O

_WHITESPACE = b" \t\n\r\v\f"


def _next_token(buf, pos, allow_comments):
    n = len(buf)
    while pos < n:
        if buf[pos] in _WHITESPACE:
            pos += 1
        elif buf[pos] == ord("#") and allow_comments:
            while pos < n and buf[pos] not in b"\r\n":
                pos += 1
        else:
            break
    start = pos
    while pos < n and buf[pos] not in _WHITESPACE and buf[pos] != ord("#"):
        pos += 1
    if start == pos:
        raise MalformedHeaderError("unexpected end of header", start)
    return buf[start:pos], start, pos


def decode_pnm(buf):
    """Decode a binary P5/P6 byte string into an :class:`Image`."""
    buf = bytes(buf)
    if len(buf) < 2:
        raise MalformedHeaderError("file too short for a magic number", len(buf))
    magic = bytes(buf[:2])
    if magic == b"P5":
        model = Model.GRAY8
    elif magic == b"P6":
        model = Model.RGB8
    else:
        raise UnsupportedFormatError(f"unsupported magic {magic!r}; only P5 and P6 are read", 0)
    pos = 2
    if pos >= len(buf) or buf[pos] not in _WHITESPACE:
        raise MalformedHeaderError("missing whitespace after magic", pos)

    fields = []
    for name in ("width", "height", "maxval"):
        token, start, pos = _next_token(buf, pos, allow_comments=True)
        if not token.isdigit():
            raise MalformedHeaderError(f"{name} is not a decimal integer: {token!r}", start)
        fields.append((int(token), start))
    (width, wpos), (height, hpos), (maxval, mpos) = fields
    if width < 1:
        raise MalformedHeaderError("width must be >= 1", wpos)
    if height < 1:
        raise MalformedHeaderError("height must be >= 1", hpos)
    if maxval != 255:
        raise UnsupportedMaxvalError(f"maxval {maxval} unsupported; only 255", mpos)
    if pos >= len(buf) or buf[pos] not in _WHITESPACE:
        raise MalformedHeaderError("missing single whitespace after maxval", pos)
    pos += 1

    expected = width * height * model.channels
    available = len(buf) - pos
    if available < expected:
        raise TruncatedDataError(
            f"expected {expected} data bytes, found {available}", pos + available
        )
    pixels = np.frombuffer(bytes(buf[pos:pos + expected]), dtype=np.uint8)
    shape = (height, width) if model is Model.GRAY8 else (height, width, 3)
    return Image(model, pixels.reshape(shape))


def encode_pnm(image):
    """Encode a Gray8/RGB8 image as binary PGM/PPM bytes."""
    if image.model is Model.GRAY8:
        magic = b"P5"
    elif image.model is Model.RGB8:
        magic = b"P6"
    else:
        raise InvalidModelError("only Gray8 and RGB8 images can be written as PNM")
    header = b"%s\n%d %d\n255\n" % (magic, image.width, image.height)
    return header + np.ascontiguousarray(image.data, dtype=np.uint8).tobytes()


def load_pnm(path):
    with open(path, "rb") as fh:
        return decode_pnm(fh.read())


def save_pnm(image, path):
    payload = encode_pnm(image)
    with open(os.fspath(path), "wb") as fh:
        fh.write(payload)


# -------------------------------------------------------- colour conversion

def to_grayscale(image):
    """BT.601 luma: ``round(0.299 R + 0.587 G + 0.114 B)``.

    Computed in integer arithmetic (weights x 1000) so halves round up
    exactly instead of depending on float representation.
    """
    _require(image, Model.RGB8)
    rgb = image.data.astype(np.int32)
    acc = 299 * rgb[..., 0] + 587 * rgb[..., 1] + 114 * rgb[..., 2]
    gray = (acc + 500) // 1000
    return Image(Model.GRAY8, np.clip(gray, 0, 255).astype(np.uint8))


def rgb_to_hsv(image, roi=None):
    """Hexcone RGB -> HSV conversion, optionally restricted to ``roi``.

    When ``roi`` is given only that region is converted and the result has
    the ROI's dimensions.
    """
    _require(image, Model.RGB8)
    if roi is not None:
        image = image.crop(roi)
    rgb = image.data.astype(np.float64) / 255.0
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    cmax = rgb.max(axis=2)
    cmin = rgb.min(axis=2)
    delta = cmax - cmin

    hue = np.zeros_like(cmax)
    chroma = delta > 0
    safe = np.where(chroma, delta, 1.0)
    red = chroma & (cmax == r)
    green = chroma & ~red & (cmax == g)
    blue = chroma & ~red & ~green
    hue = np.where(red, 60.0 * np.mod((g - b) / safe, 6.0), hue)
    hue = np.where(green, 60.0 * ((b - r) / safe + 2.0), hue)
    hue = np.where(blue, 60.0 * ((r - g) / safe + 4.0), hue)
    hue = np.where(hue >= 360.0, hue - 360.0, hue)

    sat = np.where(cmax > 0, delta / np.where(cmax > 0, cmax, 1.0), 0.0)
    return Image(Model.HSV, np.stack([hue, sat, cmax], axis=2))


def hsv_to_rgb(image):
    """Inverse hexcone conversion; channels rounded half-up to 8 bits."""
    _require(image, Model.HSV)
    h, s, v = (image.data[..., i] for i in range(3))
    sector = np.floor(np.mod(h, 360.0) / 60.0)
    f = np.mod(h, 360.0) / 60.0 - sector
    p = v * (1.0 - s)
    q = v * (1.0 - s * f)
    t = v * (1.0 - s * (1.0 - f))
    sector = sector.astype(int) % 6
    table_r = np.choose(sector, [v, q, p, p, t, v])
    table_g = np.choose(sector, [t, v, v, q, p, p])
    table_b = np.choose(sector, [p, p, t, v, v, q])
    rgb = np.stack([table_r, table_g, table_b], axis=2) * 255.0
    return Image(Model.RGB8, np.clip(round_half_up(rgb), 0, 255).astype(np.uint8))


# ------------------------------------------------------------------- blur

def gaussian_kernel(sigma):
    """Normalised 1-D Gaussian taps over ``[-ceil(3 sigma), ceil(3 sigma)]``."""
    if not sigma > 0:
        raise ParameterError(f"sigma must be > 0, got {sigma}")
    radius = int(math.ceil(3.0 * sigma))
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    k = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return k / k.sum()


def _convolve_axis(plane, kernel, axis):
    radius = len(kernel) // 2
    pad = [(0, 0), (0, 0)]
    pad[axis] = (radius, radius)
    padded = np.pad(plane, pad, mode="edge")
    out = np.zeros_like(plane)
    n = plane.shape[axis]
    for i, weight in enumerate(kernel):
        if axis == 0:
            out += weight * padded[i:i + n, :]
        else:
            out += weight * padded[:, i:i + n]
    return out


def gaussian_blur(image, sigma):
    """Separable Gaussian blur with replicated borders."""
    _require(image, Model.GRAY8)
    kernel = gaussian_kernel(sigma)
    plane = image.data.astype(np.float64)
    plane = _convolve_axis(plane, kernel, axis=1)
    plane = _convolve_axis(plane, kernel, axis=0)
    return Image(Model.GRAY8, np.clip(round_half_up(plane), 0, 255).astype(np.uint8))
