"""Synthetic wheel scenes with known ground truth.

A frame is a light-grey background with a dark tyre annulus, a mid-grey rim
and a saturated hub disk. Optional tread lugs (small bright disks on the
tyre) add the kind of circular texture that produces false Hough hits.
Per-frame position, scale and illumination come from SynthSpec profiles; all
randomness comes from one generator seeded by ``rng_seed``.
"""

import colorsys
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .errors import ParameterError
from .image import Image, Model, round_half_up

__all__ = ["WheelSpec", "SynthSpec", "render_wheel", "synth_sequence", "linear_profile"]


@dataclass(frozen=True)
class WheelSpec:
    outer_radius: float = 107.0
    hub_radius: float = 17.0
    hub_hue: float = 120.0
    tyre_value: float = 0.08
    # tyre inner edge as a fraction of outer_radius
    rim_ratio: float = 0.65
    rim_value: float = 0.35
    hub_saturation: float = 0.9
    hub_value: float = 0.9
    background_value: float = 0.75
    lugs: int = 0
    lug_radius: float = 5.0
    lug_value: float = 0.55

    def __post_init__(self):
        if not 0 < self.hub_radius < self.outer_radius:
            raise ParameterError("need 0 < hub_radius < outer_radius")
        if not self.hub_radius < self.rim_ratio * self.outer_radius:
            raise ParameterError("hub must fit inside the tyre's inner edge")
        if not 0 <= self.hub_hue < 360:
            raise ParameterError(f"hub_hue must lie in [0, 360), got {self.hub_hue}")
        for name in ("tyre_value", "rim_value", "hub_saturation", "hub_value",
                     "background_value", "lug_value"):
            if not 0 <= getattr(self, name) <= 1:
                raise ParameterError(f"{name} must lie in [0, 1]")
        if self.lugs < 0 or self.lug_radius <= 0:
            raise ParameterError("lugs must be >= 0 and lug_radius > 0")


@dataclass(frozen=True)
class SynthSpec:
    """Sequence description. Omitted profiles default to a centred,
    unscaled, evenly lit wheel on every frame."""

    width: int = 256
    height: int = 256
    frames: int = 1
    wheel: WheelSpec = field(default_factory=WheelSpec)
    path: tuple = None
    scale: tuple = None
    illumination: tuple = None
    noise_sigma: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        if self.width < 1 or self.height < 1 or self.frames < 1:
            raise ParameterError("width, height and frames must be >= 1")
        if self.noise_sigma < 0:
            raise ParameterError("noise_sigma must be >= 0")
        n = self.frames
        path = self.path
        if path is None:
            path = [(self.width // 2, self.height // 2)] * n
        path = tuple((float(x), float(y)) for x, y in path)
        scale = tuple(float(s) for s in (self.scale if self.scale is not None else [1.0] * n))
        illum = tuple(float(v) for v in
                      (self.illumination if self.illumination is not None else [1.0] * n))
        for name, seq in (("path", path), ("scale", scale), ("illumination", illum)):
            if len(seq) != n:
                raise ParameterError(f"{name} has {len(seq)} entries for {n} frames")
        if any(not s > 0 for s in scale) or any(not v > 0 for v in illum):
            raise ParameterError("scale and illumination must be > 0")
        object.__setattr__(self, "path", path)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "illumination", illum)

    @classmethod
    def from_dict(cls, d):
        d = dict(d)
        wheel = d.pop("wheel", {})
        unknown = set(d) - set(cls.__dataclass_fields__)
        if unknown:
            raise ParameterError(f"unknown synth spec fields: {sorted(unknown)}")
        try:
            return cls(wheel=WheelSpec(**wheel), **d)
        except TypeError as exc:
            raise ParameterError(str(exc)) from None

    def to_dict(self):
        d = asdict(self)
        d["path"] = [list(p) for p in self.path]
        d["scale"] = list(self.scale)
        d["illumination"] = list(self.illumination)
        return d


def linear_profile(start, end, n):
    """``n`` values from ``start`` to ``end`` inclusive (tuples interpolate per item)."""
    if n == 1:
        return [start]
    out = []
    for i in range(n):
        t = i / (n - 1)
        if isinstance(start, (tuple, list)):
            out.append(tuple(a + (b - a) * t for a, b in zip(start, end)))
        else:
            out.append(start + (end - start) * t)
    return out


def _gray(v):
    return np.array([v, v, v], dtype=np.float64)


def _coverage(dist, radius):
    # approximate area coverage of a pixel by a disk edge
    return np.clip(radius - dist + 0.5, 0.0, 1.0)[..., None]


def render_wheel(width, height, center, wheel, scale=1.0, illumination=1.0):
    """Noise-free float RGB rendering in ``[0, 1]``."""
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    cx, cy = center
    dist = np.hypot(xs - cx, ys - cy)
    outer = wheel.outer_radius * scale
    inner = wheel.rim_ratio * outer
    hub = wheel.hub_radius * scale

    img = np.broadcast_to(_gray(wheel.background_value), (height, width, 3)).copy()
    img += (_gray(wheel.tyre_value) - img) * _coverage(dist, outer)
    if wheel.lugs:
        lug_r = wheel.lug_radius * scale
        ring = (inner + outer) / 2.0
        lug = _gray(wheel.lug_value)
        for k in range(wheel.lugs):
            a = 2.0 * math.pi * k / wheel.lugs
            d = np.hypot(xs - (cx + ring * math.cos(a)), ys - (cy + ring * math.sin(a)))
            img += (lug - img) * _coverage(d, lug_r)
    img += (_gray(wheel.rim_value) - img) * _coverage(dist, inner)
    hub_rgb = np.array(colorsys.hsv_to_rgb(wheel.hub_hue / 360.0, wheel.hub_saturation,
                                           wheel.hub_value))
    img += (hub_rgb - img) * _coverage(dist, hub)

    if illumination != 1.0:
        v = img.max(axis=2, keepdims=True)
        lit = np.minimum(v * illumination, 1.0)
        img = img * np.where(v > 0, lit / np.where(v > 0, v, 1.0), 0.0)
    return img


def synth_sequence(spec):
    """Render every frame of ``spec``.

    Returns ``(frames, truth)`` where ``truth`` holds one dict per frame with
    the true centre, radii, scale and illumination.
    """
    rng = np.random.default_rng(spec.rng_seed)
    frames, truth = [], []
    w = spec.wheel
    for i in range(spec.frames):
        rgb = render_wheel(spec.width, spec.height, spec.path[i], w,
                           spec.scale[i], spec.illumination[i]) * 255.0
        if spec.noise_sigma > 0:
            rgb = rgb + rng.normal(0.0, spec.noise_sigma, size=rgb.shape)
        pixels = np.clip(round_half_up(rgb), 0, 255).astype(np.uint8)
        frames.append(Image(Model.RGB8, pixels))
        truth.append({
            "frame": i,
            "cx": spec.path[i][0],
            "cy": spec.path[i][1],
            "outer_radius": w.outer_radius * spec.scale[i],
            "hub_radius": w.hub_radius * spec.scale[i],
            "scale": spec.scale[i],
            "illumination": spec.illumination[i],
        })
    return frames, truth
