"""Overlay drawing: midpoint circles and window rectangles on RGB8 frames."""

import numpy as np

from .image import Image, Model, _require

__all__ = ["midpoint_circle", "rectangle_outline", "annotate", "CIRCLE_COLOR", "WINDOW_COLOR"]

CIRCLE_COLOR = (0, 255, 0)
WINDOW_COLOR = (255, 0, 0)


def midpoint_circle(cx, cy, r):
    """Pixel set of the integer midpoint circle algorithm, as ``{(x, y)}``."""
    points = set()
    x, y = 0, r
    d = 1 - r
    while x <= y:
        for px, py in ((x, y), (y, x), (-x, y), (-y, x), (x, -y), (y, -x), (-x, -y), (-y, -x)):
            points.add((cx + px, cy + py))
        x += 1
        if d < 0:
            d += 2 * x + 1
        else:
            y -= 1
            d += 2 * (x - y) + 1
    return points


def rectangle_outline(x, y, w, h):
    """1-px border pixels of the rectangle with top-left ``(x, y)``."""
    x1, y1 = x + w - 1, y + h - 1
    points = set()
    for px in range(x, x1 + 1):
        points.add((px, y))
        points.add((px, y1))
    for py in range(y, y1 + 1):
        points.add((x, py))
        points.add((x1, py))
    return points


def _paint(pixels, points, color):
    h, w = pixels.shape[:2]
    for px, py in points:
        if 0 <= px < w and 0 <= py < h:
            pixels[py, px] = color


def annotate(frame, circles=(), window=None):
    """Copy of ``frame`` with green circle outlines and a red window box.

    Circle centres and radii are rounded to whole pixels; anything falling
    outside the frame is clipped.
    """
    _require(frame, Model.RGB8)
    pixels = np.array(frame.data)
    for hit in circles:
        cx = int(np.floor(hit.cx + 0.5))
        cy = int(np.floor(hit.cy + 0.5))
        r = int(np.floor(hit.radius + 0.5))
        _paint(pixels, midpoint_circle(cx, cy, r), CIRCLE_COLOR)
    if window is not None:
        _paint(pixels, rectangle_outline(window.x, window.y, window.w, window.h), WINDOW_COLOR)
    return Image(Model.RGB8, pixels)
