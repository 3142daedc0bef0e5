"""Scene builders and slow brute-force oracles shared by the tests.

The oracles are deliberately written as plain Python loops so they share no
code path with the vectorised implementations they check.
"""

import math
from collections import deque

import numpy as np

from wheeltrack import Image


def disk_gray(width, height, cx, cy, r, fg=200, bg=60, noise=0.0, rng=None):
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    cov = np.clip(r - np.hypot(xs - cx, ys - cy) + 0.5, 0.0, 1.0)
    img = bg + (fg - bg) * cov
    if noise:
        img = img + rng.normal(0.0, noise, img.shape)
    return Image.gray(np.clip(np.floor(img + 0.5), 0, 255).astype(np.uint8))


def step_image(width, height, col, lo=0, hi=255):
    """Columns ``<= col`` are ``lo``, the rest ``hi``."""
    data = np.full((height, width), lo, dtype=np.uint8)
    data[:, col + 1:] = hi
    return Image.gray(data)


def gaussian_blob(width, height, mx, my, sx, sy):
    ys, xs = np.mgrid[0:height, 0:width].astype(np.float64)
    return np.exp(-((xs - mx) ** 2) / (2 * sx * sx) - ((ys - my) ** 2) / (2 * sy * sy))


# ------------------------------------------------------------------ oracles

def accumulator_oracle(edges, gx, gy, r_lo, r_hi, dp, aw, ah):
    """Re-walk every edge pixel's gradient line one step at a time."""
    acc = [[0] * aw for _ in range(ah)]
    h, w = edges.shape
    for y in range(h):
        for x in range(w):
            if not edges[y, x]:
                continue
            vx, vy = float(gx[y, x]), float(gy[y, x])
            mag = math.sqrt(vx * vx + vy * vy)
            if mag == 0:
                continue
            ux, uy = vx / mag, vy / mag
            for sign in (1.0, -1.0):
                prev = None
                for d in range(r_lo, r_hi + 1):
                    step = sign * d
                    px = x + step * ux
                    py = y + step * uy
                    cell = (math.floor((px + 0.5) / dp), math.floor((py + 0.5) / dp))
                    if cell != prev and 0 <= cell[0] < aw and 0 <= cell[1] < ah:
                        acc[cell[1]][cell[0]] += 1
                    prev = cell
    return np.array(acc, dtype=np.int64)


def sobel_oracle(gray):
    h, w = gray.shape
    kx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]]
    gx = np.zeros((h, w))
    gy = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            sx = sy = 0
            for j in range(3):
                for i in range(3):
                    yy = min(max(y + j - 1, 0), h - 1)
                    xx = min(max(x + i - 1, 0), w - 1)
                    v = int(gray[yy, xx])
                    sx += kx[j][i] * v
                    sy += kx[i][j] * v
            gx[y, x] = sx
            gy[y, x] = sy
    return gx, gy


def canny_oracle(gray, high, low):
    """Reference Canny with an explicit low threshold."""
    gx, gy = sobel_oracle(gray)
    h, w = gray.shape
    mag = [[math.hypot(gx[y, x], gy[y, x]) for x in range(w)] for y in range(h)]

    def m(y, x):
        return mag[y][x] if 0 <= y < h and 0 <= x < w else 0.0

    thin = [[False] * w for _ in range(h)]
    for y in range(h):
        for x in range(w):
            if mag[y][x] <= 0:
                continue
            a = math.degrees(math.atan2(gy[y, x], gx[y, x])) % 180.0
            if a < 22.5 or a >= 157.5:
                before, after = m(y, x - 1), m(y, x + 1)
            elif a < 67.5:
                before, after = m(y - 1, x - 1), m(y + 1, x + 1)
            elif a < 112.5:
                before, after = m(y - 1, x), m(y + 1, x)
            else:
                before, after = m(y - 1, x + 1), m(y + 1, x - 1)
            thin[y][x] = mag[y][x] > before and mag[y][x] >= after

    out = np.zeros((h, w), dtype=bool)
    queue = deque()
    for y in range(h):
        for x in range(w):
            if thin[y][x] and mag[y][x] >= high:
                out[y, x] = True
                queue.append((y, x))
    while queue:
        y, x = queue.popleft()
        for dy in (-1, 0, 1):
            for dx in (-1, 0, 1):
                yy, xx = y + dy, x + dx
                if (0 <= yy < h and 0 <= xx < w and not out[yy, xx]
                        and thin[yy][xx] and mag[yy][xx] >= low):
                    out[yy, xx] = True
                    queue.append((yy, xx))
    return out


def moments_oracle(p, x0, y0, w, h):
    terms = {k: [] for k in ("m00", "m10", "m01", "m20", "m02")}
    for y in range(y0, y0 + h):
        for x in range(x0, x0 + w):
            v = float(p[y, x])
            terms["m00"].append(v)
            terms["m10"].append(x * v)
            terms["m01"].append(y * v)
            terms["m20"].append(x * x * v)
            terms["m02"].append(y * y * v)
    return {k: math.fsum(v) for k, v in terms.items()}


def midpoint_oracle(cx, cy, r):
    """Closed form of the midpoint circle: y = round(sqrt(r^2 - x^2)) per column."""
    pts = set()
    x = 0
    while x * x <= r * r:
        y = math.floor(math.sqrt(r * r - x * x) + 0.5)
        if x > y:
            break
        for sx in (1, -1):
            for sy in (1, -1):
                pts.add((cx + sx * x, cy + sy * y))
                pts.add((cx + sx * y, cy + sy * x))
        x += 1
    return pts
