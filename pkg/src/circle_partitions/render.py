"""Domain-coloring PPM writer."""
from __future__ import annotations

import math
import os

import numpy as np


def _hsv_to_rgb(h: np.ndarray, v: np.ndarray) -> np.ndarray:
    """HSV with saturation 1 to RGB in [0, 1]."""
    h6 = (h % 1.0) * 6.0
    sector = np.floor(h6).astype(np.int64) % 6
    f = h6 - np.floor(h6)
    p = np.zeros_like(v)
    q = v * (1 - f)
    t = v * f
    choices = [
        (v, t, p),
        (q, v, p),
        (p, v, t),
        (p, q, v),
        (t, p, v),
        (v, p, q),
    ]
    rgb = np.zeros(v.shape + (3,))
    for s, (r, g, b) in enumerate(choices):
        mask = sector == s
        rgb[mask, 0] = r[mask]
        rgb[mask, 1] = g[mask]
        rgb[mask, 2] = b[mask]
    return rgb


def domain_colors(grid: np.ndarray) -> np.ndarray:
    """uint8 RGB image for a grid of complex logarithms; NaN pixels are black."""
    grid = np.asarray(grid, dtype=complex)
    empty = np.isnan(grid.real) | np.isnan(grid.imag)
    v = np.where(empty, 0, grid)
    # arg(exp(v)) depends only on Im v; this also avoids overflow in exp(Re v).
    hue = (np.angle(np.exp(1j * v.imag)) + math.pi) / (2 * math.pi)
    value = 1.0 - np.exp(-np.maximum(0.0, v.real) / 4.0)
    rgb = _hsv_to_rgb(hue, value)
    rgb[empty] = 0.0
    return np.clip(np.rint(rgb * 255.0), 0, 255).astype(np.uint8)


def render_domain_plot(grid: np.ndarray, path: str | os.PathLike) -> int:
    """Write a binary PPM; returns the number of bytes written."""
    pixels = domain_colors(grid)
    h, w = pixels.shape[:2]
    data = f"P6\n{w} {h}\n255\n".encode("ascii") + pixels.tobytes()
    with open(path, "wb") as fh:
        fh.write(data)
    return len(data)
