"""Numpy fallback for the compiled kernels in ``_kernels.pyx``.

Same signatures and bit-identical results; the arithmetic is written in the
same order as the C loops so float inputs round identically.
"""

import numpy as np


def _check_shape(h, w):
    if h < 3 or w < 3:
        raise ValueError(f"plane must be at least 3x3, got {h}x{w}")


def _window(p):
    # a b c / d . f / g h i
    return (p[:-2, :-2], p[:-2, 1:-1], p[:-2, 2:],
            p[1:-1, :-2], p[1:-1, 2:],
            p[2:, :-2], p[2:, 1:-1], p[2:, 2:])


def scharr_responses(plane):
    plane = np.ascontiguousarray(plane, dtype=np.float64)
    _check_shape(*plane.shape)
    a, b, c, d, f, g, h, i = _window(plane)
    gx = 3.0 * (c - a) + 10.0 * (f - d) + 3.0 * (i - g)
    gy = 3.0 * (g - a) + 10.0 * (h - b) + 3.0 * (i - c)
    return gx, gy


def squared_magnitude(plane):
    gx, gy = scharr_responses(plane)
    return gx * gx + gy * gy


def rgb_squared_magnitude(rgb):
    rgb = np.asarray(rgb)
    if rgb.ndim != 3 or rgb.shape[2] != 3:
        raise ValueError("expected 3 colour channels")
    _check_shape(rgb.shape[0], rgb.shape[1])
    ch = rgb.astype(np.int64)
    lum = 6 * ch[..., 0] + 63 * ch[..., 1] + 27 * ch[..., 2]
    a, b, c, d, f, g, h, i = _window(lum)
    gx = 3 * (c - a) + 10 * (f - d) + 3 * (i - g)
    gy = 3 * (g - a) + 10 * (h - b) + 3 * (i - c)
    return (gx * gx + gy * gy).astype(np.float64)
