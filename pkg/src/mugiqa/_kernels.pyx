"""Compiled Scharr kernels.

Every function here has a numpy twin in ``_pykernels`` with the same
signature and bit-identical output; ``_backend`` picks one at import.

Windows are valid-interior only: an ``h x w`` plane yields ``(h-2) x (w-2)``
responses. Horizontal kernel rows are ``[3, 0, -3; 10, 0, -10; 3, 0, -3]``
applied as a true convolution, i.e. the response is right minus left
(bottom minus top for the vertical one).
"""

import numpy as np

from libc.stdint cimport int64_t, uint8_t


def _check_shape(Py_ssize_t h, Py_ssize_t w):
    if h < 3 or w < 3:
        raise ValueError(f"plane must be at least 3x3, got {h}x{w}")


def scharr_responses(const double[:, ::1] plane):
    cdef Py_ssize_t h = plane.shape[0]
    cdef Py_ssize_t w = plane.shape[1]
    _check_shape(h, w)
    gx = np.empty((h - 2, w - 2), dtype=np.float64)
    gy = np.empty((h - 2, w - 2), dtype=np.float64)
    cdef double[:, ::1] gxv = gx
    cdef double[:, ::1] gyv = gy
    cdef Py_ssize_t r, c
    cdef double a, b, cc, d, f, g, hh, i
    with nogil:
        for r in range(h - 2):
            for c in range(w - 2):
                a = plane[r, c]
                b = plane[r, c + 1]
                cc = plane[r, c + 2]
                d = plane[r + 1, c]
                f = plane[r + 1, c + 2]
                g = plane[r + 2, c]
                hh = plane[r + 2, c + 1]
                i = plane[r + 2, c + 2]
                gxv[r, c] = 3.0 * (cc - a) + 10.0 * (f - d) + 3.0 * (i - g)
                gyv[r, c] = 3.0 * (g - a) + 10.0 * (hh - b) + 3.0 * (i - cc)
    return gx, gy


def squared_magnitude(const double[:, ::1] plane):
    cdef Py_ssize_t h = plane.shape[0]
    cdef Py_ssize_t w = plane.shape[1]
    _check_shape(h, w)
    out = np.empty((h - 2, w - 2), dtype=np.float64)
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, c
    cdef double a, b, cc, d, f, g, hh, i, gx, gy
    with nogil:
        for r in range(h - 2):
            for c in range(w - 2):
                a = plane[r, c]
                b = plane[r, c + 1]
                cc = plane[r, c + 2]
                d = plane[r + 1, c]
                f = plane[r + 1, c + 2]
                g = plane[r + 2, c]
                hh = plane[r + 2, c + 1]
                i = plane[r + 2, c + 2]
                gx = 3.0 * (cc - a) + 10.0 * (f - d) + 3.0 * (i - g)
                gy = 3.0 * (g - a) + 10.0 * (hh - b) + 3.0 * (i - cc)
                ov[r, c] = gx * gx + gy * gy
    return out


def rgb_squared_magnitude(const uint8_t[:, :, ::1] rgb):
    """Squared Scharr magnitude of the integer luminance 6R + 63G + 27B.

    Runs entirely in int64, so the result is exact; values are returned as
    float64 (they stay below 2**53).
    """
    cdef Py_ssize_t h = rgb.shape[0]
    cdef Py_ssize_t w = rgb.shape[1]
    if rgb.shape[2] != 3:
        raise ValueError("expected 3 colour channels")
    _check_shape(h, w)
    lum = np.empty((h, w), dtype=np.int64)
    out = np.empty((h - 2, w - 2), dtype=np.float64)
    cdef int64_t[:, ::1] lv = lum
    cdef double[:, ::1] ov = out
    cdef Py_ssize_t r, c
    cdef int64_t a, b, cc, d, f, g, hh, i, gx, gy
    with nogil:
        for r in range(h):
            for c in range(w):
                lv[r, c] = (6 * <int64_t>rgb[r, c, 0]
                            + 63 * <int64_t>rgb[r, c, 1]
                            + 27 * <int64_t>rgb[r, c, 2])
        for r in range(h - 2):
            for c in range(w - 2):
                a = lv[r, c]
                b = lv[r, c + 1]
                cc = lv[r, c + 2]
                d = lv[r + 1, c]
                f = lv[r + 1, c + 2]
                g = lv[r + 2, c]
                hh = lv[r + 2, c + 1]
                i = lv[r + 2, c + 2]
                gx = 3 * (cc - a) + 10 * (f - d) + 3 * (i - g)
                gy = 3 * (g - a) + 10 * (hh - b) + 3 * (i - cc)
                ov[r, c] = <double>(gx * gx + gy * gy)
    return out
