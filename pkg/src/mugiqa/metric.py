"""NUG, MUG and MUG+ scores from the unique gradient magnitudes of an image.

Pipeline: luminance -> 3x3 Scharr responses (valid interior) -> gradient
magnitude -> sorted distinct magnitudes (the spectrum) -> scores.

Luminance is ``0.06 R + 0.63 G + 0.27 B``. For 8-bit input this lies on a
lattice of hundredths, so the gradients are computed on the integer plane
``6 R + 63 G + 27 B`` and deduplicated on the exact squared magnitude; the
reported magnitudes are ``sqrt(gx**2 + gy**2) / 100``. Floating luminance
that is not on an integer or hundredths lattice is used as given.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _backend
from .errors import DegenerateSpectrum, ImageTooSmall, InvalidImage

#: Number of spectrum positions examined by MUG+ (indices nug/2 ... nug/(M+1)).
M = 19

LUMA_WEIGHTS = (6, 63, 27)
LUMA_SCALE = 100

_LATTICE_TOL = 1e-6


def _check_size(h, w):
    if h < 3 or w < 3:
        raise ImageTooSmall(f"image must be at least 3x3, got {w}x{h} (width x height)")


def _as_array(img):
    arr = np.asarray(img)
    if arr.ndim == 3 and arr.shape[2] == 4:
        arr = arr[..., :3]
    if arr.ndim not in (2, 3) or (arr.ndim == 3 and arr.shape[2] != 3):
        raise InvalidImage(f"expected an HxW luminance or HxWx3 RGB array, got shape {arr.shape}")
    if arr.dtype == np.bool_:
        arr = arr.astype(np.uint8) * 255
    if not (np.issubdtype(arr.dtype, np.integer) or np.issubdtype(arr.dtype, np.floating)):
        raise InvalidImage(f"unsupported pixel dtype {arr.dtype}")
    if arr.size and arr.dtype != np.uint8:
        if not np.all(np.isfinite(arr)):
            raise InvalidImage("image contains non-finite values")
        lo, hi = arr.min(), arr.max()
        if lo < 0 or hi > 255:
            raise InvalidImage(f"pixel values must lie in [0, 255], got [{lo}, {hi}]")
    return arr


def rgb_to_luminance(img):
    """Luminance plane ``0.06 R + 0.63 G + 0.27 B`` as float64.

    A 2-D array is taken to be luminance already and returned unchanged
    (as float64). No rounding is applied; note the weights sum to 0.96.
    """
    arr = _as_array(img)
    if arr.ndim == 2:
        return arr.astype(np.float64)
    if np.issubdtype(arr.dtype, np.integer):
        ch = arr.astype(np.int64)
        lattice = LUMA_WEIGHTS[0] * ch[..., 0] + LUMA_WEIGHTS[1] * ch[..., 1] + LUMA_WEIGHTS[2] * ch[..., 2]
        return lattice / LUMA_SCALE
    ch = arr.astype(np.float64)
    return (LUMA_WEIGHTS[0] * ch[..., 0] + LUMA_WEIGHTS[1] * ch[..., 1] + LUMA_WEIGHTS[2] * ch[..., 2]) / LUMA_SCALE


def _lattice(lum):
    """Return ``(plane, scale)`` with ``lum == plane / scale`` and integral plane when possible."""
    lum = np.asarray(lum, dtype=np.float64)
    if np.array_equal(lum, np.floor(lum)):
        return np.ascontiguousarray(lum), 1
    scaled = lum * LUMA_SCALE
    snapped = np.rint(scaled)
    if np.max(np.abs(scaled - snapped)) <= _LATTICE_TOL:
        return np.ascontiguousarray(snapped), LUMA_SCALE
    return np.ascontiguousarray(lum), 1


@dataclass(frozen=True)
class GradientField:
    """Scharr responses over the valid interior of a luminance plane.

    ``gx`` and ``gy`` are in units of ``1 / scale`` luminance levels so that
    they stay exact for lattice inputs; ``magnitude`` is in luminance units.
    """

    gx: np.ndarray
    gy: np.ndarray
    scale: int = 1

    @property
    def width(self):
        return self.gx.shape[1]

    @property
    def height(self):
        return self.gx.shape[0]

    @cached_property
    def squared(self):
        return self.gx * self.gx + self.gy * self.gy

    @cached_property
    def magnitude(self):
        mag = np.sqrt(self.squared)
        return mag / self.scale if self.scale != 1 else mag


def scharr_gradients(lum, *, backend=None):
    lum = _as_array(lum)
    if lum.ndim != 2:
        lum = rgb_to_luminance(lum)
    _check_size(*lum.shape)
    plane, scale = _lattice(lum)
    gx, gy = _backend.get_kernels(backend).scharr_responses(plane)
    return GradientField(gx, gy, scale)


@dataclass(frozen=True, eq=False)
class UniqueGradientSpectrum:
    """Distinct gradient magnitudes of an image, strictly ascending."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 1 or values.size == 0:
            raise ValueError("spectrum needs a non-empty 1-D array of magnitudes")
        if not np.all(np.isfinite(values)) or values[0] < 0:
            raise ValueError("spectrum values must be finite and non-negative")
        if np.any(np.diff(values) <= 0):
            raise ValueError("spectrum values must be strictly ascending")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def nug(self):
        return int(self.values.size)

    def __len__(self):
        return self.nug

    def __eq__(self, other):
        if not isinstance(other, UniqueGradientSpectrum):
            return NotImplemented
        return np.array_equal(self.values, other.values)


def _spectrum_from_squared(squared, scale):
    uniq = np.sqrt(np.unique(squared))
    if scale != 1:
        uniq /= scale
    return UniqueGradientSpectrum(uniq)


def unique_gradient_spectrum(field):
    return _spectrum_from_squared(field.squared, field.scale)


def normalize_spectrum(spec):
    """Divide the spectrum by the square root of its sample standard deviation."""
    if spec.nug < 2:
        raise DegenerateSpectrum("standard deviation needs at least two distinct magnitudes")
    values = spec.values
    return values / np.sqrt(np.std(values, ddof=1))


def median_indices(nug, m=M):
    """1-based spectrum positions ``ceil(nug / i)`` for ``i = 2 .. m + 1``.

    ``i = 2`` is the median position. Ceiling division keeps every index
    at least 1.
    """
    return [-(-nug // i) for i in range(2, m + 2)]


def mug_score(spec):
    """Median of the normalised spectrum divided by NUG; 0 for a single-value spectrum."""
    nug = spec.nug
    if nug == 1:
        return 0.0
    normalized = normalize_spectrum(spec)
    return float(normalized[median_indices(nug, 1)[0] - 1] / nug)


def mug_plus_score(spec):
    """Return ``(mug_plus, n_available)``.

    ``n_available`` counts the distinct positions among ``ceil(nug / i)``,
    ``i = 2 .. M + 1``; MUG is divided by ``M - n_available + 1``.
    """
    n_available = available_count(spec.nug)
    return mug_score(spec) / (M - n_available + 1), n_available


def available_count(nug):
    return len(set(median_indices(nug)))


@dataclass(frozen=True)
class MetricResult:
    nug: int
    mug: float
    mug_plus: float
    n_available: int

    @property
    def m(self):
        return M

    @property
    def divisor(self):
        return M - self.n_available + 1

    def as_dict(self):
        return {"nug": self.nug, "mug": self.mug, "mug_plus": self.mug_plus, "n_available": self.n_available}


def image_spectrum(img, *, backend=None):
    """Unique gradient spectrum of an RGB or luminance image."""
    arr = _as_array(img)
    _check_size(arr.shape[0], arr.shape[1])
    kernels = _backend.get_kernels(backend)
    if arr.ndim == 3 and np.issubdtype(arr.dtype, np.integer):
        squared = kernels.rgb_squared_magnitude(np.ascontiguousarray(arr, dtype=np.uint8))
        return _spectrum_from_squared(squared, LUMA_SCALE)
    plane, scale = _lattice(rgb_to_luminance(arr))
    return _spectrum_from_squared(kernels.squared_magnitude(plane), scale)


def score_spectrum(spec):
    mug = mug_score(spec)
    n_available = available_count(spec.nug)
    return MetricResult(nug=spec.nug, mug=mug, mug_plus=mug / (M - n_available + 1), n_available=n_available)


def score_image(img, *, backend=None):
    """Compute NUG, MUG and MUG+ for one image.

    ``img`` is an ``HxWx3`` RGB array (an alpha channel is ignored) or an
    ``HxW`` luminance array, values in [0, 255]. Higher MUG / MUG+ means
    stronger blocking, i.e. worse quality; NUG moves the other way.
    """
    return score_spectrum(image_spectrum(img, backend=backend))
