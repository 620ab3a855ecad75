"""Image decoding/encoding, border cropping and synthetic fixtures.

Images are plain numpy arrays: ``HxWx3`` uint8 for RGB. Grayscale files are
decoded with the gray level replicated into all three channels.
"""

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import CorruptStream, CropTooLarge, InvalidGeometry, QualityOutOfRange, UnsupportedFormat

# Pillow reports binary PGM as "PPM"
_PIL_FORMATS = {"JPEG": "JPEG", "PNG": "PNG", "BMP": "BMP", "PPM": "PGM"}
_SAVE_FORMATS = {"JPEG": "JPEG", "PNG": "PNG", "BMP": "BMP", "PGM": "PPM"}
_SUFFIXES = {"JPEG": ".jpg", "PNG": ".png", "BMP": ".bmp", "PGM": ".pgm"}


@dataclass(frozen=True)
class EncodedImage:
    data: bytes
    format: str

    @property
    def suffix(self):
        return _SUFFIXES[self.format]

    def save(self, path):
        Path(path).write_bytes(self.data)


def decode(data):
    """Decode JPEG, PNG, BMP or binary PGM bytes to an ``HxWx3`` uint8 array."""
    if isinstance(data, EncodedImage):
        data = data.data
    try:
        im = Image.open(io.BytesIO(data))
    except UnidentifiedImageError as exc:
        raise UnsupportedFormat("not a recognised image container") from exc
    fmt = _PIL_FORMATS.get(im.format)
    if fmt is None:
        raise UnsupportedFormat(f"unsupported container {im.format}")
    if fmt == "PGM" and im.mode != "L":
        raise UnsupportedFormat(f"only 8-bit binary PGM is supported (mode {im.mode})")
    if im.mode in ("I", "I;16", "I;16B", "F"):
        raise UnsupportedFormat(f"unsupported bit depth (mode {im.mode})")
    try:
        im.load()
    except (OSError, SyntaxError, ValueError) as exc:
        raise CorruptStream(str(exc)) from exc
    if im.mode == "L":
        gray = np.asarray(im, dtype=np.uint8)
        return np.repeat(gray[:, :, None], 3, axis=2)
    if im.mode != "RGB":
        im = im.convert("RGB")
    return np.array(im, dtype=np.uint8)


def read_image(path):
    return decode(Path(path).read_bytes())


def _to_pil(img):
    arr = np.asarray(img)
    if arr.dtype != np.uint8:
        raise ValueError(f"expected uint8 pixels, got {arr.dtype}")
    if arr.ndim == 2:
        return Image.fromarray(arr, mode="L")
    if arr.ndim == 3 and arr.shape[2] == 3:
        return Image.fromarray(np.ascontiguousarray(arr), mode="RGB")
    raise ValueError(f"expected HxW or HxWx3 array, got shape {arr.shape}")


def encode(img, fmt="PNG"):
    """Losslessly encode to PNG, BMP or PGM (PGM needs a gray image)."""
    fmt = fmt.upper()
    if fmt == "JPEG":
        return encode_jpeg(img, 75)
    if fmt not in _SAVE_FORMATS:
        raise UnsupportedFormat(f"cannot encode {fmt}")
    pil = _to_pil(img)
    if fmt == "PGM":
        arr = np.asarray(img)
        if arr.ndim == 3:
            if not (np.array_equal(arr[..., 0], arr[..., 1]) and np.array_equal(arr[..., 0], arr[..., 2])):
                raise ValueError("PGM holds one channel; image is not gray")
            pil = _to_pil(arr[..., 0])
    buf = io.BytesIO()
    pil.save(buf, format=_SAVE_FORMATS[fmt])
    return EncodedImage(buf.getvalue(), fmt)


def encode_jpeg(img, quality):
    """Baseline JPEG (8x8 blocks, libjpeg quality scaling) at ``quality`` in 1..100."""
    if isinstance(quality, bool) or not isinstance(quality, (int, np.integer)) or not 1 <= quality <= 100:
        raise QualityOutOfRange(f"JPEG quality must be an integer in 1..100, got {quality!r}")
    buf = io.BytesIO()
    _to_pil(img).save(buf, format="JPEG", quality=int(quality), optimize=False, progressive=False)
    return EncodedImage(buf.getvalue(), "JPEG")


def crop_border(img, k):
    """Drop ``k`` pixels from every border; ``k = 1`` shifts the JPEG block grid by one pixel."""
    arr = np.asarray(img)
    if k < 0:
        raise ValueError(f"crop width must be non-negative, got {k}")
    h, w = arr.shape[:2]
    if w <= 2 * k or h <= 2 * k:
        raise CropTooLarge(f"cannot crop {k} px from each side of a {w}x{h} image")
    return arr[k:h - k, k:w - k].copy()


def synthesize_chessboard(size, block, lo=0, hi=255):
    """Square gray chessboard, ``size`` px per side, top-left block at ``lo``."""
    if size <= 0 or block <= 0 or size % block:
        raise InvalidGeometry(f"block {block} must be positive and divide size {size}")
    if not (0 <= lo <= 255 and 0 <= hi <= 255):
        raise InvalidGeometry("intensities must lie in 0..255")
    n = size // block
    cells = np.indices((n, n)).sum(axis=0) % 2
    board = np.where(cells == 0, lo, hi).astype(np.uint8)
    board = np.repeat(np.repeat(board, block, axis=0), block, axis=1)
    return np.repeat(board[:, :, None], 3, axis=2)
