import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mugiqa import errors
from mugiqa.images import crop_border, decode, encode, encode_jpeg, read_image, synthesize_chessboard


def test_png_known_pixels():
    img = np.array([[[255, 0, 0], [0, 255, 0]], [[0, 0, 255], [10, 20, 30]]], dtype=np.uint8)
    out = decode(encode(img, "PNG"))
    np.testing.assert_array_equal(out, img)


def test_pgm_promoted_to_rgb():
    gray = np.array([[0, 50], [200, 255]], dtype=np.uint8)
    raw = b"P5\n2 2\n255\n" + gray.tobytes()
    out = decode(raw)
    assert out.shape == (2, 2, 3)
    for ch in range(3):
        np.testing.assert_array_equal(out[..., ch], gray)


@pytest.mark.parametrize("fmt", ["PNG", "BMP"])
@settings(max_examples=15, deadline=None)
@given(img=arrays(np.uint8, st.tuples(st.integers(1, 9), st.integers(1, 9), st.just(3))))
def test_lossless_round_trip(fmt, img):
    np.testing.assert_array_equal(decode(encode(img, fmt)), img)


def test_pgm_round_trip():
    gray = np.arange(30, dtype=np.uint8).reshape(5, 6)
    enc = encode(gray, "PGM")
    assert enc.data.startswith(b"P5")
    np.testing.assert_array_equal(decode(enc)[..., 0], gray)


def test_truncated_jpeg_is_corrupt(photo):
    data = encode_jpeg(photo, 80).data
    with pytest.raises(errors.CorruptStream):
        decode(data[: len(data) // 3])


def test_unknown_bytes_unsupported():
    with pytest.raises(errors.UnsupportedFormat):
        decode(b"definitely not an image")


def test_gif_unsupported():
    from io import BytesIO
    from PIL import Image
    buf = BytesIO()
    Image.new("RGB", (4, 4)).save(buf, format="GIF")
    with pytest.raises(errors.UnsupportedFormat):
        decode(buf.getvalue())


def test_sixteen_bit_png_unsupported():
    from io import BytesIO
    from PIL import Image
    buf = BytesIO()
    Image.fromarray(np.full((4, 4), 4000, dtype=np.uint16)).save(buf, format="PNG")
    with pytest.raises(errors.UnsupportedFormat):
        decode(buf.getvalue())


def test_jpeg_preserves_dimensions(photo):
    out = decode(encode_jpeg(photo[:100, :131], 75))
    assert out.shape == (100, 131, 3)


def test_jpeg_low_quality_is_smaller(photo):
    assert len(encode_jpeg(photo, 10).data) < len(encode_jpeg(photo, 90).data)


@pytest.mark.parametrize("q", [0, 101, -5, 50.0, True])
def test_quality_range(photo, q):
    with pytest.raises(errors.QualityOutOfRange):
        encode_jpeg(photo, q)


def test_read_image(tmp_path, photo):
    path = tmp_path / "a.jpg"
    encode_jpeg(photo, 60).save(path)
    assert read_image(path).shape == photo.shape


class TestCrop:
    def test_dimensions(self):
        assert crop_border(np.zeros((10, 10, 3), np.uint8), 1).shape == (8, 8, 3)

    def test_offset(self, rng):
        img = rng.integers(0, 256, (12, 15, 3), dtype=np.uint8)
        out = crop_border(img, 2)
        np.testing.assert_array_equal(out[0, 0], img[2, 2])
        np.testing.assert_array_equal(out, img[2:10, 2:13])

    def test_too_large(self):
        with pytest.raises(errors.CropTooLarge):
            crop_border(np.zeros((3, 3, 3), np.uint8), 2)
        with pytest.raises(errors.CropTooLarge):
            crop_border(np.zeros((4, 9, 3), np.uint8), 2)

    def test_identity(self, rng):
        img = rng.integers(0, 256, (7, 5, 3), dtype=np.uint8)
        np.testing.assert_array_equal(crop_border(img, 0), img)

    @given(st.integers(0, 4), st.integers(0, 4))
    def test_composes(self, a, b):
        img = np.arange(20 * 22 * 3, dtype=np.int64).reshape(20, 22, 3)
        np.testing.assert_array_equal(crop_border(crop_border(img, a), b), crop_border(img, a + b))


class TestChessboard:
    def test_reference_geometry(self, chessboard):
        assert chessboard.shape == (1024, 1024, 3)
        cells = chessboard[::128, ::128, 0]
        assert cells.shape == (8, 8)
        np.testing.assert_array_equal(cells, (np.indices((8, 8)).sum(0) % 2) * 255)
        # blocks are uniform
        assert np.all(chessboard[:128, :128] == 0) and np.all(chessboard[:128, 128:256] == 255)

    def test_smallest(self):
        np.testing.assert_array_equal(synthesize_chessboard(2, 1, 0, 255)[..., 0], [[0, 255], [255, 0]])

    @pytest.mark.parametrize("size, block", [(8, 3), (8, 0), (0, 1)])
    def test_invalid_geometry(self, size, block):
        with pytest.raises(errors.InvalidGeometry):
            synthesize_chessboard(size, block)
