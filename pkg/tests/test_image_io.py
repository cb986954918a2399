"""PPM/PGM decoding and encoding."""

import numpy as np
import pytest

from perceptkit.engine import Image, open_image, save_image
from perceptkit.errors import CorruptHeader, FileNotFound, UnsupportedFormat


def test_p6_single_red_pixel(tmp_path):
    p = tmp_path / "red.ppm"
    p.write_bytes(b"P6\n1 1\n255\n\xff\x00\x00")
    img = open_image(p)
    assert (img.width, img.height, img.channels) == (1, 1, 3)
    assert img.numpy().ravel().tolist() == [255, 0, 0]


def test_p5_grayscale(tmp_path):
    p = tmp_path / "g.pgm"
    p.write_bytes(b"P5\n2 1\n255\n\x00\xff")
    img = open_image(p)
    assert (img.width, img.height, img.channels) == (2, 1, 1)
    assert img.numpy().ravel().tolist() == [0, 255]


def test_comments_in_header(tmp_path):
    p = tmp_path / "c.pgm"
    p.write_bytes(b"P5\n# a comment\n2 1\n# another\n255\n\x01\x02")
    assert open_image(p).numpy().ravel().tolist() == [1, 2]


def test_png_signature_unsupported(tmp_path):
    p = tmp_path / "x.png"
    p.write_bytes(b"\x89PNG\r\n\x1a\n" + bytes(16))
    with pytest.raises(UnsupportedFormat):
        open_image(p)


def test_plain_ppm_unsupported(tmp_path):
    p = tmp_path / "x.ppm"
    p.write_bytes(b"P3\n1 1\n255\n255 0 0\n")
    with pytest.raises(UnsupportedFormat):
        open_image(p)


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFound):
        open_image(tmp_path / "nope.ppm")


def test_truncated_payload(tmp_path):
    p = tmp_path / "t.ppm"
    p.write_bytes(b"P6\n2 2\n255\n" + bytes(11))
    with pytest.raises(CorruptHeader):
        open_image(p)


def test_bad_maxval(tmp_path):
    p = tmp_path / "m.pgm"
    p.write_bytes(b"P5\n1 1\n65535\n\x00\x00")
    with pytest.raises(CorruptHeader):
        open_image(p)


def test_non_numeric_header(tmp_path):
    p = tmp_path / "h.pgm"
    p.write_bytes(b"P5\nwide 1\n255\n\x00")
    with pytest.raises(CorruptHeader):
        open_image(p)


@pytest.mark.parametrize("channels", [1, 3])
def test_save_open_round_trip(tmp_path, channels):
    rng = np.random.default_rng(7)
    img = Image(rng.integers(0, 256, size=(channels, 5, 3), dtype=np.uint8))
    p = tmp_path / ("rt.ppm" if channels == 3 else "rt.pgm")
    save_image(img, p)
    assert open_image(p) == img
