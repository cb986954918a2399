"""Data types: construction, conversion round trips, invariants."""

import numpy as np
import pytest

from perceptkit.engine import (
    CANONICAL_FORMAT,
    ChannelOrder,
    Image,
    ImageFormat,
    Layout,
    PixelDtype,
    PointCloud,
    PointCloudWithCalibration,
    Timeseries,
    Vector,
    Video,
)
from perceptkit.errors import BadChannels, LengthMismatch, ValueOutOfRange

HWC_BGR_U8 = ImageFormat(Layout.HWC, ChannelOrder.BGR, PixelDtype.U8)
CHW_RGB_F32 = ImageFormat(Layout.CHW, ChannelOrder.RGB, PixelDtype.F32)


def random_image(rng, width=None, height=None, channels=None) -> Image:
    width = width or int(rng.integers(1, 9))
    height = height or int(rng.integers(1, 9))
    channels = channels or int(rng.choice([1, 3]))
    data = rng.integers(0, 256, size=(channels, height, width), dtype=np.uint8)
    return Image(data)


def test_exactly_eight_formats():
    formats = ImageFormat.all_formats()
    assert len(formats) == 8
    assert len(set(formats)) == 8


def test_from_buffer_bgr_swap():
    img = Image.from_buffer(bytes([0, 0, 255]), HWC_BGR_U8, 1, 1, 3)
    assert img.numpy().ravel().tolist() == [255, 0, 0]


def test_from_buffer_f32_quantization():
    img = Image.from_buffer([0.5019608], CHW_RGB_F32, 1, 1, 1)
    assert img.numpy().ravel().tolist() == [128]


def test_from_buffer_length_mismatch():
    with pytest.raises(LengthMismatch):
        Image.from_buffer(bytes(11), CANONICAL_FORMAT, 2, 2, 3)


def test_from_buffer_f32_out_of_range():
    with pytest.raises(ValueOutOfRange):
        Image.from_buffer([1.5], CHW_RGB_F32, 1, 1, 1)
    with pytest.raises(ValueOutOfRange):
        Image.from_buffer([-0.01], CHW_RGB_F32, 1, 1, 1)
    with pytest.raises(ValueOutOfRange):
        Image.from_buffer([float("nan")], CHW_RGB_F32, 1, 1, 1)


def test_from_buffer_misaligned_f32_bytes():
    with pytest.raises(LengthMismatch):
        Image.from_buffer(bytes(11), CHW_RGB_F32, 1, 1, 3)


def test_from_buffer_bad_channels():
    with pytest.raises(BadChannels):
        Image.from_buffer(bytes(4), CANONICAL_FORMAT, 2, 2, 2)
    with pytest.raises(BadChannels):
        Image.from_buffer(bytes(8), CANONICAL_FORMAT, 2, 2, 4)


def test_convert_inverse_of_constructor_example():
    img = Image(np.array([255, 0, 0], dtype=np.uint8).reshape(3, 1, 1))
    assert img.convert(HWC_BGR_U8).ravel().tolist() == [0, 0, 255]


def test_convert_u8_to_f32():
    img = Image(np.full((1, 1, 1), 128, dtype=np.uint8))
    out = img.convert(CHW_RGB_F32)
    assert out.dtype == np.float32
    assert out.ravel()[0] == pytest.approx(0.50196078, abs=1e-7)


def test_u8_f32_round_trip_is_exact_for_all_values():
    img = Image(np.arange(256, dtype=np.uint8).reshape(1, 16, 16))
    back = Image.from_buffer(img.convert(CHW_RGB_F32), CHW_RGB_F32, 16, 16, 1)
    assert back == img


@pytest.mark.parametrize("fmt", ImageFormat.all_formats(),
                         ids=lambda f: f"{f.layout.value}-{f.channel_order.value}-{f.dtype.value}")
def test_round_trip_every_format(fmt):
    rng = np.random.default_rng(42)
    for _ in range(25):
        img = random_image(rng)
        buf = img.convert(fmt)
        back = Image.from_buffer(buf, fmt, img.width, img.height, img.channels)
        assert back == img


def test_grayscale_ignores_channel_order():
    payload = bytes([7, 9])
    a = Image.from_buffer(payload, ImageFormat(Layout.HWC, ChannelOrder.RGB, PixelDtype.U8), 2, 1, 1)
    b = Image.from_buffer(payload, ImageFormat(Layout.HWC, ChannelOrder.BGR, PixelDtype.U8), 2, 1, 1)
    assert a == b


def test_image_is_immutable():
    img = random_image(np.random.default_rng(0))
    with pytest.raises(ValueError):
        img.numpy()[0, 0, 0] = 1


def test_opencv_accessor_is_hwc_bgr():
    img = Image(np.array([10, 20, 30], dtype=np.uint8).reshape(3, 1, 1))
    cv = img.opencv()
    assert cv.shape == (1, 1, 3)
    assert cv.ravel().tolist() == [30, 20, 10]


def test_vector_rejects_non_finite():
    with pytest.raises(ValueOutOfRange):
        Vector([1.0, float("inf")])
    with pytest.raises(ValueOutOfRange):
        Vector([float("nan")])
    assert Vector([1.0, 2.0]).numpy().tolist() == [1.0, 2.0]


def test_timeseries_shape_rules():
    ts = Timeseries([[1.0, 2.0], [3.0, 4.0]])
    assert ts.timesteps == 2 and ts.channels == 2
    with pytest.raises(ValueOutOfRange):
        Timeseries([[1.0, 2.0], [3.0]])  # ragged
    with pytest.raises(LengthMismatch):
        Timeseries(np.zeros((0, 2)))


def test_video_homogeneity():
    rng = np.random.default_rng(1)
    a = random_image(rng, width=4, height=4, channels=3)
    b = random_image(rng, width=4, height=4, channels=3)
    assert len(Video([a, b])) == 2
    with pytest.raises(LengthMismatch):
        Video([])
    with pytest.raises(LengthMismatch):
        Video([a, random_image(rng, width=5, height=4, channels=3)])


def test_pointcloud_needs_xyz():
    pc = PointCloud([[0.0, 1.0, 2.0, 0.5]])
    assert len(pc) == 1
    with pytest.raises(LengthMismatch):
        PointCloud([[0.0, 1.0]])


def test_calibration_must_be_3x4():
    cloud = PointCloud([[0.0, 0.0, 0.0]])
    PointCloudWithCalibration(cloud, np.zeros((3, 4)))
    with pytest.raises(LengthMismatch):
        PointCloudWithCalibration(cloud, np.zeros((4, 3)))
