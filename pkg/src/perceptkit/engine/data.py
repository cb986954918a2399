"""Canonical sensor data types and image layout conversions.

Every image held by the toolkit is stored one way only: channels-first
(CHW), RGB channel order, unsigned 8-bit samples. External buffers in any
of the 8 layout/order/dtype combinations are converted on the way in and
reproduced on the way out, so algorithms never see more than one format.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import BadChannels, LengthMismatch, ValueOutOfRange


class Layout(Enum):
    CHW = "chw"
    HWC = "hwc"


class ChannelOrder(Enum):
    RGB = "rgb"
    BGR = "bgr"


class PixelDtype(Enum):
    U8 = "u8"
    F32 = "f32"


@dataclass(frozen=True)
class ImageFormat:
    """One of the 8 external image buffer formats."""

    layout: Layout
    channel_order: ChannelOrder
    dtype: PixelDtype

    @classmethod
    def all_formats(cls) -> list["ImageFormat"]:
        return [
            cls(layout, order, dtype)
            for layout in Layout
            for order in ChannelOrder
            for dtype in PixelDtype
        ]


CANONICAL_FORMAT = ImageFormat(Layout.CHW, ChannelOrder.RGB, PixelDtype.U8)


class Data:
    """Marker base for all sensor data types."""


def _as_float64_matrix(values, what: str) -> np.ndarray:
    try:
        arr = np.asarray(values, dtype=np.float64)
    except ValueError as exc:  # ragged nested sequences
        raise ValueOutOfRange(f"{what} rows must all have the same width") from exc
    if arr.ndim != 2:
        raise ValueOutOfRange(f"{what} must be a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueOutOfRange(f"{what} contains non-finite values")
    arr = np.ascontiguousarray(arr)
    arr.flags.writeable = False
    return arr


class Image(Data):
    """A canonical-form image: CHW, RGB, uint8.

    Construct from an already-canonical array, or use :meth:`from_buffer`
    for external layouts and :meth:`open` for files.
    """

    def __init__(self, data: np.ndarray):
        arr = np.asarray(data, dtype=np.uint8)
        if arr.ndim != 3:
            raise LengthMismatch(f"canonical image must be 3-D (CHW), got shape {arr.shape}")
        if arr.shape[0] not in (1, 3):
            raise BadChannels(f"channels must be 1 or 3, got {arr.shape[0]}")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self._data = arr

    @property
    def channels(self) -> int:
        return self._data.shape[0]

    @property
    def height(self) -> int:
        return self._data.shape[1]

    @property
    def width(self) -> int:
        return self._data.shape[2]

    def numpy(self) -> np.ndarray:
        """Canonical CHW/RGB/U8 array (read-only view)."""
        return self._data

    def opencv(self) -> np.ndarray:
        """HWC, BGR, uint8 (the OpenCV convention)."""
        return self.convert(ImageFormat(Layout.HWC, ChannelOrder.BGR, PixelDtype.U8))

    @classmethod
    def from_buffer(cls, buffer, fmt: ImageFormat, width: int, height: int,
                    channels: int) -> "Image":
        """Build a canonical Image from an external buffer.

        F32 buffers must hold values in [0, 1]; they are quantized with
        round-half-away-from-zero. Out-of-range values are an error, not a
        clamp, so upstream pipeline bugs surface immediately.
        """
        if channels not in (1, 3):
            raise BadChannels(f"channels must be 1 or 3, got {channels}")
        expected = channels * height * width

        if isinstance(buffer, (bytes, bytearray, memoryview)):
            dtype = np.uint8 if fmt.dtype is PixelDtype.U8 else np.float32
            try:
                arr = np.frombuffer(buffer, dtype=dtype)
            except ValueError as exc:  # byte count not a multiple of item size
                raise LengthMismatch(f"byte buffer does not hold whole "
                                     f"{fmt.dtype.value} samples: {exc}") from exc
        else:
            arr = np.asarray(buffer)
        arr = arr.reshape(-1)
        if arr.size != expected:
            raise LengthMismatch(
                f"buffer has {arr.size} elements, expected {expected} "
                f"({channels}x{height}x{width})")

        if fmt.dtype is PixelDtype.U8:
            vals = arr.astype(np.float64)
            if np.any(vals != np.floor(vals)) or np.any(vals < 0) or np.any(vals > 255):
                raise ValueOutOfRange("U8 buffer values must be integers in [0, 255]")
            flat = arr.astype(np.uint8)
        else:
            f32 = arr.astype(np.float32)
            ok = np.isfinite(f32) & (f32 >= 0.0) & (f32 <= 1.0)
            if not np.all(ok):
                raise ValueOutOfRange("F32 buffer values must lie in [0, 1]")
            # round half away from zero; values are nonnegative
            flat = np.floor(f32.astype(np.float64) * 255.0 + 0.5).astype(np.uint8)

        if fmt.layout is Layout.HWC:
            chw = flat.reshape(height, width, channels).transpose(2, 0, 1)
        else:
            chw = flat.reshape(channels, height, width)
        if fmt.channel_order is ChannelOrder.BGR and channels == 3:
            chw = chw[::-1, :, :]
        return cls(chw)

    def convert(self, fmt: ImageFormat) -> np.ndarray:
        """Render this image as a contiguous buffer in the requested format.

        U8 output is uint8; F32 output maps v to v/255 in float32.
        """
        arr = self._data
        if fmt.channel_order is ChannelOrder.BGR and self.channels == 3:
            arr = arr[::-1, :, :]
        if fmt.layout is Layout.HWC:
            arr = arr.transpose(1, 2, 0)
        if fmt.dtype is PixelDtype.F32:
            out = arr.astype(np.float32) / np.float32(255.0)
        else:
            out = arr.astype(np.uint8)
        return np.ascontiguousarray(out)

    @classmethod
    def open(cls, path) -> "Image":
        from .image_io import open_image
        return open_image(path)

    def save(self, path) -> None:
        from .image_io import save_image
        save_image(self, path)

    def __eq__(self, other) -> bool:
        return isinstance(other, Image) and np.array_equal(self._data, other._data)

    def __hash__(self):
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"Image({self.channels}x{self.height}x{self.width})"


class Vector(Data):
    """A 1-D vector of finite 64-bit floats."""

    def __init__(self, values):
        arr = np.asarray(values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(arr)):
            raise ValueOutOfRange("Vector contains non-finite values")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self._values = arr

    def numpy(self) -> np.ndarray:
        return self._values

    def __len__(self) -> int:
        return self._values.size

    def __eq__(self, other) -> bool:
        return isinstance(other, Vector) and np.array_equal(self._values, other._values)

    def __hash__(self):
        return hash(self._values.tobytes())

    def __repr__(self) -> str:
        return f"Vector({self._values.tolist()!r})"


class Timeseries(Data):
    """T x D matrix: T timesteps of D-channel measurements."""

    def __init__(self, samples):
        arr = _as_float64_matrix(samples, "Timeseries")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise LengthMismatch(f"Timeseries needs T >= 1 and D >= 1, got {arr.shape}")
        self._samples = arr

    def numpy(self) -> np.ndarray:
        return self._samples

    @property
    def timesteps(self) -> int:
        return self._samples.shape[0]

    @property
    def channels(self) -> int:
        return self._samples.shape[1]

    def __eq__(self, other) -> bool:
        return isinstance(other, Timeseries) and np.array_equal(self._samples, other._samples)

    def __hash__(self):
        return hash(self._samples.tobytes())


class Video(Data):
    """A nonempty sequence of same-shaped frames."""

    def __init__(self, frames):
        frames = list(frames)
        if not frames:
            raise LengthMismatch("Video needs at least one frame")
        first = frames[0]
        for f in frames:
            if not isinstance(f, Image):
                raise ValueOutOfRange("Video frames must be Image instances")
            if (f.width, f.height, f.channels) != (first.width, first.height, first.channels):
                raise LengthMismatch("Video frames must share width/height/channels")
        self._frames = tuple(frames)

    @property
    def frames(self) -> tuple:
        return self._frames

    def __len__(self) -> int:
        return len(self._frames)

    def __eq__(self, other) -> bool:
        return isinstance(other, Video) and self._frames == other._frames


class PointCloud(Data):
    """N x D point matrix, D >= 3 (x, y, z plus optional extra channels)."""

    def __init__(self, points):
        arr = _as_float64_matrix(points, "PointCloud")
        if arr.shape[1] < 3:
            raise LengthMismatch(f"PointCloud needs D >= 3 columns, got {arr.shape[1]}")
        self._points = arr

    def numpy(self) -> np.ndarray:
        return self._points

    def __len__(self) -> int:
        return self._points.shape[0]

    def __eq__(self, other) -> bool:
        return isinstance(other, PointCloud) and np.array_equal(self._points, other._points)

    def __hash__(self):
        return hash(self._points.tobytes())


class PointCloudWithCalibration(Data):
    """A point cloud plus a 3x4 projection matrix."""

    def __init__(self, cloud: PointCloud, calibration):
        if not isinstance(cloud, PointCloud):
            cloud = PointCloud(cloud)
        calib = np.asarray(calibration, dtype=np.float64)
        if calib.shape != (3, 4):
            raise LengthMismatch(f"calibration must be 3x4, got {calib.shape}")
        if not np.all(np.isfinite(calib)):
            raise ValueOutOfRange("calibration contains non-finite values")
        calib = np.ascontiguousarray(calib)
        calib.flags.writeable = False
        self.cloud = cloud
        self.calibration = calib

    def __eq__(self, other) -> bool:
        return (isinstance(other, PointCloudWithCalibration)
                and self.cloud == other.cloud
                and np.array_equal(self.calibration, other.calibration))
