"""ctypes bindings over the native shim, used for cross-checking tests."""

import ctypes
from pathlib import Path

from ..engine import ChannelOrder, Image, ImageFormat, Layout, PixelDtype

OK = 0
NOT_FOUND = 1
BAD_PACKAGE = 2
BAD_INPUT = 3
BAD_HANDLE = 4
CAPACITY = 5
INTERNAL = 6

LAYOUT_CODES = {Layout.CHW: 0, Layout.HWC: 1}
ORDER_CODES = {ChannelOrder.RGB: 0, ChannelOrder.BGR: 1}
DTYPE_CODES = {PixelDtype.U8: 0, PixelDtype.F32: 1}

DESCRIPTION_CAP = 64


class OdrImageDesc(ctypes.Structure):
    _fields_ = [
        ("data", ctypes.c_void_p),
        ("len", ctypes.c_uint64),
        ("width", ctypes.c_uint32),
        ("height", ctypes.c_uint32),
        ("channels", ctypes.c_uint32),
        ("layout", ctypes.c_uint32),
        ("channel_order", ctypes.c_uint32),
        ("dtype", ctypes.c_uint32),
    ]


class OdrCategoryOut(ctypes.Structure):
    _fields_ = [
        ("index", ctypes.c_uint32),
        ("reserved", ctypes.c_uint32),
        ("confidence", ctypes.c_double),
        ("description", ctypes.c_char * DESCRIPTION_CAP),
    ]


class OdrLibrary:
    """Thin, test-friendly wrapper keeping buffers alive across calls."""

    def __init__(self, path):
        self._lib = ctypes.CDLL(str(Path(path)))
        self._lib.odr_load_centroid.restype = ctypes.c_int
        self._lib.odr_load_centroid.argtypes = [ctypes.c_char_p,
                                                ctypes.POINTER(ctypes.c_uint64)]
        self._lib.odr_infer_centroid.restype = ctypes.c_int
        self._lib.odr_infer_centroid.argtypes = [ctypes.c_uint64,
                                                 ctypes.POINTER(OdrImageDesc),
                                                 ctypes.POINTER(OdrCategoryOut)]
        self._lib.odr_free.restype = ctypes.c_int
        self._lib.odr_free.argtypes = [ctypes.c_uint64]
        self._lib.odr_last_error.restype = ctypes.c_int
        self._lib.odr_last_error.argtypes = [ctypes.c_char_p, ctypes.c_uint64]

    def load(self, package_path):
        handle = ctypes.c_uint64(0)
        status = self._lib.odr_load_centroid(str(package_path).encode("utf-8"),
                                             ctypes.byref(handle))
        return status, handle.value

    def infer(self, handle: int, desc: OdrImageDesc):
        out = OdrCategoryOut()
        status = self._lib.odr_infer_centroid(handle, ctypes.byref(desc),
                                              ctypes.byref(out))
        return status, out

    def free(self, handle: int) -> int:
        return self._lib.odr_free(handle)

    def last_error(self) -> str:
        buf = ctypes.create_string_buffer(512)
        self._lib.odr_last_error(buf, len(buf))
        return buf.value.decode("utf-8", errors="replace")


def describe_image(img: Image, fmt: ImageFormat):
    """Build an OdrImageDesc for `img` rendered in `fmt`.

    Returns (desc, buffer); the caller must keep `buffer` referenced for as
    long as the desc is in use.
    """
    buffer = img.convert(fmt).tobytes()
    raw = ctypes.create_string_buffer(buffer, len(buffer))
    desc = OdrImageDesc(
        data=ctypes.cast(raw, ctypes.c_void_p),
        len=len(buffer),
        width=img.width,
        height=img.height,
        channels=img.channels,
        layout=LAYOUT_CODES[fmt.layout],
        channel_order=ORDER_CODES[fmt.channel_order],
        dtype=DTYPE_CODES[fmt.dtype],
    )
    return desc, raw
