"""Binary PPM (P6) and PGM (P5) image files.

These two formats are supported because they decode bit-exactly with no
third-party codec, which keeps image fixtures and golden tests stable.
"""

import os
from pathlib import Path

from ..errors import CorruptHeader, FileNotFound, UnsupportedFormat
from .data import ChannelOrder, Image, ImageFormat, Layout, PixelDtype

_HWC_RGB_U8 = ImageFormat(Layout.HWC, ChannelOrder.RGB, PixelDtype.U8)

# magics we recognise well enough to name in the error
_KNOWN_OTHER = {
    b"P1": "plain PBM", b"P2": "plain PGM", b"P3": "plain PPM", b"P4": "raw PBM",
    b"\x89P": "PNG", b"\xff\xd8": "JPEG", b"BM": "BMP", b"GI": "GIF",
}


def _read_header_tokens(blob: bytes, count: int):
    """Yield `count` whitespace-separated tokens after the magic, honouring
    '#' comments, and return the payload offset (one whitespace byte after
    the last token)."""
    tokens = []
    i = 2  # past magic
    n = len(blob)
    while len(tokens) < count:
        while i < n and blob[i:i + 1].isspace():
            i += 1
        if i < n and blob[i] == ord("#"):
            while i < n and blob[i] != ord("\n"):
                i += 1
            continue
        start = i
        while i < n and not blob[i:i + 1].isspace():
            i += 1
        if start == i:
            raise CorruptHeader("header ended before all fields were read")
        tokens.append(blob[start:i])
    if i >= n:
        raise CorruptHeader("missing whitespace after header")
    i += 1  # exactly one whitespace byte separates header and payload
    return tokens, i


def open_image(path) -> Image:
    """Load a P6/P5 file into a canonical Image."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFound(str(path))
    blob = path.read_bytes()
    magic = blob[:2]
    if magic not in (b"P6", b"P5"):
        kind = _KNOWN_OTHER.get(magic, "unknown")
        raise UnsupportedFormat(f"{path}: not a P6/P5 file (looks like {kind})")
    try:
        (w_tok, h_tok, max_tok), offset = _read_header_tokens(blob, 3)
        width, height, maxval = int(w_tok), int(h_tok), int(max_tok)
    except CorruptHeader:
        raise
    except ValueError as exc:
        raise CorruptHeader(f"{path}: non-numeric header field") from exc
    if width <= 0 or height <= 0:
        raise CorruptHeader(f"{path}: non-positive dimensions {width}x{height}")
    if maxval != 255:
        raise CorruptHeader(f"{path}: only maxval 255 is supported, got {maxval}")

    channels = 3 if magic == b"P6" else 1
    payload = blob[offset:offset + channels * height * width]
    if len(payload) != channels * height * width:
        raise CorruptHeader(f"{path}: truncated pixel data")
    return Image.from_buffer(payload, _HWC_RGB_U8, width, height, channels)


def encode_image(img: Image) -> bytes:
    """Serialize a canonical Image as P6 (3 channels) or P5 (1 channel)."""
    magic = "P6" if img.channels == 3 else "P5"
    header = f"{magic}\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.convert(_HWC_RGB_U8).tobytes()


def save_image(img: Image, path) -> None:
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(encode_image(img))
    os.replace(tmp, path)
