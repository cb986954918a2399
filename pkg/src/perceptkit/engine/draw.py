"""Box geometry and pixel-exact box drawing."""

import math

import numpy as np

from ..errors import IndexOutOfRange
from .data import Image
from .targets import BoundingBox

# Fixed drawing palette (RGB); color for class i is PALETTE[i % 8].
PALETTE = (
    (255, 0, 0),
    (0, 255, 0),
    (0, 0, 255),
    (255, 255, 0),
    (255, 0, 255),
    (0, 255, 255),
    (255, 128, 0),
    (128, 0, 255),
)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two boxes; 0 when the union is empty."""
    ix = max(0.0, min(a.x + a.w, b.x + b.w) - max(a.x, b.x))
    iy = max(0.0, min(a.y + a.h, b.y + b.h) - max(a.y, b.y))
    inter = ix * iy
    union = a.area() + b.area() - inter
    if union <= 0.0:
        return 0.0
    return inter / union


def _iround(v: float) -> int:
    # round half away from zero, matching the image quantizer
    return int(math.floor(v + 0.5)) if v >= 0 else -int(math.floor(-v + 0.5))


def _gray(rgb) -> int:
    r, g, b = rgb
    return _iround(0.299 * r + 0.587 * g + 0.114 * b)


def draw_bounding_boxes(img: Image, boxes, class_names) -> Image:
    """Return a copy of `img` with 1-pixel box borders painted.

    The border spans the rectangle with inclusive corners (x, y) and
    (x+w, y+h). Pixels outside the borders are untouched; the input image
    is never modified.
    """
    class_names = list(class_names)
    arr = np.array(img.numpy(), copy=True)
    height, width = img.height, img.width

    for box in boxes:
        idx = box.category.index
        if idx >= len(class_names):
            raise IndexOutOfRange(
                f"class index {idx} but only {len(class_names)} class names")
        rgb = PALETTE[idx % len(PALETTE)]
        color = np.array(rgb if img.channels == 3 else [_gray(rgb)], dtype=np.uint8)

        x0, y0 = _iround(box.x), _iround(box.y)
        x1, y1 = _iround(box.x + box.w), _iround(box.y + box.h)
        cx0, cx1 = max(x0, 0), min(x1, width - 1)
        cy0, cy1 = max(y0, 0), min(y1, height - 1)
        if cx0 > cx1 or cy0 > cy1:
            continue  # fully outside
        for row in (y0, y1):
            if 0 <= row < height:
                arr[:, row, cx0:cx1 + 1] = color[:, None]
        for col in (x0, x1):
            if 0 <= col < width:
                arr[:, cy0:cy1 + 1, col] = color[:, None]
    return Image(arr)
