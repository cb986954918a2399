"""Canonical data types, targets, conversions and wire records."""

from .data import (
    CANONICAL_FORMAT,
    ChannelOrder,
    Data,
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
from .draw import PALETTE, draw_bounding_boxes, iou
from .image_io import encode_image, open_image, save_image
from .targets import (
    POSE_ABSENT,
    Action,
    BaseTarget,
    BoundingBox,
    BoundingBox3D,
    Category,
    Heatmap,
    Pose,
    SpeechCommand,
    Target,
    to_string,
)
from .wire import from_wire, to_wire, to_wire_json

__all__ = [
    "Action", "BaseTarget", "BoundingBox", "BoundingBox3D", "CANONICAL_FORMAT",
    "Category", "ChannelOrder", "Data", "Heatmap", "Image", "ImageFormat",
    "Layout", "PALETTE", "PixelDtype", "PointCloud", "PointCloudWithCalibration",
    "Pose", "POSE_ABSENT", "SpeechCommand", "Target", "Timeseries", "Vector",
    "Video", "draw_bounding_boxes", "encode_image", "from_wire", "iou",
    "open_image", "save_image", "to_string", "to_wire", "to_wire_json",
]
