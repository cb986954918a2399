"""JSON wire records for targets.

Each record is an object with a ``type`` tag plus the type's own fields
(lowercase field names). ``confidence`` and ``action`` are present only
when set. ``from_wire(to_wire(t))`` is structurally equal to ``t``.
"""

import json

from ..errors import SchemaViolation, UnknownTypeTag
from .targets import (
    Action,
    BoundingBox,
    BoundingBox3D,
    Category,
    Heatmap,
    Pose,
    SpeechCommand,
    Target,
)


def _common_fields(t: Target, record: dict) -> dict:
    if t.confidence is not None:
        record["confidence"] = t.confidence
    if t.suggested_action is not None:
        record["action"] = list(t.suggested_action.axes)
    return record


def to_wire(t: Target) -> dict:
    if isinstance(t, Category):
        rec = {"type": "category", "index": t.index}
        if t.description is not None:
            rec["description"] = t.description
    elif isinstance(t, BoundingBox):
        rec = {"type": "bounding_box", "category": to_wire(t.category),
               "x": t.x, "y": t.y, "w": t.w, "h": t.h}
    elif isinstance(t, BoundingBox3D):
        rec = {"type": "bounding_box_3d", "category": to_wire(t.category),
               "center": list(t.center), "size": list(t.size), "yaw": t.yaw}
    elif isinstance(t, Pose):
        rec = {"type": "pose", "keypoints": [list(kp) for kp in t.keypoints]}
    elif isinstance(t, Heatmap):
        rec = {"type": "heatmap", "class_map": t.class_map.tolist(),
               "n_classes": t.n_classes}
    elif isinstance(t, SpeechCommand):
        rec = {"type": "speech_command", "command": to_wire(t.command)}
    else:
        raise UnknownTypeTag(f"no wire schema for {type(t).__name__}")
    return _common_fields(t, rec)


def to_wire_json(t: Target) -> str:
    return json.dumps(to_wire(t), separators=(",", ":"))


_FIELDS = {
    "category": {"index", "description"},
    "bounding_box": {"category", "x", "y", "w", "h"},
    "bounding_box_3d": {"category", "center", "size", "yaw"},
    "pose": {"keypoints"},
    "heatmap": {"class_map", "n_classes"},
    "speech_command": {"command"},
}


def _require(record: dict, key: str):
    if key not in record:
        raise SchemaViolation(f"record is missing required field '{key}'")
    return record[key]


def _common_kwargs(record: dict) -> dict:
    kwargs = {}
    if "confidence" in record:
        conf = record["confidence"]
        if not isinstance(conf, (int, float)) or isinstance(conf, bool):
            raise SchemaViolation("'confidence' must be a number")
        kwargs["confidence"] = float(conf)
    if "action" in record:
        axes = record["action"]
        if not isinstance(axes, list):
            raise SchemaViolation("'action' must be a list of numbers")
        kwargs["suggested_action"] = Action(axes)
    return kwargs


def _nested_category(value) -> Category:
    cat = from_wire(value)
    if not isinstance(cat, Category):
        raise SchemaViolation("nested 'category' record must have type 'category'")
    return cat


def from_wire(record) -> Target:
    """Parse a wire record (dict or JSON text) back into a target."""
    if isinstance(record, (str, bytes)):
        try:
            record = json.loads(record)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"invalid JSON: {exc}") from exc
    if not isinstance(record, dict):
        raise SchemaViolation("wire record must be a JSON object")
    tag = record.get("type")
    if tag is None:
        raise SchemaViolation("record is missing the 'type' tag")
    if tag not in _FIELDS:
        raise UnknownTypeTag(f"unknown wire type tag {tag!r}")

    allowed = _FIELDS[tag] | {"type", "confidence", "action"}
    extra = set(record) - allowed
    if extra:
        raise SchemaViolation(f"unexpected fields for '{tag}': {sorted(extra)}")

    try:
        if tag == "category":
            return Category(_require(record, "index"), record.get("description"),
                            **_common_kwargs(record))
        if tag == "bounding_box":
            return BoundingBox(_nested_category(_require(record, "category")),
                               _require(record, "x"), _require(record, "y"),
                               _require(record, "w"), _require(record, "h"),
                               **_common_kwargs(record))
        if tag == "bounding_box_3d":
            return BoundingBox3D(_nested_category(_require(record, "category")),
                                 _require(record, "center"), _require(record, "size"),
                                 _require(record, "yaw"), **_common_kwargs(record))
        if tag == "pose":
            return Pose(_require(record, "keypoints"), **_common_kwargs(record))
        if tag == "heatmap":
            return Heatmap(_require(record, "class_map"),
                           _require(record, "n_classes"), **_common_kwargs(record))
        return SpeechCommand(_nested_category(_require(record, "command")),
                             **_common_kwargs(record))
    except (SchemaViolation, UnknownTypeTag):
        raise
    except Exception as exc:
        raise SchemaViolation(f"malformed '{tag}' record: {exc}") from exc
