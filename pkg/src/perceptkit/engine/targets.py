"""Prediction and annotation types, plus the active-perception Action.

Targets are immutable values. Every Target may carry a confidence and a
suggested next Action; annotation-only types descend from BaseTarget.
"""

import math
import operator

import numpy as np

from ..errors import (
    AxisCountInvalid,
    ComponentOutOfRange,
    NonFinite,
    ValueOutOfRange,
)


class Action:
    """A k-axis control suggestion, 1 <= k <= 4, each component in [-1, 1].

    The plain constructor validates and never clamps; use :meth:`clamped`
    to coerce finite out-of-range components to the boundary.
    """

    __slots__ = ("axes",)

    def __init__(self, axes):
        axes = tuple(float(a) for a in axes)
        if not 1 <= len(axes) <= 4:
            raise AxisCountInvalid(f"action needs 1..4 axes, got {len(axes)}")
        for a in axes:
            if not -1.0 <= a <= 1.0:  # NaN fails both comparisons
                raise ComponentOutOfRange(f"component {a!r} outside [-1, 1]")
        object.__setattr__(self, "axes", axes)

    @classmethod
    def clamped(cls, axes) -> "Action":
        axes = tuple(float(a) for a in axes)
        if not 1 <= len(axes) <= 4:
            raise AxisCountInvalid(f"action needs 1..4 axes, got {len(axes)}")
        for a in axes:
            if not math.isfinite(a):
                raise NonFinite(f"cannot clamp non-finite component {a!r}")
        return cls(tuple(min(1.0, max(-1.0, a)) for a in axes))

    def __setattr__(self, name, value):
        raise AttributeError("Action is immutable")

    def __len__(self) -> int:
        return len(self.axes)

    def __eq__(self, other) -> bool:
        return isinstance(other, Action) and self.axes == other.axes

    def __hash__(self):
        return hash(self.axes)

    def __repr__(self) -> str:
        return f"Action({list(self.axes)!r})"


class BaseTarget:
    """Root of the target hierarchy; annotation-only types inherit this."""


class Target(BaseTarget):
    """A prediction value: optional confidence plus optional next action."""

    def __init__(self, confidence=None, suggested_action=None):
        if confidence is not None:
            confidence = float(confidence)
            if not 0.0 <= confidence <= 1.0:
                raise ValueOutOfRange(f"confidence {confidence!r} outside [0, 1]")
        if suggested_action is not None and not isinstance(suggested_action, Action):
            suggested_action = Action(suggested_action)
        self.confidence = confidence
        self.suggested_action = suggested_action

    def _suffix(self) -> str:
        out = ""
        if self.confidence is not None:
            out += f", conf={self.confidence:.3f}"
        if self.suggested_action is not None:
            out += f", action={list(self.suggested_action.axes)!r}"
        return out

    def _eq_base(self, other) -> bool:
        return (self.confidence == other.confidence
                and self.suggested_action == other.suggested_action)


class Category(Target):
    """A class id with an optional human-readable label."""

    def __init__(self, index: int, description=None, confidence=None,
                 suggested_action=None):
        super().__init__(confidence, suggested_action)
        try:
            index = operator.index(index)  # ints only, no float truncation
        except TypeError:
            raise ValueOutOfRange(f"category index must be an integer, "
                                  f"got {index!r}") from None
        if index < 0:
            raise ValueOutOfRange(f"category index must be >= 0, got {index}")
        self.index = index
        self.description = description if description is None else str(description)

    def _label(self) -> str:
        if self.description is None:
            return str(self.index)
        return f"{self.index} '{self.description}'"

    def __str__(self) -> str:
        return f"Category({self._label()}{self._suffix()})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Category) and self._eq_base(other)
                and self.index == other.index
                and self.description == other.description)

    def __hash__(self):
        return hash((self.index, self.description, self.confidence))

    __repr__ = __str__


class BoundingBox(Target):
    """Axis-aligned 2-D box: top-left corner (x, y) and extent (w, h) in pixels."""

    def __init__(self, category: Category, x: float, y: float, w: float, h: float,
                 confidence=None, suggested_action=None):
        super().__init__(confidence, suggested_action)
        if not isinstance(category, Category):
            raise ValueOutOfRange("BoundingBox.category must be a Category")
        w, h = float(w), float(h)
        if w < 0 or h < 0:
            raise ValueOutOfRange(f"box extent must be nonnegative, got {w}x{h}")
        self.category = category
        self.x, self.y, self.w, self.h = float(x), float(y), w, h

    def area(self) -> float:
        return self.w * self.h

    def __str__(self) -> str:
        return (f"BoundingBox({self.category._label()} @ ({self.x!r}, {self.y!r}) "
                f"{self.w!r}x{self.h!r}{self._suffix()})")

    def __eq__(self, other) -> bool:
        return (isinstance(other, BoundingBox) and self._eq_base(other)
                and self.category == other.category
                and (self.x, self.y, self.w, self.h) == (other.x, other.y, other.w, other.h))

    def __hash__(self):
        return hash((self.category, self.x, self.y, self.w, self.h))

    __repr__ = __str__


class BoundingBox3D(Target):
    """Oriented 3-D box: center (m), size l/w/h (m), yaw in (-pi, pi]."""

    def __init__(self, category: Category, center, size, yaw: float,
                 confidence=None, suggested_action=None):
        super().__init__(confidence, suggested_action)
        if not isinstance(category, Category):
            raise ValueOutOfRange("BoundingBox3D.category must be a Category")
        center = tuple(float(v) for v in center)
        size = tuple(float(v) for v in size)
        if len(center) != 3 or len(size) != 3:
            raise ValueOutOfRange("center and size must be 3-tuples")
        if any(v < 0 for v in size):
            raise ValueOutOfRange(f"size components must be nonnegative, got {size}")
        yaw = float(yaw)
        if not -math.pi < yaw <= math.pi:
            raise ValueOutOfRange(f"yaw must lie in (-pi, pi], got {yaw!r}")
        self.category = category
        self.center = center
        self.size = size
        self.yaw = yaw

    def __str__(self) -> str:
        return (f"BoundingBox3D({self.category._label()} @ {self.center!r} "
                f"size={self.size!r} yaw={self.yaw:.3f}{self._suffix()})")

    def __eq__(self, other) -> bool:
        return (isinstance(other, BoundingBox3D) and self._eq_base(other)
                and self.category == other.category
                and self.center == other.center and self.size == other.size
                and self.yaw == other.yaw)

    __repr__ = __str__


POSE_ABSENT = (-1.0, -1.0)


class Pose(Target):
    """Ordered 2-D keypoints; absent keypoints hold the sentinel (-1, -1)."""

    def __init__(self, keypoints, confidence=None, suggested_action=None):
        super().__init__(confidence, suggested_action)
        kps = []
        for kp in keypoints:
            x, y = kp
            kps.append((float(x), float(y)))
        self.keypoints = tuple(kps)

    def present(self, i: int) -> bool:
        return self.keypoints[i] != POSE_ABSENT

    def __str__(self) -> str:
        parts = []
        for kp in self.keypoints:
            parts.append("absent" if kp == POSE_ABSENT else f"({kp[0]!r}, {kp[1]!r})")
        return f"Pose([{', '.join(parts)}]{self._suffix()})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Pose) and self._eq_base(other)
                and self.keypoints == other.keypoints)

    __repr__ = __str__


class Heatmap(Target):
    """Dense per-pixel class ids for multi-class segmentation."""

    def __init__(self, class_map, n_classes: int, confidence=None,
                 suggested_action=None):
        super().__init__(confidence, suggested_action)
        arr = np.asarray(class_map)
        if arr.ndim != 2:
            raise ValueOutOfRange(f"class_map must be 2-D, got shape {arr.shape}")
        if not np.issubdtype(arr.dtype, np.integer):
            if np.any(arr != np.floor(arr)):
                raise ValueOutOfRange("class_map must hold integers")
        arr = arr.astype(np.int64)
        n_classes = int(n_classes)
        if n_classes < 1:
            raise ValueOutOfRange("n_classes must be >= 1")
        if np.any(arr < 0) or np.any(arr >= n_classes):
            raise ValueOutOfRange(f"class ids must lie in [0, {n_classes})")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        self.class_map = arr
        self.n_classes = n_classes

    def __str__(self) -> str:
        h, w = self.class_map.shape
        return f"Heatmap({h}x{w}, {self.n_classes} classes{self._suffix()})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, Heatmap) and self._eq_base(other)
                and self.n_classes == other.n_classes
                and np.array_equal(self.class_map, other.class_map))

    __repr__ = __str__


class SpeechCommand(Target):
    """A recognised spoken command; the label is mandatory."""

    def __init__(self, command: Category, confidence=None, suggested_action=None):
        super().__init__(confidence, suggested_action)
        if not isinstance(command, Category):
            raise ValueOutOfRange("SpeechCommand.command must be a Category")
        if not command.description:
            raise ValueOutOfRange("SpeechCommand requires a nonempty description")
        self.command = command

    def __str__(self) -> str:
        return f"SpeechCommand('{self.command.description}'{self._suffix()})"

    def __eq__(self, other) -> bool:
        return (isinstance(other, SpeechCommand) and self._eq_base(other)
                and self.command == other.command)

    __repr__ = __str__


def to_string(target) -> str:
    """Deterministic one-line rendering; identical calls yield identical text."""
    return str(target)
