"""Foreign-function inference surface: native shim build and bindings."""

from .bindings import (
    BAD_HANDLE,
    BAD_INPUT,
    BAD_PACKAGE,
    CAPACITY,
    INTERNAL,
    NOT_FOUND,
    OK,
    OdrCategoryOut,
    OdrImageDesc,
    OdrLibrary,
    describe_image,
)
from .build import HEADER, build_library

__all__ = [
    "BAD_HANDLE", "BAD_INPUT", "BAD_PACKAGE", "CAPACITY", "HEADER", "INTERNAL",
    "NOT_FOUND", "OK", "OdrCategoryOut", "OdrImageDesc", "OdrLibrary",
    "build_library", "describe_image",
]
