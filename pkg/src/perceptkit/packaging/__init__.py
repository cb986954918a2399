"""Checksummed model packages: manifest + payload files + hub fetching."""

from .fetch import fetch_package
from .manifest import MANIFEST_FILENAME, MODEL_FORMATS, SCHEMA_VERSION, Manifest
from .package import read_payload, sha256_file, sha256_hex, validate_package, write_package

__all__ = [
    "MANIFEST_FILENAME", "MODEL_FORMATS", "Manifest", "SCHEMA_VERSION",
    "fetch_package", "read_payload", "sha256_file", "sha256_hex",
    "validate_package", "write_package",
]
