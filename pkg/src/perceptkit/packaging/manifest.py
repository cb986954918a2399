"""The trained-model manifest: schema, validation, JSON (de)serialization."""

import json
from dataclasses import dataclass, field

from ..errors import SchemaViolation

SCHEMA_VERSION = 1
MODEL_FORMATS = ("onnx", "native")
MANIFEST_FILENAME = "manifest.json"

_SCALAR = (int, float, str, bool)


def check_relative_path(path: str) -> str:
    """Reject absolute paths, parent escapes and non-'/' separators."""
    if not path or not isinstance(path, str):
        raise SchemaViolation("model path must be a nonempty string")
    if "\\" in path:
        raise SchemaViolation(f"model path {path!r} must use '/' separators")
    if path.startswith("/"):
        raise SchemaViolation(f"model path {path!r} must be relative")
    parts = path.split("/")
    if ".." in parts:
        raise SchemaViolation(f"model path {path!r} escapes the package root")
    if any(p == "" for p in parts):
        raise SchemaViolation(f"model path {path!r} has empty components")
    return path


@dataclass
class Manifest:
    """Metadata describing a model package's payload files."""

    name: str
    model_format: str
    model_paths: list
    checksums: dict = field(default_factory=dict)
    classes: list | None = None
    optimized: bool = False
    optimizer_info: dict = field(default_factory=dict)
    inference_params: dict = field(default_factory=dict)
    metadata: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def validate(self) -> "Manifest":
        if not isinstance(self.name, str) or not self.name:
            raise SchemaViolation("manifest 'name' must be a nonempty string")
        if self.schema_version != SCHEMA_VERSION:
            raise SchemaViolation(
                f"unsupported schema_version {self.schema_version!r}, expected {SCHEMA_VERSION}")
        if self.model_format not in MODEL_FORMATS:
            raise SchemaViolation(
                f"model_format must be one of {MODEL_FORMATS}, got {self.model_format!r}")
        if not isinstance(self.model_paths, list):
            raise SchemaViolation("'model_paths' must be a list")
        for p in self.model_paths:
            check_relative_path(p)
        if len(set(self.model_paths)) != len(self.model_paths):
            raise SchemaViolation("'model_paths' contains duplicates")
        if not isinstance(self.checksums, dict):
            raise SchemaViolation("'checksums' must be a map")
        for p, digest in self.checksums.items():
            if not (isinstance(digest, str) and len(digest) == 64
                    and all(c in "0123456789abcdef" for c in digest)):
                raise SchemaViolation(f"checksum for {p!r} is not lowercase SHA-256 hex")
        if self.classes is not None:
            if (not isinstance(self.classes, list)
                    or not all(isinstance(c, str) for c in self.classes)):
                raise SchemaViolation("'classes' must be a list of strings")
        if not isinstance(self.optimized, bool):
            raise SchemaViolation("'optimized' must be a bool")
        for key, label in ((self.optimizer_info, "optimizer_info"),
                           (self.metadata, "metadata")):
            if not isinstance(key, dict) or not all(
                    isinstance(k, str) and isinstance(v, str) for k, v in key.items()):
                raise SchemaViolation(f"'{label}' must map strings to strings")
        if not isinstance(self.inference_params, dict) or not all(
                isinstance(k, str) and isinstance(v, _SCALAR)
                for k, v in self.inference_params.items()):
            raise SchemaViolation("'inference_params' must map strings to scalars")
        return self

    def to_json_dict(self) -> dict:
        return {
            "name": self.name,
            "schema_version": self.schema_version,
            "model_format": self.model_format,
            "model_paths": list(self.model_paths),
            "checksums": dict(self.checksums),
            "classes": None if self.classes is None else list(self.classes),
            "optimized": self.optimized,
            "optimizer_info": dict(self.optimizer_info),
            "inference_params": dict(self.inference_params),
            "metadata": dict(self.metadata),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_json_dict(cls, raw: dict) -> "Manifest":
        if not isinstance(raw, dict):
            raise SchemaViolation("manifest must be a JSON object")
        known = {"name", "schema_version", "model_format", "model_paths", "checksums",
                 "classes", "optimized", "optimizer_info", "inference_params", "metadata"}
        extra = set(raw) - known
        if extra:
            raise SchemaViolation(f"unknown manifest fields: {sorted(extra)}")
        missing = {"name", "model_format", "model_paths", "checksums"} - set(raw)
        if missing:
            raise SchemaViolation(f"manifest is missing fields: {sorted(missing)}")
        m = cls(
            name=raw["name"],
            model_format=raw["model_format"],
            model_paths=raw["model_paths"],
            checksums=raw["checksums"],
            classes=raw.get("classes"),
            optimized=raw.get("optimized", False),
            optimizer_info=raw.get("optimizer_info", {}),
            inference_params=raw.get("inference_params", {}),
            metadata=raw.get("metadata", {}),
            schema_version=raw.get("schema_version", SCHEMA_VERSION),
        )
        return m.validate()

    @classmethod
    def from_json(cls, text: str) -> "Manifest":
        try:
            raw = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaViolation(f"manifest is not valid JSON: {exc}") from exc
        return cls.from_json_dict(raw)
