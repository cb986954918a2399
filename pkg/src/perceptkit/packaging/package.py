"""Writing and validating model packages on disk."""

import hashlib
from pathlib import Path

from ..errors import (
    ChecksumMismatch,
    DestNotEmpty,
    MissingManifest,
    MissingPayload,
    PathEscape,
    SchemaViolation,
)
from .manifest import MANIFEST_FILENAME, Manifest, check_relative_path


def sha256_hex(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: Path, chunk: int = 1 << 16) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        while True:
            block = f.read(chunk)
            if not block:
                break
            h.update(block)
    return h.hexdigest()


def write_package(manifest: Manifest, payloads: dict, dest_dir) -> Path:
    """Materialize a package: payload files plus manifest.json with checksums.

    `payloads` maps each manifest model path to its bytes. Checksums are
    computed here; pre-filled checksums that disagree are an error rather
    than silently overwritten.
    """
    dest = Path(dest_dir)
    if dest.exists() and any(dest.iterdir()):
        raise DestNotEmpty(f"destination {dest} is not empty")

    try:
        for p in manifest.model_paths:
            check_relative_path(p)
    except SchemaViolation as exc:
        raise PathEscape(str(exc)) from exc

    if set(manifest.model_paths) != set(payloads):
        raise SchemaViolation(
            f"model_paths {sorted(manifest.model_paths)} do not match "
            f"payload keys {sorted(payloads)}")

    checksums = {}
    for rel, blob in payloads.items():
        digest = sha256_hex(bytes(blob))
        prefilled = manifest.checksums.get(rel)
        if prefilled is not None and prefilled != digest:
            raise ChecksumMismatch(
                f"{rel}: supplied checksum {prefilled} != computed {digest}")
        checksums[rel] = digest

    final = Manifest(
        name=manifest.name,
        model_format=manifest.model_format,
        model_paths=list(manifest.model_paths),
        checksums=checksums,
        classes=manifest.classes,
        optimized=manifest.optimized,
        optimizer_info=dict(manifest.optimizer_info),
        inference_params=dict(manifest.inference_params),
        metadata=dict(manifest.metadata),
    ).validate()

    dest.mkdir(parents=True, exist_ok=True)
    for rel, blob in payloads.items():
        target = dest / rel
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(bytes(blob))
    (dest / MANIFEST_FILENAME).write_text(final.to_json(), encoding="utf-8")
    return dest


def validate_package(path) -> Manifest:
    """Parse manifest.json and re-verify every payload checksum."""
    root = Path(path)
    mf = root / MANIFEST_FILENAME
    if not mf.is_file():
        raise MissingManifest(f"{root} has no {MANIFEST_FILENAME}")
    manifest = Manifest.from_json(mf.read_text(encoding="utf-8"))
    for rel in manifest.model_paths:
        if rel not in manifest.checksums:
            raise SchemaViolation(f"no checksum recorded for {rel!r}")
        payload = root / rel
        if not payload.is_file():
            raise MissingPayload(f"payload {rel!r} is missing from {root}")
        actual = sha256_file(payload)
        if actual != manifest.checksums[rel]:
            raise ChecksumMismatch(
                f"{rel}: stored {manifest.checksums[rel]}, actual {actual}")
    return manifest


def read_payload(package_root, rel_path: str) -> bytes:
    """Read one payload file after path sanity checks."""
    check_relative_path(rel_path)
    p = Path(package_root) / rel_path
    if not p.is_file():
        raise MissingPayload(f"payload {rel_path!r} is missing from {package_root}")
    return p.read_bytes()
