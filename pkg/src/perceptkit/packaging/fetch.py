"""Fetching model packages into a content-addressed local cache.

Cache layout: ``cache_dir/<sha256[:2]>/<sha256>/`` holds the materialized
package. A small ``index.json`` at the cache root maps source URIs to
content digests so repeated fetches are pure cache hits (no network, no
source reads). Concurrent fetches of the same URI serialize on a file
lock; losers wait and reuse the winner's entry.
"""

import hashlib
import json
import os
import shutil
import tempfile
import urllib.error
import urllib.parse
import urllib.request
import zipfile
from pathlib import Path

from filelock import FileLock

from ..errors import (
    DigestMismatch,
    InvalidArchive,
    TransferFailed,
    UnsupportedScheme,
)
from .package import sha256_file, validate_package

_INDEX = "index.json"


def _digest_directory(src: Path) -> str:
    """Content digest of a package directory: file paths and file hashes."""
    h = hashlib.sha256()
    for f in sorted(p for p in src.rglob("*") if p.is_file()):
        rel = f.relative_to(src).as_posix()
        h.update(rel.encode("utf-8"))
        h.update(b"\0")
        h.update(sha256_file(f).encode("ascii"))
        h.update(b"\n")
    return h.hexdigest()


def _entry_dir(cache_dir: Path, digest: str) -> Path:
    return cache_dir / digest[:2] / digest


def _read_index(cache_dir: Path) -> dict:
    p = cache_dir / _INDEX
    if not p.is_file():
        return {}
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        return {}


def _index_lock(cache_dir: Path) -> FileLock:
    return FileLock(str(cache_dir / "locks" / "index.lock"))


def _mutate_index(cache_dir: Path, uri: str, digest: str | None) -> None:
    """Read-modify-write the URI index under its own lock. Writers of
    different URIs run concurrently, so the update must be serialized and
    the temp file unique."""
    with _index_lock(cache_dir):
        index = _read_index(cache_dir)
        if digest is None:
            index.pop(uri, None)
        else:
            index[uri] = digest
        fd, tmp_name = tempfile.mkstemp(prefix=_INDEX + ".", dir=cache_dir)
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(json.dumps(index, indent=2, sort_keys=True))
        os.replace(tmp_name, cache_dir / _INDEX)


def _extract_zip(archive: Path, dest: Path) -> None:
    if not zipfile.is_zipfile(archive):
        raise InvalidArchive(f"{archive.name} is not a zip archive")
    with zipfile.ZipFile(archive) as zf:
        for member in zf.namelist():
            mp = Path(member)
            if mp.is_absolute() or ".." in mp.parts:
                raise InvalidArchive(f"archive member {member!r} escapes the root")
        zf.extractall(dest)


def _package_root(extracted: Path) -> Path:
    """Descend into a single wrapping directory, a common zip convention."""
    entries = list(extracted.iterdir())
    if len(entries) == 1 and entries[0].is_dir():
        return entries[0]
    return extracted


def _install_entry(cache_dir: Path, digest: str, staged_root: Path) -> Path:
    entry = _entry_dir(cache_dir, digest)
    if entry.exists():
        return entry
    entry.parent.mkdir(parents=True, exist_ok=True)
    # distinct URIs can carry identical content; each install stages in its
    # own directory and the rename either publishes or loses to a racer
    work = Path(tempfile.mkdtemp(prefix=digest[:8] + ".", dir=entry.parent))
    try:
        staging = work / "pkg"
        shutil.copytree(staged_root, staging)
        try:
            staging.replace(entry)
        except OSError:
            if not entry.exists():
                raise
    finally:
        shutil.rmtree(work, ignore_errors=True)
    return entry


def fetch_package(uri: str, cache_dir, expected_sha256: str | None = None) -> Path:
    """Materialize the package at `uri` in the cache and return its path.

    file:// URIs may name a package directory or a zip archive; http(s)
    URIs must name a zip archive. `expected_sha256`, when given, must
    match the content digest or the cache entry is discarded.
    """
    cache_dir = Path(cache_dir)
    cache_dir.mkdir(parents=True, exist_ok=True)
    scheme = urllib.parse.urlparse(uri).scheme
    if scheme not in ("file", "http", "https"):
        raise UnsupportedScheme(f"unsupported URI scheme {scheme!r} in {uri!r}")

    locks = cache_dir / "locks"
    locks.mkdir(exist_ok=True)
    uri_key = hashlib.sha256(uri.encode("utf-8")).hexdigest()

    with FileLock(str(locks / f"{uri_key}.lock")):
        digest = _read_index(cache_dir).get(uri)
        if digest is not None:
            entry = _entry_dir(cache_dir, digest)
            if entry.is_dir():
                if expected_sha256 is not None and digest != expected_sha256:
                    shutil.rmtree(entry, ignore_errors=True)
                    _mutate_index(cache_dir, uri, None)
                    raise DigestMismatch(
                        f"cached digest {digest} != expected {expected_sha256}")
                return entry

        with tempfile.TemporaryDirectory(prefix="pkfetch-") as work:
            work = Path(work)
            if scheme == "file":
                src = Path(urllib.request.url2pathname(urllib.parse.urlparse(uri).path))
                if not src.exists():
                    raise TransferFailed(f"{src} does not exist")
                if src.is_dir():
                    digest = _digest_directory(src)
                    staged = src
                else:
                    digest = sha256_file(src)
                    staged = work / "extracted"
                    staged.mkdir()
                    _extract_zip(src, staged)
                    staged = _package_root(staged)
            else:
                archive = work / "archive.zip"
                try:
                    with urllib.request.urlopen(uri) as resp, open(archive, "wb") as out:
                        shutil.copyfileobj(resp, out)
                except (urllib.error.URLError, OSError) as exc:
                    raise TransferFailed(f"fetching {uri} failed: {exc}") from exc
                digest = sha256_file(archive)
                staged = work / "extracted"
                staged.mkdir()
                _extract_zip(archive, staged)
                staged = _package_root(staged)

            if expected_sha256 is not None and digest != expected_sha256:
                raise DigestMismatch(
                    f"content digest {digest} != expected {expected_sha256}")

            validate_package(staged)
            entry = _install_entry(cache_dir, digest, staged)

        _mutate_index(cache_dir, uri, digest)
        return entry
