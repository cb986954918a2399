"""Compile the native inference shim into a shared library.

Also runnable as a module for foreign build scripts:

    python -m perceptkit.ffi.build --out /path/to/libodrcentroid.so
"""

import argparse
import os
import shutil
import subprocess
import sys
from pathlib import Path

NATIVE_DIR = Path(__file__).parent / "native"
SOURCES = [NATIVE_DIR / "odr_centroid.cpp"]
HEADER = NATIVE_DIR / "odr_centroid.h"
LIB_NAME = "libodrcentroid.so"


class BuildError(RuntimeError):
    pass


def _compiler() -> str:
    for candidate in (os.environ.get("CXX"), "c++", "g++", "clang++"):
        if candidate and shutil.which(candidate):
            return candidate
    raise BuildError("no C++ compiler found (set $CXX)")


def _extra_include_dirs() -> list:
    """Directories that may carry the single-header JSON dependency."""
    out = []
    for candidate in (Path.cwd() / "vendor", Path("/opt/vendor")):
        if (candidate / "json.hpp").is_file():
            out.append(str(candidate))
    return out


def build_library(out_dir=None, force: bool = False) -> Path:
    """Build (or reuse) the shared library; returns its path."""
    out_dir = Path(out_dir) if out_dir else NATIVE_DIR / "_build"
    out_dir.mkdir(parents=True, exist_ok=True)
    target = out_dir / LIB_NAME

    newest_src = max(p.stat().st_mtime for p in SOURCES + [HEADER])
    if target.is_file() and not force and target.stat().st_mtime >= newest_src:
        return target

    cmd = [_compiler(), "-std=c++17", "-O2", "-fPIC", "-shared",
           "-I", str(NATIVE_DIR)]
    for inc in _extra_include_dirs():
        cmd += ["-I", inc]
    cmd += [str(s) for s in SOURCES] + ["-o", str(target), "-lcrypto"]

    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise BuildError(f"compilation failed:\n{' '.join(cmd)}\n{proc.stderr}")
    return target


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="build the native inference shim")
    parser.add_argument("--out", default=None,
                        help="output directory (default: alongside the sources)")
    parser.add_argument("--force", action="store_true")
    args = parser.parse_args(argv)
    try:
        print(build_library(args.out, force=args.force))
    except BuildError as exc:
        print(exc, file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
