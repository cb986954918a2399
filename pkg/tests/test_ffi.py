"""FFI surface: cross-checks against in-process inference, handle semantics."""

import ctypes
import threading
from pathlib import Path

import numpy as np
import pytest

from perceptkit.engine import CANONICAL_FORMAT, Image, ImageFormat, open_image
from perceptkit.ffi import (
    BAD_HANDLE,
    BAD_INPUT,
    BAD_PACKAGE,
    NOT_FOUND,
    OK,
    OdrImageDesc,
    OdrLibrary,
    build_library,
    describe_image,
)
from perceptkit.learners import CentroidLearner

FIXTURES = Path(__file__).parent / "fixtures"
CENTROID_PKG = FIXTURES / "centroid_pkg"


@pytest.fixture(scope="session")
def lib() -> OdrLibrary:
    return OdrLibrary(build_library())


@pytest.fixture()
def loaded(lib):
    status, handle = lib.load(CENTROID_PKG)
    assert status == OK and handle != 0
    yield lib, handle
    lib.free(handle)


def random_probe_images(n=100, size=8, seed=555):
    rng = np.random.default_rng(seed)
    return [Image(rng.integers(0, 256, size=(1, size, size), dtype=np.uint8))
            for _ in range(n)]


class TestLoad:
    def test_fixture_package_loads(self, lib):
        status, handle = lib.load(CENTROID_PKG)
        assert status == OK
        assert handle != 0
        assert lib.free(handle) == OK

    def test_nonexistent_path(self, lib):
        status, handle = lib.load("/no/such/package")
        assert status == NOT_FOUND
        assert handle == 0  # out_handle untouched

    def test_tampered_package_named_in_error(self, lib, tmp_path):
        import shutil
        pkg = tmp_path / "pkg"
        shutil.copytree(CENTROID_PKG, pkg)
        blob = bytearray((pkg / "centroids.bin").read_bytes())
        blob[20] ^= 0x01
        (pkg / "centroids.bin").write_bytes(bytes(blob))
        status, _ = lib.load(pkg)
        assert status == BAD_PACKAGE
        assert "centroids.bin" in lib.last_error()

    def test_handles_never_reused(self, lib):
        _, first = lib.load(CENTROID_PKG)
        lib.free(first)
        _, second = lib.load(CENTROID_PKG)
        lib.free(second)
        assert second != first


class TestInfer:
    def test_matches_in_process_on_fixture_probes(self, loaded):
        lib, handle = loaded
        learner = CentroidLearner()
        learner.load(CENTROID_PKG)
        for name in ("probe_a.pgm", "probe_b.pgm"):
            img = open_image(FIXTURES / "images" / name)
            want = learner.infer(img)
            desc, keep = describe_image(img, CANONICAL_FORMAT)
            status, got = lib.infer(handle, desc)
            assert status == OK
            assert got.index == want.index
            assert got.confidence == pytest.approx(want.confidence, rel=1e-12)
            assert got.description.decode() == want.description

    def test_bit_match_on_100_random_probes(self, loaded):
        lib, handle = loaded
        learner = CentroidLearner()
        learner.load(CENTROID_PKG)
        for img in random_probe_images(100):
            want = learner.infer(img)
            desc, keep = describe_image(img, CANONICAL_FORMAT)
            status, got = lib.infer(handle, desc)
            assert status == OK
            assert got.index == want.index
            assert got.confidence == pytest.approx(want.confidence, rel=1e-12)

    @pytest.mark.parametrize("fmt", ImageFormat.all_formats(),
                             ids=lambda f: f"{f.layout.value}-{f.channel_order.value}-{f.dtype.value}")
    def test_every_external_format_canonicalizes_identically(self, loaded, fmt):
        lib, handle = loaded
        learner = CentroidLearner()
        learner.load(CENTROID_PKG)
        img = random_probe_images(1, seed=99)[0]
        want = learner.infer(img)
        desc, keep = describe_image(img, fmt)
        status, got = lib.infer(handle, desc)
        assert status == OK
        assert got.index == want.index
        assert got.confidence == pytest.approx(want.confidence, rel=1e-12)

    def test_color_formats_cross_check(self, lib, tmp_path):
        """A 3-channel model exercises HWC and BGR conversion paths."""
        rng = np.random.default_rng(4)
        from perceptkit.datasets import ListDataset
        from perceptkit.engine import Category
        imgs = [Image(rng.integers(0, 256, (3, 4, 4), dtype=np.uint8))
                for _ in range(6)]
        ds = ListDataset([(im, Category(i % 2, "xy"[i % 2]))
                          for i, im in enumerate(imgs)])
        learner = CentroidLearner()
        learner.fit(ds)
        learner.save(tmp_path / "pkg")
        status, handle = lib.load(tmp_path / "pkg")
        assert status == OK
        probe = Image(rng.integers(0, 256, (3, 4, 4), dtype=np.uint8))
        want = learner.infer(probe)
        for fmt in ImageFormat.all_formats():
            desc, keep = describe_image(probe, fmt)
            st, got = lib.infer(handle, desc)
            assert st == OK
            assert got.index == want.index
            assert got.confidence == pytest.approx(want.confidence, rel=1e-12)
        lib.free(handle)

    def test_freed_handle(self, lib):
        _, handle = lib.load(CENTROID_PKG)
        lib.free(handle)
        img = random_probe_images(1)[0]
        desc, keep = describe_image(img, CANONICAL_FORMAT)
        status, _ = lib.infer(handle, desc)
        assert status == BAD_HANDLE

    def test_zero_handle(self, lib):
        img = random_probe_images(1)[0]
        desc, keep = describe_image(img, CANONICAL_FORMAT)
        status, _ = lib.infer(0, desc)
        assert status == BAD_HANDLE

    def test_length_mismatch(self, loaded):
        lib, handle = loaded
        img = random_probe_images(1)[0]
        desc, keep = describe_image(img, CANONICAL_FORMAT)
        desc.len = desc.len - 1
        status, _ = lib.infer(handle, desc)
        assert status == BAD_INPUT

    def test_bad_codes(self, loaded):
        lib, handle = loaded
        img = random_probe_images(1)[0]
        desc, keep = describe_image(img, CANONICAL_FORMAT)
        desc.layout = 7
        status, _ = lib.infer(handle, desc)
        assert status == BAD_INPUT

    def test_wrong_dimension(self, loaded):
        lib, handle = loaded
        img = Image(np.zeros((1, 3, 3), dtype=np.uint8))  # model dim is 64
        desc, keep = describe_image(img, CANONICAL_FORMAT)
        status, _ = lib.infer(handle, desc)
        assert status == BAD_INPUT

    def test_f32_out_of_range(self, loaded):
        lib, handle = loaded
        bad = np.full(64, 1.5, dtype=np.float32).tobytes()
        raw = ctypes.create_string_buffer(bad, len(bad))
        desc = OdrImageDesc(data=ctypes.cast(raw, ctypes.c_void_p), len=len(bad),
                            width=8, height=8, channels=1, layout=0,
                            channel_order=0, dtype=1)
        status, _ = lib.infer(handle, desc)
        assert status == BAD_INPUT


class TestHandleLifecycle:
    def test_double_free(self, lib):
        _, handle = lib.load(CENTROID_PKG)
        assert lib.free(handle) == OK
        assert lib.free(handle) == BAD_HANDLE

    def test_last_error_nonempty_after_failure(self, lib):
        lib.load("/definitely/missing")
        assert lib.last_error() != ""

    def test_concurrent_distinct_handles(self, lib):
        handles = []
        for _ in range(8):
            status, h = lib.load(CENTROID_PKG)
            assert status == OK
            handles.append(h)
        img = random_probe_images(1)[0]
        errors = []

        def worker(h):
            try:
                for _ in range(25):
                    desc, keep = describe_image(img, CANONICAL_FORMAT)
                    status, _ = lib.infer(h, desc)
                    assert status == OK
                assert lib.free(h) == OK
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=worker, args=(h,)) for h in handles]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors

    def test_concurrent_same_handle_serialized(self, lib):
        _, handle = lib.load(CENTROID_PKG)
        img = random_probe_images(1)[0]
        results, errors = [], []

        def worker():
            try:
                desc, keep = describe_image(img, CANONICAL_FORMAT)
                status, out = lib.infer(handle, desc)
                results.append((status, out.index, out.confidence))
            except Exception as exc:  # pragma: no cover
                errors.append(exc)

        threads = [threading.Thread(target=worker) for _ in range(16)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert not errors
        assert len(set(results)) == 1
        assert results[0][0] == OK
        lib.free(handle)
