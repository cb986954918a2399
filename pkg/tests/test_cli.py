"""CLI: pipeline behaviour, exit codes, golden stdout."""

import json
from pathlib import Path

import pytest

from perceptkit import cli
from perceptkit.engine import BoundingBox, Category
from perceptkit.learners import Learner, LearnerState, registry
from perceptkit.packaging import Manifest, read_payload, validate_package, write_package

FIXTURES = Path(__file__).parent / "fixtures"
GOLDEN = FIXTURES / "golden"
CENTROID_PKG = str(FIXTURES / "centroid_pkg")
PROBE_A = str(FIXTURES / "images" / "probe_a.pgm")


class BoxOracle(Learner):
    """Test-only learner that replays boxes stored in its package."""

    def __init__(self, hyperparams=None):
        super().__init__()
        self._boxes = []
        self._classes = []

    @property
    def classes(self):
        return list(self._classes)

    def fit(self, dataset):
        raise NotImplementedError

    def eval(self, dataset):
        raise NotImplementedError

    def infer(self, data):
        self._require_ready()
        return list(self._boxes)

    def save(self, path):
        self._require_ready()
        blob = json.dumps([[b.category.index, b.x, b.y, b.w, b.h]
                           for b in self._boxes]).encode()
        write_package(Manifest(name="box-oracle", model_format="native",
                               model_paths=["boxes.json"],
                               classes=list(self._classes)),
                      {"boxes.json": blob}, path)

    def load(self, path):
        manifest = validate_package(path)
        raw = json.loads(read_payload(path, "boxes.json"))
        self._classes = list(manifest.classes or [])
        self._boxes = [BoundingBox(Category(idx, self._classes[idx]), x, y, w, h)
                       for idx, x, y, w, h in raw]
        self._state = LearnerState.TRAINED


if "box-oracle" not in registry.names():
    registry.register("box-oracle", BoxOracle)


def run_cli(argv, capsys):
    try:
        code = cli.main(argv)
    except SystemExit as exc:  # argparse usage failures
        code = exc.code
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGoldenPipeline:
    def test_package_then_validate(self, tmp_path, monkeypatch, capsys):
        payloads = tmp_path / "payloads"
        payloads.mkdir()
        (payloads / "model.bin").write_bytes(b"\x01\x02\x03")
        (tmp_path / "manifest.json").write_text(json.dumps({
            "name": "demo", "model_format": "native",
            "model_paths": ["model.bin"]}))
        monkeypatch.chdir(tmp_path)

        code, out, _ = run_cli(["package", "--manifest", "manifest.json",
                                "--payload-dir", "payloads",
                                "--out", "out_pkg"], capsys)
        assert code == 0
        assert out == "out_pkg\n"

        code, out, _ = run_cli(["validate", "out_pkg"], capsys)
        assert code == 0
        assert out == "name=demo\nformat=native\npaths=model.bin\n"

    def test_validate_golden(self, capsys):
        code, out, _ = run_cli(["validate", CENTROID_PKG], capsys)
        assert code == 0
        assert out == (GOLDEN / "validate_centroid.txt").read_text()

    @pytest.mark.parametrize("probe,golden", [
        ("probe_a.pgm", "infer_probe_a.txt"),
        ("probe_b.pgm", "infer_probe_b.txt"),
    ])
    def test_infer_golden(self, capsys, probe, golden):
        code, out, _ = run_cli(["infer", "--model", CENTROID_PKG,
                                "--learner", "centroid",
                                "--input", str(FIXTURES / "images" / probe)], capsys)
        assert code == 0
        assert out == (GOLDEN / golden).read_text()

    def test_infer_equals_in_process_rendering(self, capsys):
        from perceptkit.engine import open_image, to_string
        from perceptkit.learners import CentroidLearner
        learner = CentroidLearner()
        learner.load(CENTROID_PKG)
        expected = to_string(learner.infer(open_image(PROBE_A))) + "\n"
        _, out, _ = run_cli(["infer", "--model", CENTROID_PKG,
                             "--learner", "centroid", "--input", PROBE_A], capsys)
        assert out == expected

    def test_bench_passes_on_fixture(self, tmp_path, capsys):
        report_path = tmp_path / "report.json"
        code, out, _ = run_cli(["bench", "--model", CENTROID_PKG,
                                "--learner", "centroid", "--input", PROBE_A,
                                "--warmup", "2", "--iters", "30",
                                "--json", str(report_path)], capsys)
        assert code == 0
        assert out == "pass_fps=true\npass_mem=true\n"
        report = json.loads(report_path.read_text())
        assert report["fps"] > 25.0
        assert report["pass_mem"] is True
        assert report["peak_mem_bytes"] < (1 << 30)

    def test_bench_unattainable_budget_exits_3(self, tmp_path, capsys):
        code, _, err = run_cli(["bench", "--model", CENTROID_PKG,
                                "--learner", "centroid", "--input", PROBE_A,
                                "--warmup", "0", "--iters", "5",
                                "--min-fps", "1e9",
                                "--json", str(tmp_path / "r.json")], capsys)
        assert code == 3
        assert "fps" in err

    def test_bench_mem_severity_modes(self, tmp_path, capsys):
        base = ["bench", "--model", CENTROID_PKG, "--learner", "centroid",
                "--input", PROBE_A, "--warmup", "0", "--iters", "5",
                "--max-mem", "1024"]  # absurdly small: always violated
        code, _, err = run_cli(base + ["--json", str(tmp_path / "strict.json")],
                               capsys)
        assert code == 3  # default severity is strict
        assert "budget violation: mem" in err

        code, _, err = run_cli(base + ["--mem-severity", "warn",
                                       "--json", str(tmp_path / "warn.json")],
                               capsys)
        assert code == 0  # reported, not enforced
        assert "budget warning: mem" in err

    def test_sim_golden(self, tmp_path, capsys):
        trace = tmp_path / "trace.jsonl"
        code, out, _ = run_cli(["sim", "--seed", "7", "--steps", "200",
                                "--noise", "0", "--trace", str(trace)], capsys)
        assert code == 0
        assert out == (GOLDEN / "sim_seed7.txt").read_text()
        assert trace.read_bytes() == (GOLDEN / "sim_seed7_trace.jsonl").read_bytes()

    def test_sim_repeated_runs_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        argv = ["sim", "--seed", "3", "--steps", "50", "--noise", "0.01"]
        assert run_cli(argv + ["--trace", str(a)], capsys)[0] == 0
        assert run_cli(argv + ["--trace", str(b)], capsys)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_dataset_inspect_golden(self, capsys):
        code, out, _ = run_cli(["dataset-inspect", str(FIXTURES / "dataset_folder"),
                                "--type", "image_folder"], capsys)
        assert code == 0
        assert out == (GOLDEN / "dataset_inspect.txt").read_text()

    def test_infer_draw_writes_annotated_image(self, tmp_path, capsys):
        from perceptkit.engine import draw_bounding_boxes, open_image

        oracle = BoxOracle()
        oracle._classes = ["robot", "human"]
        oracle._boxes = [
            BoundingBox(Category(0, "robot"), 1, 1, 3, 3),
            BoundingBox(Category(1, "human"), 4, 4, 2, 2),
        ]
        oracle._state = LearnerState.TRAINED
        pkg = tmp_path / "boxes_pkg"
        oracle.save(pkg)

        source = str(FIXTURES / "images" / "color.ppm")
        out = tmp_path / "annotated.ppm"
        code, stdout, _ = run_cli(["infer", "--model", str(pkg),
                                   "--learner", "box-oracle",
                                   "--input", source,
                                   "--draw", str(out)], capsys)
        assert code == 0
        assert len(stdout.splitlines()) == 2
        assert stdout.splitlines()[0].startswith("BoundingBox(0 'robot'")

        expected = draw_bounding_boxes(open_image(source), oracle._boxes,
                                       oracle.classes)
        assert open_image(out) == expected

    def test_fit_then_infer(self, tmp_path, capsys):
        out_pkg = tmp_path / "trained"
        code, out, err = run_cli(["fit", "--learner", "centroid",
                                  "--data", str(FIXTURES / "dataset_folder"),
                                  "--data-type", "image_folder",
                                  "--out", str(out_pkg),
                                  "--hp", "temperature=2.0"], capsys)
        assert code == 0
        assert out == f"{out_pkg}\n"
        assert "train_accuracy" in err
        code, out, _ = run_cli(["infer", "--model", str(out_pkg),
                                "--learner", "centroid", "--input", PROBE_A], capsys)
        assert code == 0
        assert out.startswith("Category(0 'a'")


class TestExitCodes:
    def test_missing_required_flag_is_usage(self, capsys):
        code, _, err = run_cli(["package", "--payload-dir", "d", "--out", "p"],
                               capsys)
        assert code == 2
        assert "usage" in err

    def test_unknown_command_is_usage(self, capsys):
        assert run_cli(["frobnicate"], capsys)[0] == 2

    def test_steps_zero_is_usage(self, tmp_path, capsys):
        code, _, _ = run_cli(["sim", "--seed", "1", "--steps", "0",
                              "--trace", str(tmp_path / "t.jsonl")], capsys)
        assert code == 2

    def test_operational_error_names_module_error(self, tmp_path, capsys):
        pkg = tmp_path / "pkg"
        import shutil
        shutil.copytree(CENTROID_PKG, pkg)
        blob = bytearray((pkg / "centroids.bin").read_bytes())
        blob[-1] ^= 0xFF
        (pkg / "centroids.bin").write_bytes(bytes(blob))
        code, _, err = run_cli(["validate", str(pkg)], capsys)
        assert code == 1
        assert "ChecksumMismatch" in err
        assert "centroids.bin" in err

    def test_infer_missing_input_is_operational(self, capsys):
        code, _, err = run_cli(["infer", "--model", CENTROID_PKG,
                                "--learner", "centroid",
                                "--input", "missing.pgm"], capsys)
        assert code == 1
        assert "FileNotFound" in err

    def test_draw_on_category_output_is_usage(self, tmp_path, capsys):
        code, _, err = run_cli(["infer", "--model", CENTROID_PKG,
                                "--learner", "centroid", "--input", PROBE_A,
                                "--draw", str(tmp_path / "out.ppm")], capsys)
        assert code == 2
        assert "box outputs" in err

    def test_unknown_learner_is_operational(self, capsys):
        code, _, err = run_cli(["infer", "--model", CENTROID_PKG,
                                "--learner", "unicorn", "--input", PROBE_A],
                               capsys)
        assert code == 1
        assert "UnknownLearner" in err

    def test_malformed_package_bench_is_operational(self, tmp_path, capsys):
        code, _, err = run_cli(["bench", "--model", str(tmp_path),
                                "--learner", "centroid", "--input", PROBE_A,
                                "--json", str(tmp_path / "r.json")], capsys)
        assert code == 1
        assert "MissingManifest" in err


def test_unreachable_server_is_operational_error(capsys):
    code, _, err = run_cli(["--server", "http://127.0.0.1:9",
                            "validate", CENTROID_PKG], capsys)
    assert code == 1
    assert "TransferFailed" in err


def test_remote_server_mode(capsys):
    """The same commands work against a real HTTP server via --server."""
    import socket
    import threading
    import time

    import uvicorn

    from perceptkit.service import create_app

    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]

    config = uvicorn.Config(create_app(), host="127.0.0.1", port=port,
                            log_level="critical")
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        assert time.time() < deadline, "server did not start"
        time.sleep(0.02)
    try:
        url = f"http://127.0.0.1:{port}"
        code, out, _ = run_cli(["--server", url, "validate", CENTROID_PKG], capsys)
        assert code == 0
        assert out == (GOLDEN / "validate_centroid.txt").read_text()

        code, out, _ = run_cli(["--server", url, "infer", "--model", CENTROID_PKG,
                                "--learner", "centroid", "--input", PROBE_A],
                               capsys)
        assert code == 0
        assert out == (GOLDEN / "infer_probe_a.txt").read_text()
    finally:
        server.should_exit = True
        thread.join(timeout=5)


def test_stdout_is_line_oriented_and_stable(capsys):
    for _ in range(2):
        code, out, _ = run_cli(["validate", CENTROID_PKG], capsys)
        assert code == 0
        assert out.endswith("\n")
    a = run_cli(["infer", "--model", CENTROID_PKG, "--learner", "centroid",
                 "--input", PROBE_A], capsys)[1]
    b = run_cli(["infer", "--model", CENTROID_PKG, "--learner", "centroid",
                 "--input", PROBE_A], capsys)[1]
    assert a == b
