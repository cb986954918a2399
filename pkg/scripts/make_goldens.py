"""Regenerate the CLI golden files under tests/fixtures/golden/.

Run after make_fixtures.py, from the repo root:

    python scripts/make_goldens.py
"""

import contextlib
import io
import shutil
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "src"))

from perceptkit import cli  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures"
GOLDEN = FIXTURES / "golden"


def run(argv) -> str:
    out = io.StringIO()
    with contextlib.redirect_stdout(out):
        code = cli.main(argv)
    assert code == 0, f"{argv} exited {code}"
    return out.getvalue()


def main():
    if GOLDEN.exists():
        shutil.rmtree(GOLDEN)
    GOLDEN.mkdir(parents=True)

    (GOLDEN / "validate_centroid.txt").write_text(
        run(["validate", str(FIXTURES / "centroid_pkg")]))

    (GOLDEN / "infer_probe_a.txt").write_text(
        run(["infer", "--model", str(FIXTURES / "centroid_pkg"),
             "--learner", "centroid",
             "--input", str(FIXTURES / "images" / "probe_a.pgm")]))

    (GOLDEN / "infer_probe_b.txt").write_text(
        run(["infer", "--model", str(FIXTURES / "centroid_pkg"),
             "--learner", "centroid",
             "--input", str(FIXTURES / "images" / "probe_b.pgm")]))

    trace = GOLDEN / "sim_seed7_trace.jsonl"
    (GOLDEN / "sim_seed7.txt").write_text(
        run(["sim", "--seed", "7", "--steps", "200", "--noise", "0",
             "--trace", str(trace)]))

    (GOLDEN / "dataset_inspect.txt").write_text(
        run(["dataset-inspect", str(FIXTURES / "dataset_folder"),
             "--type", "image_folder"]))

    print("golden files written to", GOLDEN)


if __name__ == "__main__":
    main()
