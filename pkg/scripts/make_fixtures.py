"""Regenerate the checked-in test fixtures under tests/fixtures/.

Deterministic by construction; run from the repo root:

    python scripts/make_fixtures.py
"""

import json
import shutil
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from perceptkit.datasets import open_image_folder  # noqa: E402
from perceptkit.engine import Image, save_image  # noqa: E402
from perceptkit.learners import CentroidLearner  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = ROOT / "tests" / "fixtures"

SIZE = 8  # fixture images are 8x8 grayscale


def blob_image(rng, cx, cy, brightness) -> Image:
    """A bright gaussian blob on a dark background; class = blob position."""
    yy, xx = np.mgrid[0:SIZE, 0:SIZE]
    field = brightness * np.exp(-((xx - cx) ** 2 + (yy - cy) ** 2) / 6.0)
    noise = rng.integers(0, 12, size=(SIZE, SIZE))
    return Image(np.clip(field + noise, 0, 255).astype(np.uint8)[None, :, :])


def make_dataset() -> Path:
    rng = np.random.default_rng(2024)
    root = FIXTURES / "dataset_folder"
    if root.exists():
        shutil.rmtree(root)
    # class "a": blob top-left; class "b": blob bottom-right
    for name, (cx, cy) in (("a", (2, 2)), ("b", (5, 5))):
        d = root / name
        d.mkdir(parents=True)
        for i in range(6):
            save_image(blob_image(rng, cx, cy, 200 + 5 * i), d / f"s{i}.pgm")
    return root


def make_probes():
    rng = np.random.default_rng(7)
    d = FIXTURES / "images"
    if d.exists():
        shutil.rmtree(d)
    d.mkdir(parents=True)
    save_image(blob_image(rng, 2, 2, 210), d / "probe_a.pgm")
    save_image(blob_image(rng, 5, 5, 210), d / "probe_b.pgm")
    color = np.zeros((3, SIZE, SIZE), dtype=np.uint8)
    color[0, :4, :4] = 255
    color[2, 4:, 4:] = 255
    save_image(Image(color), d / "color.ppm")


def make_centroid_package(dataset_root: Path):
    dest = FIXTURES / "centroid_pkg"
    if dest.exists():
        shutil.rmtree(dest)
    learner = CentroidLearner({"temperature": 1.0})
    stats = learner.fit(open_image_folder(dataset_root))
    learner.save(dest)
    print("centroid fixture stats:", stats)


def make_coco():
    d = FIXTURES / "coco"
    if d.exists():
        shutil.rmtree(d)
    d.mkdir(parents=True)
    rng = np.random.default_rng(31)
    for name in ("scene1.ppm", "scene2.ppm"):
        save_image(Image(rng.integers(0, 256, size=(3, SIZE, SIZE),
                                      dtype=np.uint8)), d / name)
    ann = {
        "images": [
            {"id": 1, "file_name": "scene1.ppm", "width": SIZE, "height": SIZE},
            {"id": 2, "file_name": "scene2.ppm", "width": SIZE, "height": SIZE},
        ],
        "annotations": [
            {"id": 1, "image_id": 1, "category_id": 1, "bbox": [1, 1, 3, 3]},
            {"id": 2, "image_id": 1, "category_id": 2, "bbox": [4, 4, 2, 2]},
            {"id": 3, "image_id": 2, "category_id": 1, "bbox": [0, 2, 5, 3]},
        ],
        "categories": [{"id": 1, "name": "robot"}, {"id": 2, "name": "human"}],
    }
    (d / "annotations.json").write_text(json.dumps(ann, indent=2) + "\n")


def make_panel_seeds():
    (FIXTURES / "panel_seeds.json").write_text(
        json.dumps(list(range(1, 21))) + "\n")


def main():
    FIXTURES.mkdir(parents=True, exist_ok=True)
    ds_root = make_dataset()
    make_probes()
    make_centroid_package(ds_root)
    make_coco()
    make_panel_seeds()
    print("fixtures written to", FIXTURES)


if __name__ == "__main__":
    main()
