"""A minimal COCO-style detection dataset.

Supported schema: top-level "images" (id, file_name, width, height),
"annotations" (id, image_id, category_id, bbox [x, y, w, h]) and
"categories" (id, name). Image files live beside the JSON. Items are
ordered by ascending image id; each target is the image's boxes in
ascending annotation id.
"""

import json
from pathlib import Path

from ..engine import BoundingBox, Category, open_image
from ..errors import DanglingReference, SchemaViolation
from .base import DatasetIterator


def _field(obj: dict, key: str, where: str):
    if key not in obj:
        raise SchemaViolation(f"{where} is missing '{key}'")
    return obj[key]


class CocoSubsetDataset(DatasetIterator):

    def __init__(self, json_path):
        self._root = Path(json_path).parent
        try:
            raw = json.loads(Path(json_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SchemaViolation(f"cannot parse {json_path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise SchemaViolation("annotation file must hold a JSON object")
        for key in ("images", "annotations", "categories"):
            if not isinstance(raw.get(key), list):
                raise SchemaViolation(f"top-level '{key}' must be a list")

        categories = {}
        for cat in raw["categories"]:
            cid = _field(cat, "id", "category")
            categories[cid] = str(_field(cat, "name", "category"))
        # densify sparse category ids: class index = rank of id, ascending
        class_index = {cid: rank for rank, cid in enumerate(sorted(categories))}

        images = {}
        for img in raw["images"]:
            iid = _field(img, "id", "image")
            if iid in images:
                raise SchemaViolation(f"duplicate image id {iid}")
            _field(img, "width", "image"), _field(img, "height", "image")
            images[iid] = str(_field(img, "file_name", "image"))

        boxes_by_image: dict = {iid: [] for iid in images}
        for ann in raw["annotations"]:
            iid = _field(ann, "image_id", "annotation")
            cid = _field(ann, "category_id", "annotation")
            bbox = _field(ann, "bbox", "annotation")
            if iid not in images:
                raise DanglingReference(f"annotation references missing image id {iid}")
            if cid not in categories:
                raise DanglingReference(f"annotation references missing category id {cid}")
            if not (isinstance(bbox, list) and len(bbox) == 4):
                raise SchemaViolation(f"bbox must be [x, y, w, h], got {bbox!r}")
            ann_id = ann.get("id", len(boxes_by_image[iid]))
            box = BoundingBox(Category(class_index[cid], categories[cid]),
                              *(float(v) for v in bbox))
            boxes_by_image[iid].append((ann_id, box))

        self._items = []
        for iid in sorted(images):
            boxes = [b for _, b in sorted(boxes_by_image[iid], key=lambda p: p[0])]
            self._items.append((images[iid], boxes))
        self.class_names = [categories[c] for c in sorted(categories)]

    def __len__(self) -> int:
        return len(self._items)

    def get(self, i: int):
        file_name, boxes = self._items[i]
        return open_image(self._root / file_name), list(boxes)


def open_coco_subset(json_path) -> CocoSubsetDataset:
    return CocoSubsetDataset(json_path)
