"""Directory-per-class image datasets.

Class indices follow ascending lexicographic directory order (UTF-8
codepoints), and items are ordered by (class directory, filename), so a
dataset enumerates identically on every run and every machine.
"""

from pathlib import Path

from ..engine import Category, open_image
from ..errors import EmptyDataset, PerceptkitError, UnreadableImage
from .base import DatasetIterator

_EXTENSIONS = {".ppm", ".pgm"}


class ImageFolderDataset(DatasetIterator):

    def __init__(self, root):
        root = Path(root)
        class_dirs = sorted((d for d in root.iterdir() if d.is_dir()),
                            key=lambda d: d.name) if root.is_dir() else []
        self.class_names = [d.name for d in class_dirs]
        self._items = []
        for index, d in enumerate(class_dirs):
            files = sorted(f for f in d.iterdir()
                           if f.is_file() and f.suffix.lower() in _EXTENSIONS)
            self._items.extend((f, index) for f in files)
        if not self._items:
            raise EmptyDataset(f"no images under {root}")

    def __len__(self) -> int:
        return len(self._items)

    def get(self, i: int):
        path, index = self._items[i]
        try:
            img = open_image(path)
        except PerceptkitError as exc:
            raise UnreadableImage(f"{path}: {exc}") from exc
        return img, Category(index, self.class_names[index])


def open_image_folder(root) -> ImageFolderDataset:
    return ImageFolderDataset(root)
