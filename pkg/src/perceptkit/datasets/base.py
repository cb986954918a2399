"""Dataset abstractions: index-addressable iterators and format descriptors."""

from abc import ABC, abstractmethod
from dataclasses import dataclass

from ..errors import SchemaViolation

DATASET_TYPES = ("image_folder", "coco_subset")


class DatasetIterator(ABC):
    """Deterministic, index-addressable (data, target) pairs.

    get(i) must return structurally equal pairs on repeated calls; readers
    may call it concurrently from multiple threads.
    """

    @abstractmethod
    def __len__(self) -> int:
        ...

    @abstractmethod
    def get(self, i: int):
        ...

    def __getitem__(self, i: int):
        return self.get(i)

    def __iter__(self):
        for i in range(len(self)):
            yield self.get(i)


@dataclass(frozen=True)
class ExternalDataset:
    """Descriptor for a well-known on-disk dataset format."""

    path: str
    dataset_type: str

    def __post_init__(self):
        if self.dataset_type not in DATASET_TYPES:
            raise SchemaViolation(
                f"dataset_type must be one of {DATASET_TYPES}, got {self.dataset_type!r}")

    def open(self) -> DatasetIterator:
        from .coco import open_coco_subset
        from .image_folder import open_image_folder
        if self.dataset_type == "image_folder":
            return open_image_folder(self.path)
        return open_coco_subset(self.path)


class ListDataset(DatasetIterator):
    """In-memory pairs; handy for tests and for fitting on computed data."""

    def __init__(self, pairs):
        self._pairs = list(pairs)

    def __len__(self) -> int:
        return len(self._pairs)

    def get(self, i: int):
        return self._pairs[i]
