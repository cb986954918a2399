"""Dataset iterators, external-format loaders and deterministic splits."""

from .base import DATASET_TYPES, DatasetIterator, ExternalDataset, ListDataset
from .coco import CocoSubsetDataset, open_coco_subset
from .image_folder import ImageFolderDataset, open_image_folder
from .split import split_dataset

__all__ = [
    "CocoSubsetDataset", "DATASET_TYPES", "DatasetIterator", "ExternalDataset",
    "ImageFolderDataset", "ListDataset", "open_coco_subset", "open_image_folder",
    "split_dataset",
]
