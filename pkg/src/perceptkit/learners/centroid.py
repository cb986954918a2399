"""Trainable nearest-centroid classifier for vectors and images.

Per-class centroids are arithmetic means. Prediction is the argmin of
squared Euclidean distance (ties break to the smallest class index);
confidence is the softmax of -distance^2 / temperature at the winner.
optimize() caches squared centroid norms and switches the distance to
||x-c||^2 = ||x||^2 - 2 x.c + ||c||^2, which never changes outputs.
"""

import struct

import numpy as np

from ..engine import Category, Image, Vector
from ..errors import (
    BadHyperparam,
    DimensionMismatch,
    EmptyDataset,
    FormatMismatch,
    MissingClass,
)
from ..packaging import Manifest, read_payload, validate_package, write_package
from .base import Learner, LearnerState, resolve_hyperparams, validate_stats

PAYLOAD_MAGIC = b"ODRC"
PAYLOAD_NAME = "centroids.bin"

_SCHEMA = {"temperature": (float, 1.0)}


def _flatten(data) -> np.ndarray:
    """Images flatten channel-major to F32 (v/255) then widen to f64."""
    if isinstance(data, Image):
        f32 = data.numpy().astype(np.float32) / np.float32(255.0)
        return f32.reshape(-1).astype(np.float64)
    if isinstance(data, Vector):
        return data.numpy()
    return np.asarray(data, dtype=np.float64).reshape(-1)


def encode_centroids(centroids: np.ndarray) -> bytes:
    c, d = centroids.shape
    return PAYLOAD_MAGIC + struct.pack("<II", c, d) + \
        centroids.astype("<f8").tobytes(order="C")


def decode_centroids(blob: bytes) -> np.ndarray:
    if blob[:4] != PAYLOAD_MAGIC:
        raise FormatMismatch("payload is not a centroid model (bad magic)")
    c, d = struct.unpack("<II", blob[4:12])
    expected = 12 + c * d * 8
    if len(blob) != expected:
        raise FormatMismatch(f"payload length {len(blob)} != expected {expected}")
    return np.frombuffer(blob[12:], dtype="<f8").reshape(c, d).astype(np.float64)


class CentroidLearner(Learner):

    def __init__(self, hyperparams=None):
        super().__init__()
        hp = resolve_hyperparams(hyperparams, _SCHEMA)
        if hp["temperature"] <= 0:
            raise BadHyperparam(f"temperature must be > 0, got {hp['temperature']}")
        self.temperature = hp["temperature"]
        self._centroids = None
        self._class_names = None
        self._sq_norms = None  # set by optimize()

    @property
    def classes(self):
        return None if self._class_names is None else list(self._class_names)

    # -- training ---------------------------------------------------------

    def fit(self, dataset) -> dict:
        if dataset is None or len(dataset) == 0:
            raise EmptyDataset("cannot fit a centroid model on an empty dataset")
        by_class: dict = {}
        names: dict = {}
        dim = None
        for i in range(len(dataset)):
            data, target = dataset.get(i)
            x = _flatten(data)
            if dim is None:
                dim = x.size
            elif x.size != dim:
                raise DimensionMismatch(
                    f"sample {i} has dimension {x.size}, expected {dim}")
            idx = target.index
            by_class.setdefault(idx, []).append(x)
            if idx not in names and target.description is not None:
                names[idx] = target.description

        n_classes = max(by_class) + 1
        missing = sorted(set(range(n_classes)) - set(by_class))
        if missing:
            raise MissingClass(f"classes {missing} have no samples")

        self._centroids = np.stack(
            [np.mean(by_class[c], axis=0) for c in range(n_classes)])
        self._class_names = [names.get(c, str(c)) for c in range(n_classes)]
        self._sq_norms = None
        self._state = LearnerState.TRAINED

        correct = sum(
            self.infer(dataset.get(i)[0]).index == dataset.get(i)[1].index
            for i in range(len(dataset)))
        return validate_stats({
            "per_class_counts": [len(by_class[c]) for c in range(n_classes)],
            "train_accuracy": correct / len(dataset),
        })

    # -- inference --------------------------------------------------------

    def _distances_sq(self, x: np.ndarray) -> np.ndarray:
        if x.size != self._centroids.shape[1]:
            raise DimensionMismatch(
                f"input dimension {x.size} != model dimension {self._centroids.shape[1]}")
        if self._sq_norms is not None:
            return float(x @ x) - 2.0 * (self._centroids @ x) + self._sq_norms
        diff = self._centroids - x
        return np.sum(diff * diff, axis=1)

    def infer(self, data) -> Category:
        self._require_ready()
        d2 = self._distances_sq(_flatten(data))
        winner = int(np.argmin(d2))  # argmin takes the first (smallest) index on ties
        logits = -d2 / self.temperature
        conf = float(1.0 / np.sum(np.exp(logits - logits[winner])))
        return Category(winner, self._class_names[winner], confidence=conf)

    def eval(self, dataset) -> dict:
        self._require_ready()
        if dataset is None or len(dataset) == 0:
            raise EmptyDataset("cannot evaluate on an empty dataset")
        correct = sum(
            self.infer(dataset.get(i)[0]).index == dataset.get(i)[1].index
            for i in range(len(dataset)))
        return validate_stats({"accuracy": correct / len(dataset), "n": len(dataset)})

    # -- persistence ------------------------------------------------------

    def save(self, path) -> None:
        self._require_ready()
        manifest = Manifest(
            name="centroid",
            model_format="native",
            model_paths=[PAYLOAD_NAME],
            classes=list(self._class_names),
            optimized=self._state is LearnerState.OPTIMIZED,
            optimizer_info={"method": "cached_squared_norms"}
            if self._state is LearnerState.OPTIMIZED else {},
            inference_params={"temperature": self.temperature},
        )
        write_package(manifest, {PAYLOAD_NAME: encode_centroids(self._centroids)}, path)

    def load(self, path) -> None:
        manifest = validate_package(path)
        if manifest.model_format != "native":
            raise FormatMismatch(
                f"centroid learner needs model_format='native', got {manifest.model_format!r}")
        centroids = decode_centroids(read_payload(path, manifest.model_paths[0]))
        self._centroids = centroids
        self._class_names = (list(manifest.classes) if manifest.classes
                             else [str(i) for i in range(centroids.shape[0])])
        self.temperature = float(manifest.inference_params.get("temperature", 1.0))
        self._sq_norms = None
        self._state = LearnerState.TRAINED
        if manifest.optimized:
            self.optimize()

    def optimize(self) -> None:
        self._require_ready()
        if self._state is LearnerState.OPTIMIZED:
            return
        self._sq_norms = np.sum(self._centroids * self._centroids, axis=1)
        self._state = LearnerState.OPTIMIZED
