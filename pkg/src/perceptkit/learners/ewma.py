"""Streaming anomaly detector over an exponentially weighted moving average.

The running mean is ephemeral inference state: reset() clears it and it is
never persisted, so a freshly loaded detector behaves exactly like one
that was just reset. A sample is judged against the mean of its history
*before* the mean absorbs it, so a spike cannot vouch for itself.
"""

import json

import numpy as np

from ..engine import Category, Vector
from ..errors import BadHyperparam, DimensionMismatch, EmptyDataset, FormatMismatch
from ..packaging import Manifest, read_payload, validate_package, write_package
from .base import Learner, LearnerState, resolve_hyperparams, validate_stats

PAYLOAD_NAME = "ewma.json"

NORMAL = 0
ANOMALY = 1
_LABELS = ("normal", "anomaly")

_SCHEMA = {"alpha": (float, 0.5), "threshold": (float, 2.0)}


class EwmaDetector(Learner):

    def __init__(self, hyperparams=None):
        super().__init__()
        hp = resolve_hyperparams(hyperparams, _SCHEMA)
        self._check_params(hp["alpha"], hp["threshold"])
        self.alpha = hp["alpha"]
        self.threshold = hp["threshold"]
        self._mean = None

    @property
    def classes(self):
        return list(_LABELS)

    @staticmethod
    def _check_params(alpha: float, threshold: float) -> None:
        if not 0.0 < alpha <= 1.0:
            raise BadHyperparam(f"alpha must lie in (0, 1], got {alpha}")
        if threshold <= 0.0:
            raise BadHyperparam(f"threshold must be > 0, got {threshold}")

    def _as_vector(self, data) -> np.ndarray:
        x = data.numpy() if isinstance(data, Vector) else np.asarray(data, np.float64)
        x = x.reshape(-1)
        if self._mean is not None and x.size != self._mean.size:
            raise DimensionMismatch(
                f"sample dimension {x.size} != established dimension {self._mean.size}")
        return x

    # -- lifecycle ----------------------------------------------------------

    def fit(self, dataset) -> dict:
        """Warm up on a calibration stream; the warm mean is not persisted."""
        if dataset is None or len(dataset) == 0:
            raise EmptyDataset("EWMA calibration needs at least one sample")
        self._state = LearnerState.TRAINED
        self._mean = None
        anomalies = 0
        for i in range(len(dataset)):
            data, _ = dataset.get(i)
            if self.infer(data).index == ANOMALY:
                anomalies += 1
        return validate_stats({"n": len(dataset),
                               "anomaly_rate": anomalies / len(dataset)})

    def infer(self, data) -> Category:
        self._require_ready()
        x = self._as_vector(data)
        if self._mean is None:
            self._mean = x.copy()
            return Category(NORMAL, _LABELS[NORMAL], confidence=1.0)
        deviation = float(np.max(np.abs(x - self._mean)))
        label = ANOMALY if deviation > self.threshold else NORMAL
        # margin-style confidence: 0.5 at the boundary, ->1 far from it
        if label == ANOMALY:
            conf = deviation / (deviation + self.threshold)
        else:
            conf = self.threshold / (deviation + self.threshold)
        self._mean = (1.0 - self.alpha) * self._mean + self.alpha * x
        return Category(label, _LABELS[label], confidence=conf)

    def eval(self, dataset) -> dict:
        """Accuracy against labelled samples; the stream state is reset first."""
        self._require_ready()
        if dataset is None or len(dataset) == 0:
            raise EmptyDataset("cannot evaluate on an empty dataset")
        self.reset()
        correct = 0
        for i in range(len(dataset)):
            data, target = dataset.get(i)
            if self.infer(data).index == target.index:
                correct += 1
        return validate_stats({"accuracy": correct / len(dataset), "n": len(dataset)})

    def save(self, path) -> None:
        self._require_ready()
        blob = json.dumps({"alpha": self.alpha, "threshold": self.threshold},
                          sort_keys=True).encode("utf-8")
        manifest = Manifest(
            name="ewma",
            model_format="native",
            model_paths=[PAYLOAD_NAME],
            classes=list(_LABELS),
            optimized=self._state is LearnerState.OPTIMIZED,
            inference_params={"alpha": self.alpha, "threshold": self.threshold},
        )
        write_package(manifest, {PAYLOAD_NAME: blob}, path)

    def load(self, path) -> None:
        manifest = validate_package(path)
        if manifest.model_format != "native":
            raise FormatMismatch(
                f"EWMA detector needs model_format='native', got {manifest.model_format!r}")
        try:
            cfg = json.loads(read_payload(path, manifest.model_paths[0]))
            alpha, threshold = float(cfg["alpha"]), float(cfg["threshold"])
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise FormatMismatch(f"payload is not an EWMA config: {exc}") from exc
        self._check_params(alpha, threshold)
        self.alpha = alpha
        self.threshold = threshold
        self._mean = None
        self._state = LearnerState.OPTIMIZED if manifest.optimized else LearnerState.TRAINED

    def reset(self) -> None:
        self._mean = None
