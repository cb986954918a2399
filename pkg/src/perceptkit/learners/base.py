"""The uniform learner lifecycle: states, stats, hyperparameters.

Every algorithm in the toolkit exposes the same surface (fit, eval,
infer, save, load, optimize, download, reset) so pipelines can swap
learners without changing shape. Learners are single-owner mutable
objects; transfer them between threads, never share them concurrently.
"""

import math
import numbers
from abc import ABC, abstractmethod
from enum import Enum

from ..errors import BadHyperparam, EmptySeries, EmptyStats, NonFiniteMetric, NotTrained
from ..packaging import fetch_package

# Common hyperparameter vocabulary; each learner declares which subset
# (plus its own keys) it accepts. Unknown keys are rejected.
COMMON_HYPERPARAM_KEYS = ("lr", "iters", "batch_size", "device", "seed",
                          "temperature", "threshold")


class LearnerState(Enum):
    UNTRAINED = "untrained"
    TRAINED = "trained"
    OPTIMIZED = "optimized"


def validate_stats(stats: dict) -> dict:
    """Check a fit()/eval() statistics dictionary.

    Values are finite scalars or nonempty sequences of finite scalars.
    """
    if not isinstance(stats, dict) or not stats:
        raise EmptyStats("statistics dictionary must be nonempty")
    for key, value in stats.items():
        if isinstance(value, (list, tuple)):
            if len(value) == 0:
                raise EmptySeries(f"metric {key!r} is an empty series")
            seq = value
        else:
            seq = [value]
        for v in seq:
            if isinstance(v, bool) or not isinstance(v, numbers.Real):
                raise NonFiniteMetric(f"metric {key!r} holds a non-numeric value {v!r}")
            if not math.isfinite(float(v)):
                raise NonFiniteMetric(f"metric {key!r} holds non-finite value {v!r}")
    return stats


def resolve_hyperparams(hp, schema: dict) -> dict:
    """Merge user hyperparameters over defaults, strictly.

    `schema` maps key -> (type(s), default). Unknown keys and wrong types
    are rejected so that every documented parameter is the whole story.
    """
    hp = dict(hp or {})
    unknown = set(hp) - set(schema)
    if unknown:
        raise BadHyperparam(f"unknown hyperparameters: {sorted(unknown)}; "
                            f"accepted: {sorted(schema)}")
    resolved = {}
    for key, (types, default) in schema.items():
        value = hp.get(key, default)
        if types is float and isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        if not isinstance(value, types) or isinstance(value, bool) and types is not bool:
            raise BadHyperparam(f"hyperparameter {key!r} must be {types}, got {value!r}")
        resolved[key] = value
    return resolved


class BaseLearner(ABC):
    """Shared lifecycle surface for all learners."""

    def __init__(self):
        self._state = LearnerState.UNTRAINED

    @property
    def state(self) -> LearnerState:
        return self._state

    def _require_ready(self) -> None:
        if self._state is LearnerState.UNTRAINED:
            raise NotTrained(f"{type(self).__name__} must be fit or loaded first")

    @abstractmethod
    def fit(self, dataset) -> dict:
        ...

    @abstractmethod
    def eval(self, dataset) -> dict:
        ...

    @abstractmethod
    def infer(self, data):
        ...

    @abstractmethod
    def save(self, path) -> None:
        ...

    @abstractmethod
    def load(self, path) -> None:
        ...

    def optimize(self) -> None:
        """Prepare a trained model for faster inference; idempotent."""
        self._require_ready()
        self._state = LearnerState.OPTIMIZED

    def download(self, uri: str, path) -> str:
        """Fetch a pretrained package into `path` (used as the cache dir)."""
        return str(fetch_package(uri, path))

    def reset(self) -> None:
        """Re-initialize stateful inference; a no-op for stateless learners."""


class Learner(BaseLearner):
    """Base class for standard train/eval/infer learners."""


class LearnerActive(Learner):
    """A learner whose inference also proposes the next sensing action."""

    @abstractmethod
    def infer_active(self, data):
        """Return (target, action); target.suggested_action equals action."""
