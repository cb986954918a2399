"""Learner lifecycle contracts, the registry, and the reference learners."""

from . import registry
from .base import (
    COMMON_HYPERPARAM_KEYS,
    BaseLearner,
    Learner,
    LearnerActive,
    LearnerState,
    resolve_hyperparams,
    validate_stats,
)
from .centroid import CentroidLearner
from .ewma import EwmaDetector


def _ensure_registered(name, factory):
    # modules import once per process, but stay idempotent for embedders
    if name not in registry.names():
        registry.register(name, factory)


_ensure_registered("centroid", CentroidLearner)
_ensure_registered("ewma", EwmaDetector)

__all__ = [
    "BaseLearner", "CentroidLearner", "COMMON_HYPERPARAM_KEYS", "EwmaDetector",
    "Learner", "LearnerActive", "LearnerState", "registry",
    "resolve_hyperparams", "validate_stats",
]
