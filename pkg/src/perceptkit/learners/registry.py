"""Name -> factory registry so the CLI, service and FFI can build learners."""

import threading

from ..errors import DuplicateName, UnknownLearner

_lock = threading.Lock()
_factories: dict = {}


def register(name: str, factory) -> None:
    """Register a learner factory: `factory(hyperparams) -> learner`."""
    if not name:
        raise DuplicateName("learner name must be nonempty")
    with _lock:
        if name in _factories:
            raise DuplicateName(f"learner {name!r} is already registered")
        _factories[name] = factory


def create(name: str, hyperparams=None):
    """Instantiate a registered learner; fresh and untrained."""
    try:
        factory = _factories[name]
    except KeyError:
        raise UnknownLearner(
            f"unknown learner {name!r}; registered: {names()}") from None
    return factory(hyperparams or {})


def names() -> list:
    return sorted(_factories)
