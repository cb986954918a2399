"""Deterministic dataset splitting.

The permutation comes from SplitMix64 (see perceptkit.rng) so the same
(dataset length, fractions, seed) triple yields the same split on any
machine. Sizes are floor allocations with the remainder going to the
first split.
"""

from ..errors import BadFractions
from ..rng import SplitMix64
from .base import DatasetIterator


class _Subset(DatasetIterator):
    def __init__(self, parent: DatasetIterator, indices):
        self._parent = parent
        self._indices = list(indices)

    def __len__(self) -> int:
        return len(self._indices)

    def get(self, i: int):
        return self._parent.get(self._indices[i])

    @property
    def indices(self) -> list:
        return list(self._indices)


def split_dataset(ds: DatasetIterator, fractions, seed: int) -> list:
    fractions = [float(f) for f in fractions]
    if not fractions or any(f <= 0 for f in fractions):
        raise BadFractions(f"fractions must be positive, got {fractions}")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise BadFractions(f"fractions must sum to 1, got sum {sum(fractions)!r}")

    n = len(ds)
    order = SplitMix64(seed).shuffled_indices(n)
    # the epsilon keeps floor(n*f) at the mathematical floor when n*f is
    # an integer that floating point renders as 0.99999...
    sizes = [int(n * f + 1e-9) for f in fractions]
    sizes[0] += n - sum(sizes)

    out, start = [], 0
    for size in sizes:
        out.append(_Subset(ds, order[start:start + size]))
        start += size
    return out
