"""Feature subsets: 1-based index sets over {1, ..., D}.

Feature numbering follows the modeling convention (feature j carries
coefficient beta_j, j starting at 1); ``zero_based`` gives the numpy
column indices.
"""

from dataclasses import dataclass

import numpy as np

__all__ = ["FeatureSet", "random_subset"]


@dataclass(frozen=True)
class FeatureSet:
    """A strictly increasing set of feature indices, each >= 1."""

    indices: tuple[int, ...]

    def __post_init__(self):
        idx = tuple(int(i) for i in self.indices)
        if any(i < 1 for i in idx):
            raise ValueError(f"feature indices must be >= 1, got {idx}")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"feature indices must be strictly increasing, got {idx}")
        object.__setattr__(self, "indices", idx)

    @classmethod
    def of(cls, iterable):
        """Build from any iterable of distinct indices (sorted here)."""
        idx = sorted(int(i) for i in iterable)
        return cls(tuple(idx))

    @classmethod
    def first(cls, p):
        """The deterministic prefix {1, ..., p}."""
        return cls(tuple(range(1, p + 1)))

    @property
    def p(self):
        return len(self.indices)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    @property
    def zero_based(self):
        return np.asarray(self.indices, dtype=np.intp) - 1

    def validate_within(self, num_features):
        if self.indices and self.indices[-1] > num_features:
            raise ValueError(
                f"feature index {self.indices[-1]} exceeds dimension {num_features}"
            )

    def complement(self, num_features):
        """The complementary FeatureSet within {1, ..., num_features}."""
        self.validate_within(num_features)
        members = set(self.indices)
        return FeatureSet(tuple(i for i in range(1, num_features + 1) if i not in members))


def random_subset(rng, num_features, p):
    """Uniformly random FeatureSet of cardinality ``p`` from {1, ..., D}.

    Drawn as the prefix of a random permutation, so repeated calls on
    identically seeded generators produce nested subsets as ``p`` grows;
    the curve harness exploits this for variance reduction across a sweep.
    """
    if not 0 <= p <= num_features:
        raise ValueError(f"subset size {p} outside [0, {num_features}]")
    perm = rng.permutation(num_features)
    return FeatureSet.of(perm[:p] + 1)
