"""Hard partitions of node indices shared by all clustering algorithms."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Partition:
    """Disjoint nonempty clusters covering 0..n-1, with an objective score.

    Clusters are stored canonically: indices sorted within each cluster and
    clusters ordered by their smallest member.
    """

    clusters: tuple
    objective: float | None = None
    objective_kind: str | None = None

    def __post_init__(self):
        canon = []
        seen = set()
        total = 0
        for c in self.clusters:
            idx = sorted(int(i) for i in c)
            if not idx:
                raise ValueError("partition contains an empty cluster")
            if seen.intersection(idx):
                raise ValueError("partition clusters are not disjoint")
            seen.update(idx)
            total += len(idx)
            canon.append(tuple(idx))
        if not canon:
            raise ValueError("partition has no clusters")
        if seen != set(range(total)):
            raise ValueError("partition must cover exactly the indices 0..n-1")
        canon.sort(key=lambda c: c[0])
        object.__setattr__(self, "clusters", tuple(canon))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.clusters)

    @property
    def k(self) -> int:
        return len(self.clusters)

    def labels(self) -> np.ndarray:
        out = np.empty(self.n, dtype=int)
        for k, c in enumerate(self.clusters):
            out[list(c)] = k
        return out

    def same_blocks(self, other: "Partition") -> bool:
        return set(map(frozenset, self.clusters)) == set(map(frozenset, other.clusters))

    def with_objective(self, objective: float, kind: str) -> "Partition":
        return Partition(clusters=self.clusters, objective=float(objective), objective_kind=kind)


def partition_from_labels(labels, objective: float | None = None,
                          objective_kind: str | None = None) -> Partition:
    """Build a Partition from per-node integer labels, dropping empty label ids."""
    labels = np.asarray(labels, dtype=int)
    clusters = [tuple(np.flatnonzero(labels == v)) for v in np.unique(labels)]
    return Partition(clusters=tuple(clusters), objective=objective, objective_kind=objective_kind)
