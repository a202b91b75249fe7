# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Conflicting and attracting metalevel evidence combined per cluster and per
partition."""

import logging
import math

from dataclasses import dataclass
from typing import Any, Dict, Hashable, Iterable, List, Sequence, Tuple

import numpy as np

from metaconflict.errors import InputError, SizeLimitError
from metaconflict.evidence import AttractionMatrix, ConflictMatrix

logger = logging.getLogger(__name__)

# 2^k inclusion-exclusion terms per cluster of size k
MAX_COVERAGE_SIZE = 24
META_TOLERANCE = 1e-9


def check_probability(value: float, name: str = 'value') -> float:
    """Check that value is a finite number in [0, 1]."""
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise InputError(f'{name} must be a number, got {value!r}') from None
    if not 0 <= value <= 1:
        raise InputError(f'{name} must be in [0,1], got {value!r}')
    return value


@dataclass(frozen=True)
class Partition:
    """Assignment of n items to disjoint clusters.

    The labels are in canonical restricted-growth form: item 0 has label 0
    and every new label is the smallest unused one. Two partitions are
    equal iff their assignments are identical.
    """

    assignment: Tuple[int, ...]

    def __post_init__(self) -> None:
        labels = []
        for label in self.assignment:
            if isinstance(label, bool) or not isinstance(
                label, (int, np.integer)
            ):
                raise InputError(f'Invalid cluster label {label!r}')
            labels.append(int(label))

        if not labels:
            raise InputError('A partition needs at least one item')

        next_label = 0
        for label in labels:
            if not 0 <= label <= next_label:
                raise InputError(
                    f'Partition {labels} is not in canonical '
                    'restricted-growth form'
                )
            if label == next_label:
                next_label += 1

        object.__setattr__(self, 'assignment', tuple(labels))

    @classmethod
    def canonical(cls, labels: Iterable[Hashable]) -> "Partition":
        """Relabel arbitrary cluster labels in order of first appearance."""
        mapping = {}  # type: Dict[Hashable, int]
        return cls(
            tuple(mapping.setdefault(label, len(mapping)) for label in labels)
        )

    @classmethod
    def from_clusters(
        cls, n: int, clusters: Iterable[Iterable[int]]
    ) -> "Partition":
        labels = [None] * n  # type: List[Any]
        for label, members in enumerate(clusters):
            for i in members:
                if not 0 <= i < n or labels[i] is not None:
                    raise InputError(
                        f'Item {i} is out of range or in several clusters'
                    )
                labels[i] = label
        if None in labels:
            raise InputError('Every item must be in exactly one cluster')
        return cls.canonical(labels)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def single_cluster(cls, n: int) -> "Partition":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.assignment)

    @property
    def number_of_clusters(self) -> int:
        return max(self.assignment) + 1

    @property
    def clusters(self) -> Tuple[Tuple[int, ...], ...]:
        members = [[] for _ in range(self.number_of_clusters)]
        for i, label in enumerate(self.assignment):
            members[label].append(i)
        return tuple(tuple(m) for m in members)

    @property
    def cluster_masks(self) -> Tuple[int, ...]:
        masks = [0] * self.number_of_clusters
        for i, label in enumerate(self.assignment):
            masks[label] |= 1 << i
        return tuple(masks)

    def serialize(self) -> List[int]:
        return list(self.assignment)

    def __str__(self) -> str:
        inner = ','.join(
            '{' + ','.join(str(i) for i in c) + '}' for c in self.clusters
        )
        return '{' + inner + '}'


@dataclass(frozen=True)
class MetaBpa:
    """Mass assignment over {AdP, ¬AdP, Θ, ∅} of the metalevel frame"""

    adp: float = 0.0
    nadp: float = 0.0
    theta: float = 1.0
    empty: float = 0.0

    def __post_init__(self) -> None:
        for name in ('adp', 'nadp', 'theta', 'empty'):
            check_probability(getattr(self, name), name)
        total = self.adp + self.nadp + self.theta + self.empty
        if abs(total - 1.0) > META_TOLERANCE:
            raise InputError(f'Metalevel masses sum to {total!r} instead of 1')

    @classmethod
    def conflicting(cls, nadp: float) -> "MetaBpa":
        return cls(nadp=nadp, theta=1.0 - nadp)

    @classmethod
    def attracting(cls, adp: float) -> "MetaBpa":
        return cls(adp=adp, theta=1.0 - adp)

    @property
    def is_conflicting(self) -> bool:
        return self.adp == 0 and self.empty == 0

    @property
    def is_attracting(self) -> bool:
        return self.nadp == 0 and self.empty == 0

    def serialize(self) -> Dict[str, float]:
        return {
            'adp': self.adp,
            'nadp': self.nadp,
            'theta': self.theta,
            'empty': self.empty,
        }


def meta_neg(c_internal: float, c_external: float) -> float:
    """Dempster combination of two simple support functions for the same
    proposition "not in the same subset"."""
    c_internal = check_probability(c_internal, 'internal conflict')
    c_external = check_probability(c_external, 'external conflict')
    return 1.0 - (1.0 - c_internal) * (1.0 - c_external)


def merge_external_conflict(
    conflict: ConflictMatrix, external: ConflictMatrix
) -> ConflictMatrix:
    """Combine internal pairwise conflicts with external conflicting
    evidence, entry by entry."""
    if conflict.n != external.n:
        raise InputError(
            f'External conflict matrix has size {external.n}, '
            f'expected {conflict.n}'
        )
    return ConflictMatrix(
        1.0 - (1.0 - conflict.values) * (1.0 - external.values)
    )


def subset_sizes(k: int) -> np.ndarray:
    """Popcount of every bit mask below 2^k."""
    sizes = np.zeros(1, dtype=np.int64)
    for _ in range(k):
        sizes = np.concatenate((sizes, sizes + 1))
    return sizes


def avoidance_probabilities(probabilities: np.ndarray) -> np.ndarray:
    """Probability that no present edge meets S, for every vertex subset S.

    Each edge (u, v) of the complete graph over the k vertices is present
    independently with probability ``probabilities[u, v]``. The result is
    indexed by the bit mask of S.
    """
    k = probabilities.shape[0]
    absent = 1.0 - probabilities
    avoid = np.ones(1 << k)

    for v in range(k):
        # subsets S' below v: edges from v to lower vertices outside S'
        factor = np.ones(1)
        for u in range(v):
            factor = np.concatenate((factor * absent[v, u], factor))
        tail = np.prod(absent[v, v + 1 :])
        avoid[1 << v : 1 << (v + 1)] = avoid[: 1 << v] * factor * tail

    return avoid


def coverage_probability(probabilities: np.ndarray) -> float:
    """Probability that the random edge set touches every vertex.

    Inclusion-exclusion over the vertex subsets that are left untouched.
    """
    k = probabilities.shape[0]
    avoid = avoidance_probabilities(probabilities)
    signs = np.where(subset_sizes(k) % 2, -1.0, 1.0)
    return min(max(float(np.dot(signs, avoid)), 0.0), 1.0)


def cluster_neg_mass(conflict: ConflictMatrix, cluster: Iterable[int]) -> float:
    """Support for "at least one belief function is misplaced in the
    cluster" from all conflicts within it."""
    members = conflict.check_members(cluster)
    if len(members) < 2:
        return 0.0
    return float(1.0 - np.prod(1.0 - conflict.pair_values(members)))


def cluster_pos_mass(
    attraction: AttractionMatrix, cluster: Iterable[int]
) -> float:
    """Support for "all belief functions belong to the cluster" from all
    attractions within it.

    Clusters of a single item get no support since no attracting edge can
    cover them.
    """
    members = attraction.check_members(cluster)
    if len(members) < 2:
        return 0.0
    if len(members) > MAX_COVERAGE_SIZE:
        raise SizeLimitError(
            'attracting support of a cluster', len(members), MAX_COVERAGE_SIZE
        )
    sub = attraction.values[np.ix_(members, members)]
    return coverage_probability(sub)


def _check_size(matrix_n: int, partition: Partition) -> None:
    if matrix_n != partition.n:
        raise InputError(
            f'Partition has {partition.n} items, the matrix {matrix_n}'
        )


def partition_neg(conflict: ConflictMatrix, partition: Partition) -> float:
    """Support for "at least one cluster is not part of an adequate
    partition"."""
    _check_size(conflict.n, partition)
    keep = 1.0
    for members in partition.clusters:
        keep *= 1.0 - cluster_neg_mass(conflict, members)
    return 1.0 - keep


def partition_pos(attraction: AttractionMatrix, partition: Partition) -> float:
    """Support for "every cluster is part of an adequate partition"."""
    _check_size(attraction.n, partition)
    clusters = partition.clusters
    if any(len(members) < 2 for members in clusters):
        return 0.0
    return math.prod(
        cluster_pos_mass(attraction, members) for members in clusters
    )


def combine_partition_level(pos: MetaBpa, neg: MetaBpa) -> MetaBpa:
    """Combine attracting and conflicting partition-level evidence.

    The conflict stays on the empty set; no normalization is applied.
    """
    if not pos.is_attracting:
        raise InputError(f'{pos} is not attracting metalevel evidence')
    if not neg.is_conflicting:
        raise InputError(f'{neg} is not conflicting metalevel evidence')

    return MetaBpa(
        adp=pos.adp * neg.theta,
        nadp=pos.theta * neg.nadp,
        theta=pos.theta * neg.theta,
        empty=pos.adp * neg.nadp,
    )
