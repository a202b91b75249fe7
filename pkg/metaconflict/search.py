# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Evaluation and minimization of the metaconflict function over the
partitions of a set of belief functions."""

import logging
import math
import multiprocessing

from dataclasses import dataclass
from enum import Enum
from typing import (
    Any,
    Dict,
    Iterator,
    List,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from metaconflict.errors import InputError, SizeLimitError
from metaconflict.evidence import (
    AttractionMatrix,
    ConflictMatrix,
    EvidenceItem,
    MassFunction,
    conf_subset,
)
from metaconflict.metalevel import (
    MetaBpa,
    Partition,
    check_probability,
    cluster_neg_mass,
    cluster_pos_mass,
    combine_partition_level,
)
from metaconflict.timer import Timer

logger = logging.getLogger(__name__)

DEFAULT_RESTARTS = 20
DEFAULT_MAX_ITEMS_EXACT = 11
IMPROVEMENT_THRESHOLD = 1e-12
MAX_SEED = 2**64 - 1

Assignment = Tuple[int, ...]


class SearchMethod(Enum):
    EXACT = 'exact'
    LOCAL = 'local'


@dataclass(frozen=True)
class SearchConfig:
    """Settings of the partition search.

    A method of None selects exact search when the item count allows it
    and local search otherwise.
    """

    method: Optional[SearchMethod] = None
    seed: int = 0
    restarts: int = DEFAULT_RESTARTS
    max_items_exact: int = DEFAULT_MAX_ITEMS_EXACT
    alpha_override: Optional[float] = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.method is not None and not isinstance(
            self.method, SearchMethod
        ):
            try:
                object.__setattr__(self, 'method', SearchMethod(self.method))
            except ValueError:
                raise InputError(
                    f'Unknown search method {self.method!r}'
                ) from None
        if not 0 <= self.seed <= MAX_SEED:
            raise InputError(f'Seed {self.seed} is not a 64 bit unsigned int')
        if self.restarts < 1:
            raise InputError('At least one restart is required')
        if self.max_items_exact < 1:
            raise InputError('max_items_exact must be positive')
        if self.workers < 1:
            raise InputError('At least one worker is required')
        if self.alpha_override is not None:
            object.__setattr__(
                self,
                'alpha_override',
                check_probability(self.alpha_override, 'alpha'),
            )

    def resolve_method(self, n: int) -> SearchMethod:
        if self.method is not None:
            return self.method
        if n <= self.max_items_exact:
            return SearchMethod.EXACT
        return SearchMethod.LOCAL


@dataclass(frozen=True)
class ClusterReport:
    members: Tuple[int, ...]
    neg_mass: float
    pos_mass: float

    def serialize(self) -> Dict[str, Any]:
        return {
            'members': list(self.members),
            'neg_mass': self.neg_mass,
            'pos_mass': self.pos_mass,
        }


@dataclass(frozen=True)
class McfReport:
    """Breakdown of the metaconflict function of one partition"""

    partition: Partition
    alpha: float
    pos_adp: float
    neg_nadp: float
    adp: float
    nadp: float
    theta: float
    empty: float
    mcf: float
    per_cluster: Tuple[ClusterReport, ...]

    @property
    def attraction_vanishes(self) -> bool:
        """No attracting support survives the product over clusters, as
        happens for every partition with a singleton cluster."""
        return self.pos_adp == 0

    def serialize(self) -> Dict[str, Any]:
        return {
            'partition': self.partition.serialize(),
            'clusters': [list(c) for c in self.partition.clusters],
            'alpha': self.alpha,
            'pos_adp': self.pos_adp,
            'neg_nadp': self.neg_nadp,
            'adp': self.adp,
            'nadp': self.nadp,
            'theta': self.theta,
            'empty': self.empty,
            'mcf': self.mcf,
            'per_cluster': [c.serialize() for c in self.per_cluster],
        }


def metaconflict(alpha: float, adp: float, nadp: float) -> float:
    return alpha * (1.0 - adp) + (1.0 - alpha) * nadp


def _cluster_masks(assignment: Sequence[int]) -> List[int]:
    """Bit masks of the clusters in order of first appearance."""
    masks = {}  # type: Dict[int, int]
    for i, label in enumerate(assignment):
        masks[label] = masks.get(label, 0) | 1 << i
    return list(masks.values())


def _members(mask: int) -> Tuple[int, ...]:
    return tuple(i for i in range(mask.bit_length()) if mask >> i & 1)


class MetaconflictObjective:
    """The metaconflict function for fixed matrices and weighting.

    Cluster masses are cached by cluster so that search does not recompute
    them for every partition a cluster appears in.
    """

    def __init__(
        self,
        conflict: ConflictMatrix,
        attraction: AttractionMatrix,
        alpha: float,
    ) -> None:
        if conflict.n != attraction.n:
            raise InputError(
                f'Conflict matrix has size {conflict.n}, '
                f'attraction matrix {attraction.n}'
            )
        self.conflict = conflict
        self.attraction = attraction
        self.alpha = check_probability(alpha, 'alpha')
        self._cache = {}  # type: Dict[int, Tuple[float, float]]

    @property
    def n(self) -> int:
        return self.conflict.n

    def cluster_masses(self, mask: int) -> Tuple[float, float]:
        masses = self._cache.get(mask)
        if masses is None:
            members = _members(mask)
            masses = (
                cluster_neg_mass(self.conflict, members),
                cluster_pos_mass(self.attraction, members),
            )
            self._cache[mask] = masses
        return masses

    def _partition_masses(self, masks: Sequence[int]) -> Tuple[float, float]:
        keep = 1.0
        pos = 1.0
        for mask in masks:
            if mask & (mask - 1):
                neg_a, pos_a = self.cluster_masses(mask)
                keep *= 1.0 - neg_a
                pos *= pos_a
            else:
                pos = 0.0
        return pos, 1.0 - keep

    def value(self, assignment: Sequence[int]) -> float:
        """Metaconflict of a partition given by arbitrary cluster labels."""
        pos, neg = self._partition_masses(_cluster_masks(assignment))
        return metaconflict(self.alpha, pos * (1.0 - neg), (1.0 - pos) * neg)

    def report(self, partition: Partition) -> McfReport:
        if partition.n != self.n:
            raise InputError(
                f'Partition has {partition.n} items, the matrices {self.n}'
            )

        masks = partition.cluster_masks
        pos, neg = self._partition_masses(masks)
        combined = combine_partition_level(
            MetaBpa.attracting(pos), MetaBpa.conflicting(neg)
        )

        per_cluster = []
        for mask in masks:
            if mask & (mask - 1):
                neg_a, pos_a = self.cluster_masses(mask)
            else:
                neg_a, pos_a = 0.0, 0.0
            per_cluster.append(ClusterReport(_members(mask), neg_a, pos_a))

        return McfReport(
            partition=partition,
            alpha=self.alpha,
            pos_adp=pos,
            neg_nadp=neg,
            adp=combined.adp,
            nadp=combined.nadp,
            theta=combined.theta,
            empty=combined.empty,
            mcf=metaconflict(self.alpha, combined.adp, combined.nadp),
            per_cluster=tuple(per_cluster),
        )


def evaluate_partition(
    conflict: ConflictMatrix,
    attraction: AttractionMatrix,
    alpha: float,
    partition: Partition,
) -> McfReport:
    return MetaconflictObjective(conflict, attraction, alpha).report(partition)


def restricted_growth_strings(n: int) -> Iterator[Assignment]:
    """All restricted growth strings of length n in lexicographic order."""
    labels = [0] * n
    # prefix maxima: the largest label among items before i
    prefix_max = [0] * n
    while True:
        yield tuple(labels)

        i = n - 1
        while i > 0 and labels[i] > prefix_max[i]:
            i -= 1
        if i <= 0:
            return

        labels[i] += 1
        top = max(prefix_max[i], labels[i])
        for j in range(i + 1, n):
            labels[j] = 0
            prefix_max[j] = top


def enumerate_partitions(
    n: int, max_items: int = DEFAULT_MAX_ITEMS_EXACT
) -> Iterator[Partition]:
    """Every set partition of n items exactly once, in canonical order."""
    if n < 1:
        raise InputError('At least one item is required')
    if n > max_items:
        raise SizeLimitError('partition enumeration', n, max_items)

    for assignment in restricted_growth_strings(n):
        yield Partition(assignment)


def exact_search(
    conflict: ConflictMatrix,
    attraction: AttractionMatrix,
    alpha: float,
    config: SearchConfig,
) -> McfReport:
    """Minimize the metaconflict function over all partitions.

    Ties go to the partition that comes first in canonical order.
    """
    objective = MetaconflictObjective(conflict, attraction, alpha)
    n = objective.n
    if n > config.max_items_exact:
        raise SizeLimitError(
            'exact search (use local search instead)',
            n,
            config.max_items_exact,
        )

    best = None  # type: Optional[Assignment]
    best_value = math.inf
    count = 0

    with Timer('exact search'):
        for assignment in restricted_growth_strings(n):
            count += 1
            value = objective.value(assignment)
            if value < best_value:
                best, best_value = assignment, value

    logger.info(
        'Evaluated %d partitions of %d items, minimal metaconflict %f',
        count,
        n,
        best_value,
    )

    return objective.report(Partition(best))


def _canonical(labels: Sequence[int]) -> Assignment:
    mapping = {}  # type: Dict[int, int]
    return tuple(mapping.setdefault(label, len(mapping)) for label in labels)


def restart_generator(seed: int, restart: int) -> np.random.Generator:
    """Random generator of one restart, independent of evaluation order."""
    return np.random.default_rng(np.random.SeedSequence([seed, restart]))


def hill_climb(
    objective: MetaconflictObjective, start: Sequence[int]
) -> Tuple[float, Assignment]:
    """Steepest descent over single-item moves.

    An item may move to any other existing cluster or open a new singleton
    cluster. Stops when the best move does not lower the metaconflict by
    more than IMPROVEMENT_THRESHOLD.
    """
    current = _canonical(start)
    current_value = objective.value(current)

    while True:
        clusters = max(current) + 1
        sizes = [0] * clusters
        for label in current:
            sizes[label] += 1

        best_move = None  # type: Optional[List[int]]
        best_value = math.inf

        for item, own in enumerate(current):
            for target in range(clusters + 1):
                if target == own or (target == clusters and sizes[own] == 1):
                    continue
                candidate = list(current)
                candidate[item] = target
                value = objective.value(candidate)
                if value < best_value:
                    best_move, best_value = candidate, value

        if best_move is None or not (
            best_value < current_value - IMPROVEMENT_THRESHOLD
        ):
            return current_value, current

        current, current_value = _canonical(best_move), best_value


def _run_restart(
    objective: MetaconflictObjective, seed: int, restart: int
) -> Tuple[float, Assignment]:
    rng = restart_generator(seed, restart)
    n = objective.n
    start = rng.integers(0, n, size=n).tolist()
    value, assignment = hill_climb(objective, start)
    logger.debug('Restart %d reached metaconflict %f', restart, value)
    return value, assignment


def _restart_worker(
    args: Tuple[np.ndarray, np.ndarray, float, int, int]
) -> Tuple[float, Assignment]:
    conflict, attraction, alpha, seed, restart = args
    objective = MetaconflictObjective(
        ConflictMatrix(conflict), AttractionMatrix(attraction), alpha
    )
    return _run_restart(objective, seed, restart)


def local_search(
    conflict: ConflictMatrix,
    attraction: AttractionMatrix,
    alpha: float,
    config: SearchConfig,
) -> McfReport:
    """Restarted hill climbing from seeded random partitions.

    The best partition over all restarts wins, ties going to the earlier
    restart. Every restart has its own generator derived from the seed, so
    the result does not depend on the number of workers.
    """
    objective = MetaconflictObjective(conflict, attraction, alpha)
    restarts = range(config.restarts)

    with Timer('local search'):
        if config.workers > 1 and config.restarts > 1:
            jobs = [
                (conflict.values, attraction.values, alpha, config.seed, r)
                for r in restarts
            ]
            with multiprocessing.Pool(
                min(config.workers, config.restarts)
            ) as pool:
                results = pool.map(_restart_worker, jobs)
        else:
            results = [
                _run_restart(objective, config.seed, r) for r in restarts
            ]

    best_value, best = results[0]
    for value, assignment in results[1:]:
        if value < best_value:
            best_value, best = value, assignment

    logger.info(
        'Local search with %d restarts, minimal metaconflict %f',
        config.restarts,
        best_value,
    )

    return objective.report(Partition(best))


def search(
    conflict: ConflictMatrix,
    attraction: AttractionMatrix,
    alpha: float,
    config: SearchConfig,
) -> McfReport:
    method = config.resolve_method(conflict.n)
    logger.info('Searching with method %s', method.value)
    if method == SearchMethod.EXACT:
        return exact_search(conflict, attraction, alpha, config)
    return local_search(conflict, attraction, alpha, config)


def legacy_mcf(subset_conflicts: Sequence[float]) -> float:
    """Conflict against a partitioning from the conflicts of its subsets."""
    keep = 1.0
    for c in subset_conflicts:
        keep *= 1.0 - check_probability(c, 'subset conflict')
    return 1.0 - keep


def subset_conflicts(
    items: Sequence[Union[EvidenceItem, MassFunction]], partition: Partition
) -> List[float]:
    """Conflict of Dempster's rule within every cluster of the partition."""
    if len(items) != partition.n:
        raise InputError(
            f'Partition has {partition.n} items, got {len(items)} '
            'belief functions'
        )
    masses = [
        item.mass if isinstance(item, EvidenceItem) else item for item in items
    ]
    return [
        conf_subset([masses[i] for i in members])
        for members in partition.clusters
    ]


def logsum_objective(conflict: ConflictMatrix, partition: Partition) -> float:
    """Sum of -ln(1 - c) over all pairs within clusters.

    Ranks partitions like the pairwise conflict mass. A pair with conflict
    1 makes the sum infinite.
    """
    if conflict.n != partition.n:
        raise InputError(
            f'Partition has {partition.n} items, the matrix {conflict.n}'
        )

    total = 0.0
    for members in partition.clusters:
        if len(members) < 2:
            continue
        values = conflict.pair_values(members)
        if np.any(values >= 1.0):
            return math.inf
        total -= float(np.sum(np.log1p(-values)))
    return total
