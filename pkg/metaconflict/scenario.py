# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Synthetic clustering problems with a known ground truth.

Every cluster is tied to its own frame atom. Items are simple support
functions with mass s on their cluster's atom and 1 - s on the frame, so
items of different clusters conflict with s² and items of the same cluster
not at all. Items of the same cluster attract each other with q.
"""

import logging

from dataclasses import dataclass
from typing import Any, Dict

import numpy as np

from metaconflict.errors import InputError
from metaconflict.evidence import (
    AttractionMatrix,
    EvidenceItem,
    Frame,
    MassFunction,
)
from metaconflict.instance import ProblemInstance
from metaconflict.metalevel import Partition, check_probability
from metaconflict.search import MAX_SEED

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScenarioParameters:
    n: int
    k: int
    frame_size: int
    sharpness: float
    link_probability: float

    def __post_init__(self) -> None:
        if not 1 <= self.k <= self.n:
            raise InputError(
                f'Cluster count k={self.k} must be in 1..n (n={self.n})'
            )
        if self.frame_size < self.k:
            raise InputError(
                f'Frame size {self.frame_size} is smaller than k={self.k}'
            )
        check_probability(self.sharpness, 'sharpness')
        check_probability(self.link_probability, 'link probability')

    def serialize(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'k': self.k,
            'frame_size': self.frame_size,
            'sharpness': self.sharpness,
            'link_probability': self.link_probability,
        }


@dataclass(frozen=True)
class Scenario:
    items: tuple
    attraction: AttractionMatrix
    truth: Partition
    seed: int
    params: ScenarioParameters

    @property
    def frame(self) -> Frame:
        return self.items[0].mass.frame

    def to_instance(self) -> ProblemInstance:
        return ProblemInstance(
            attraction=self.attraction,
            frame=self.frame,
            items=self.items,
            truth=self.truth,
        )

    def dumps(self) -> str:
        return self.to_instance().dumps()


def generate(
    n: int,
    k: int,
    frame_size: int,
    sharpness: float,
    link_probability: float,
    seed: int,
) -> Scenario:
    """Generate a scenario; identical arguments give identical scenarios."""
    params = ScenarioParameters(n, k, frame_size, sharpness, link_probability)
    if not 0 <= seed <= MAX_SEED:
        raise InputError(f'Seed {seed} is not a 64 bit unsigned int')

    rng = np.random.default_rng(seed)
    order = rng.permutation(n)
    labels = [0] * n
    for position, item in enumerate(order):
        labels[item] = position % k
    truth = Partition.canonical(labels)

    frame = Frame(tuple(f'a{i}' for i in range(frame_size)))
    items = []
    for i, label in enumerate(truth.assignment):
        focal = 1 << label
        entries = {focal: sharpness}
        # on a single atom frame the cluster atom is the frame itself
        entries[frame.full_mask] = entries.get(frame.full_mask, 0.0) + (
            1.0 - sharpness
        )
        items.append(EvidenceItem(f'e{i + 1}', MassFunction(frame, entries)))

    attraction = AttractionMatrix.from_triplets(
        n,
        [
            (i, j, link_probability)
            for i in range(n)
            for j in range(i + 1, n)
            if truth.assignment[i] == truth.assignment[j]
        ],
    )

    logger.info(
        'Generated scenario with %d items in %d clusters (seed %d)',
        n,
        k,
        seed,
    )

    return Scenario(
        items=tuple(items),
        attraction=attraction,
        truth=truth,
        seed=seed,
        params=params,
    )
