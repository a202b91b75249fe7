# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Brute-force oracles and fixtures shared by the tests"""

import itertools
import math

from typing import Dict, Iterator, List, Sequence, Tuple
from unittest.mock import Mock

import numpy as np

from metaconflict.evidence import (
    AttractionMatrix,
    ConflictMatrix,
    Frame,
    MassFunction,
)


def assert_called_once(mock: Mock):
    if hasattr(mock, 'assert_called_once'):
        return mock.assert_called_once()

    if not mock.call_count == 1:
        # pylint: disable=protected-access
        msg = (
            f"Expected '{mock._mock_name or 'mock'}' to have "
            f"been called once. Called {mock.call_count} "
            f"times.{mock._calls_repr()}"
        )
        raise AssertionError(msg)


def assert_called(mock: Mock):
    """assert that the mock was called at least once"""
    if mock.call_count == 0:
        # pylint: disable=protected-access
        msg = f"Expected '{mock._mock_name or 'mock'}' to have been called."
        raise AssertionError(msg)


def random_matrix(rng: np.random.Generator, n: int) -> np.ndarray:
    """Symmetric matrix with uniform random values and zero diagonal."""
    values = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            values[i, j] = values[j, i] = rng.random()
    return values


def random_matrices(
    rng: np.random.Generator, n: int
) -> Tuple[ConflictMatrix, AttractionMatrix]:
    return (
        ConflictMatrix(random_matrix(rng, n)),
        AttractionMatrix(random_matrix(rng, n)),
    )


def random_mass_function(
    rng: np.random.Generator, frame: Frame, focal_count: int = 3
) -> MassFunction:
    masks = rng.choice(
        np.arange(1, frame.full_mask + 1),
        size=min(focal_count, frame.full_mask),
        replace=False,
    )
    weights = rng.random(len(masks)) + 0.05
    weights = weights / weights.sum()
    return MassFunction(
        frame, {int(m): float(w) for m, w in zip(masks, weights)}
    )


def block_matrices() -> Tuple[ConflictMatrix, AttractionMatrix]:
    """Four items in the blocks {0,1} and {2,3}."""
    across = [[0, 0, 1, 1], [0, 0, 1, 1], [1, 1, 0, 0], [1, 1, 0, 0]]
    conflict = np.array(
        [[0.9 if across[i][j] else 0.05 for j in range(4)] for i in range(4)]
    )
    attraction = np.array(
        [[0.05 if across[i][j] else 0.8 for j in range(4)] for i in range(4)]
    )
    np.fill_diagonal(conflict, 0)
    np.fill_diagonal(attraction, 0)
    return ConflictMatrix(conflict), AttractionMatrix(attraction)


def pairs(members: Sequence[int]) -> List[Tuple[int, int]]:
    return list(itertools.combinations(members, 2))


def edge_subsets(
    values: np.ndarray, members: Sequence[int]
) -> Iterator[Tuple[List[Tuple[int, int]], float]]:
    """Every subset of the edges between members with its probability."""
    edges = pairs(members)
    for present in itertools.product((False, True), repeat=len(edges)):
        probability = 1.0
        chosen = []
        for edge, is_present in zip(edges, present):
            p = values[edge]
            if is_present:
                probability *= p
                chosen.append(edge)
            else:
                probability *= 1.0 - p
        yield chosen, probability


def coverage_oracle(values: np.ndarray, members: Sequence[int]) -> float:
    """Probability that the present edges touch every member."""
    target = set(members)
    total = 0.0
    for chosen, probability in edge_subsets(values, members):
        touched = {i for edge in chosen for i in edge}
        if touched == target:
            total += probability
    return total


def neg_entropy_oracle(values: np.ndarray) -> Tuple[float, float]:
    """G and I by enumerating every set of conflicting pairs."""
    g = 0.0
    i = 0.0
    for chosen, mass in edge_subsets(values, range(values.shape[0])):
        if mass > 0:
            g -= mass * math.log2(mass)
        if chosen:
            i += mass * math.log2(len(chosen))
    return g, i


def coverage_mass_oracle(values: np.ndarray) -> Dict[frozenset, float]:
    """Mass of every exact coverage set, the empty set being Θ."""
    masses = {}  # type: Dict[frozenset, float]
    for chosen, mass in edge_subsets(values, range(values.shape[0])):
        touched = frozenset(i for edge in chosen for i in edge)
        masses[touched] = masses.get(touched, 0.0) + mass
    return masses


def pos_entropy_oracle(values: np.ndarray) -> Tuple[float, float]:
    n = values.shape[0]
    g = 0.0
    i = 0.0
    for touched, mass in coverage_mass_oracle(values).items():
        if len(touched) > 1:
            if mass > 0:
                g -= mass * math.log2(mass)
            i += mass * math.log2(n - len(touched) + 1)
    return g, i


def set_partitions(items: List[int]) -> Iterator[List[List[int]]]:
    """All set partitions by recursion on the first item."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first]] + partition
        for index in range(len(partition)):
            yield (
                partition[:index]
                + [[first] + partition[index]]
                + partition[index + 1 :]
            )


def normalized_conflicts(masses: Sequence[MassFunction]) -> List[float]:
    """Conflicts of sequential normalized Dempster combinations."""
    current = dict(masses[0].entries)
    conflicts = []
    for other in masses[1:]:
        combined = {}  # type: Dict[int, float]
        conflict = 0.0
        for mask_a, mass_a in current.items():
            for mask_b, mass_b in other.entries.items():
                intersection = mask_a & mask_b
                if intersection:
                    combined[intersection] = (
                        combined.get(intersection, 0.0) + mass_a * mass_b
                    )
                else:
                    conflict += mass_a * mass_b
        conflicts.append(conflict)
        if conflict < 1.0:
            current = {
                mask: mass / (1.0 - conflict)
                for mask, mass in combined.items()
            }
        else:
            current = {}
    return conflicts
