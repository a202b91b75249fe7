# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Weighting of attracting against conflicting metalevel evidence by their
average total uncertainty.

All evidence is pooled into one imaginary cluster holding every item. The
average total uncertainty H = G + I of a mass function is the sum of its
Shannon entropy G (scattering) and Hartley information I (nonspecificity),
measured in bits.
"""

import logging
import math

from dataclasses import dataclass
from typing import Dict, Sequence, Tuple, Union

import numpy as np

from metaconflict.errors import InputError, SizeLimitError
from metaconflict.evidence import AttractionMatrix, ConflictMatrix
from metaconflict.metalevel import avoidance_probabilities, subset_sizes

logger = logging.getLogger(__name__)

MAX_POOLED_ITEMS = 24

Entropy = Tuple[float, float, float]


@dataclass(frozen=True)
class EntropyReport:
    g_neg: float
    i_neg: float
    h_neg: float
    g_pos: float
    i_pos: float
    h_pos: float
    alpha: float

    @property
    def degenerate(self) -> bool:
        """Neither kind of evidence carries information."""
        return self.h_pos == 0 and self.h_neg == 0

    def serialize(self) -> Dict[str, Union[float, bool]]:
        return {
            'g_neg': self.g_neg,
            'i_neg': self.i_neg,
            'h_neg': self.h_neg,
            'g_pos': self.g_pos,
            'i_pos': self.i_pos,
            'h_pos': self.h_pos,
            'alpha': self.alpha,
            'degenerate': self.degenerate,
        }


def binary_entropy(probabilities: np.ndarray) -> np.ndarray:
    """Entropy in bits of independent yes/no events, with 0·log 0 = 0."""
    p = np.asarray(probabilities, dtype=float)
    result = np.zeros_like(p)
    for q in (p, 1.0 - p):
        positive = q > 0
        result[positive] -= q[positive] * np.log2(q[positive])
    return result


def poisson_binomial_pmf(probabilities: Sequence[float]) -> np.ndarray:
    """Distribution of the number of successes of independent trials.

    The coefficients of the generating function ∏(1 - p + p·x).
    """
    pmf = np.array([1.0])
    for p in probabilities:
        next_pmf = np.zeros(len(pmf) + 1)
        next_pmf[:-1] = pmf * (1 - p)
        next_pmf[1:] += pmf * p
        pmf = next_pmf
    return pmf


def subset_moebius(values: np.ndarray) -> np.ndarray:
    """Möbius inversion over the subset lattice.

    Turns f(S) = ∑_{J⊆S} m(J) back into m, indexed by bit masks.
    """
    result = np.array(values, dtype=float, order='C')
    bits = result.shape[0].bit_length() - 1
    for b in range(bits):
        view = result.reshape(-1, 2, 1 << b)
        view[:, 1, :] -= view[:, 0, :]
    return result


def neg_entropy(conflict: ConflictMatrix) -> Entropy:
    """G, I and H of all conflicting metalevel evidence pooled together.

    Every set of conflicting pairs is its own focal element, with the mass
    of a product measure over independent pairs. G is therefore the sum of
    the pairs' binary entropies and I follows from the distribution of the
    number of pairs in a focal element.
    """
    edges = conflict.edges()

    g = float(np.sum(binary_entropy(edges)))

    pmf = poisson_binomial_pmf(edges)
    counts = np.arange(1, len(pmf))
    i = float(np.dot(pmf[1:], np.log2(counts))) if len(counts) else 0.0

    return g, i, g + i


def coverage_masses(attraction: AttractionMatrix) -> np.ndarray:
    """Mass of every exact coverage set J of the pooled attracting evidence.

    Indexed by bit mask; index 0 is the mass left on Θ.
    """
    n = attraction.n
    if n > MAX_POOLED_ITEMS:
        raise SizeLimitError('pooled attracting evidence', n, MAX_POOLED_ITEMS)

    avoid = avoidance_probabilities(attraction.values)
    # Pr(coverage ⊆ S) is the probability that no edge meets the complement
    within = avoid[::-1]
    return np.maximum(subset_moebius(within), 0.0)


def pos_entropy(attraction: AttractionMatrix) -> Entropy:
    """G, I and H of all attracting metalevel evidence pooled together.

    Focal elements are the coverage sets with more than one item; the Θ
    focal element counts toward neither G nor I.
    """
    n = attraction.n
    masses = coverage_masses(attraction)
    sizes = subset_sizes(n)

    focal = sizes > 1
    focal_masses = masses[focal]
    positive = focal_masses > 0

    g = float(
        -np.sum(focal_masses[positive] * np.log2(focal_masses[positive]))
    )
    i = float(np.sum(focal_masses * np.log2(n - sizes[focal] + 1)))

    return g, i, g + i


def alpha(h_pos: float, h_neg: float) -> float:
    """Weight of the attracting term of the metaconflict function.

    0 when there is no attracting information, 1 when there is no
    conflicting information and 0.5 when there is neither.
    """
    for name, value in (('h_pos', h_pos), ('h_neg', h_neg)):
        if not math.isfinite(value) or value < 0:
            raise InputError(f'{name} must be a non-negative number')

    if h_pos == 0 and h_neg == 0:
        return 0.5
    return h_pos / (h_pos + h_neg)


def entropy_report(
    conflict: ConflictMatrix, attraction: AttractionMatrix
) -> EntropyReport:
    if conflict.n != attraction.n:
        raise InputError(
            f'Conflict matrix has size {conflict.n}, '
            f'attraction matrix {attraction.n}'
        )

    g_neg, i_neg, h_neg = neg_entropy(conflict)
    g_pos, i_pos, h_pos = pos_entropy(attraction)
    weight = alpha(h_pos, h_neg)

    logger.debug(
        'Average total uncertainty: attracting %f, conflicting %f, '
        'alpha %f',
        h_pos,
        h_neg,
        weight,
    )

    return EntropyReport(
        g_neg=g_neg,
        i_neg=i_neg,
        h_neg=h_neg,
        g_pos=g_pos,
        i_pos=i_pos,
        h_pos=h_pos,
        alpha=weight,
    )
