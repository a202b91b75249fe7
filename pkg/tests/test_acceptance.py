# -*- coding: utf-8 -*-
# SPDX-FileCopyrightText: 2024 metaconflict developers
#
# SPDX-License-Identifier: AGPL-3.0-or-later

"""Property checks of the whole pipeline against brute-force oracles"""

import time
import unittest

import numpy as np

from metaconflict.evidence import (
    AttractionMatrix,
    ConflictMatrix,
    conflict_matrix,
)
from metaconflict.metalevel import Partition, cluster_pos_mass, partition_neg
from metaconflict.scenario import generate
from metaconflict.search import (
    SearchConfig,
    enumerate_partitions,
    evaluate_partition,
    exact_search,
    local_search,
    logsum_objective,
)
from metaconflict.weighting import entropy_report, neg_entropy, pos_entropy

from tests.helper import (
    coverage_oracle,
    neg_entropy_oracle,
    pos_entropy_oracle,
    random_matrices,
    random_matrix,
)


class OracleTestCase(unittest.TestCase):
    def test_coverage_matches_edge_enumeration(self):
        rng = np.random.default_rng(101)
        for _ in range(200):
            size = int(rng.integers(2, 6))
            values = random_matrix(rng, size)

            self.assertAlmostEqual(
                cluster_pos_mass(AttractionMatrix(values), range(size)),
                coverage_oracle(values, range(size)),
                delta=1e-12,
            )

    def test_entropies_match_focal_enumeration(self):
        rng = np.random.default_rng(103)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            c = random_matrix(rng, n)
            p = random_matrix(rng, n)

            g, i, _ = neg_entropy(ConflictMatrix(c))
            expected_g, expected_i = neg_entropy_oracle(c)
            self.assertAlmostEqual(g, expected_g, delta=1e-9)
            self.assertAlmostEqual(i, expected_i, delta=1e-9)

            g, i, _ = pos_entropy(AttractionMatrix(p))
            expected_g, expected_i = pos_entropy_oracle(p)
            self.assertAlmostEqual(g, expected_g, delta=1e-9)
            self.assertAlmostEqual(i, expected_i, delta=1e-9)


class WeightBoundaryTestCase(unittest.TestCase):
    def test_no_attraction(self):
        rng = np.random.default_rng(107)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            report = entropy_report(
                ConflictMatrix(random_matrix(rng, n)),
                AttractionMatrix.zeros(n),
            )
            self.assertEqual(report.alpha, 0)

    def test_no_conflict(self):
        rng = np.random.default_rng(109)
        for _ in range(50):
            n = int(rng.integers(2, 8))
            report = entropy_report(
                ConflictMatrix.zeros(n),
                AttractionMatrix(random_matrix(rng, n)),
            )
            self.assertEqual(report.alpha, 1)


class ConflictOnlyTestCase(unittest.TestCase):
    def test_reduces_to_conflict_clustering(self):
        rng = np.random.default_rng(113)
        for _ in range(100):
            n = int(rng.integers(2, 8))
            conflict = ConflictMatrix(random_matrix(rng, n))
            attraction = AttractionMatrix.zeros(n)
            alpha = entropy_report(conflict, attraction).alpha

            report = exact_search(conflict, attraction, alpha, SearchConfig())

            best = min(
                enumerate_partitions(n),
                key=lambda p, c=conflict: partition_neg(c, p),
            )
            self.assertEqual(report.partition, best)


class LogsumTestCase(unittest.TestCase):
    def test_same_ranking_as_pairwise_conflict(self):
        rng = np.random.default_rng(127)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            conflict = ConflictMatrix(random_matrix(rng, n))
            scored = sorted(
                (partition_neg(conflict, p), logsum_objective(conflict, p))
                for p in enumerate_partitions(n)
            )

            for (neg_a, log_a), (neg_b, log_b) in zip(scored, scored[1:]):
                if neg_b - neg_a > 1e-9:
                    self.assertLess(log_a, log_b)


class BookkeepingTestCase(unittest.TestCase):
    def test_masses_sum_to_one(self):
        rng = np.random.default_rng(131)
        for _ in range(10000):
            n = int(rng.integers(1, 7))
            conflict, attraction = random_matrices(rng, n)
            partition = Partition.canonical(rng.integers(0, n, size=n))

            report = evaluate_partition(
                conflict, attraction, float(rng.random()), partition
            )

            self.assertAlmostEqual(
                report.adp + report.nadp + report.theta + report.empty,
                1.0,
                delta=1e-9,
            )
            self.assertGreaterEqual(report.mcf, 0)
            self.assertLessEqual(report.mcf, 1)


class RecoveryTestCase(unittest.TestCase):
    def test_generated_truth_is_recovered(self):
        recovered = 0
        for seed in range(100):
            scenario = generate(8, 2, 2, 0.9, 0.8, seed=seed)
            conflict = conflict_matrix(scenario.items)
            alpha = entropy_report(conflict, scenario.attraction).alpha

            report = exact_search(
                conflict, scenario.attraction, alpha, SearchConfig()
            )
            recovered += report.partition == scenario.truth

        self.assertGreaterEqual(recovered, 95)


class LocalSearchQualityTestCase(unittest.TestCase):
    def test_attains_exact_optimum(self):
        rng = np.random.default_rng(137)
        config = SearchConfig(method='local', seed=2024, restarts=20)
        hits = 0
        for _ in range(100):
            conflict, attraction = random_matrices(rng, 8)
            alpha = entropy_report(conflict, attraction).alpha

            exact = exact_search(conflict, attraction, alpha, config)
            local = local_search(conflict, attraction, alpha, config)

            self.assertGreaterEqual(local.mcf, exact.mcf - 1e-9)
            hits += local.mcf <= exact.mcf + 1e-9

        self.assertGreaterEqual(hits, 90)


class PerformanceTestCase(unittest.TestCase):
    def test_exact_search_on_ten_items(self):
        rng = np.random.default_rng(139)
        conflict, attraction = random_matrices(rng, 10)
        config = SearchConfig(max_items_exact=10)

        start = time.perf_counter()
        exact_search(conflict, attraction, 0.5, config)
        elapsed = time.perf_counter() - start

        self.assertLess(elapsed, 10)
