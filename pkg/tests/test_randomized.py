#  Copyright 2026 The constrained-hc authors
#
#  Licensed under the Apache License, Version 2.0 (the "License");
#  you may not use this file except in compliance with the License.
#  You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
#  Unless required by applicable law or agreed to in writing,
#  software distributed under the License is distributed on an
#  "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
#  KIND, either express or implied.  See the License for the
#  specific language governing permissions and limitations
#  under the License.

import logging
import random
import unittest
from collections import Counter

from hypothesis import given, settings

from constrainedhc.constraints import ConstraintSet, violated_constraints
from constrainedhc.graph import ClusterTree, WeightedGraph, dissimilarity_reward
from constrainedhc.oracle import opt_dissimilarity
from constrainedhc.randomized import (constraint_classes, crrc, crrc_guarantee, dependency_digraph,
                                      dm, dmc, layered_subgraph, local_search_derandomized,
                                      monte_carlo, rrc, rrc_expected_reward)
from constrainedhc.utils import DomainError, InfeasibleConstraintsError
from constrainedhc.utils.log import get_logger
from tests.strategies import feasible_instances, graphs

P3 = WeightedGraph(3, [(0, 1, 2), (1, 2, 1)])
K3 = WeightedGraph(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])


def clique(n):
    return WeightedGraph(n, [(u, v, 1) for u in range(n) for v in range(u + 1, n)])


class RandomCutsTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        get_logger(logging.INFO)

    def test_single_vertex(self):
        self.assertEqual(rrc(WeightedGraph(1), random.Random(0)), ClusterTree(0))

    def test_clique_reward_is_constant(self):
        rng = random.Random(0)
        for _ in range(50):
            self.assertEqual(dissimilarity_reward(rrc(K3, rng), K3), 8)

    def test_path_tree_distribution(self):
        rng = random.Random(3)
        counts = Counter(dissimilarity_reward(rrc(P3, rng), P3) for _ in range(6000))
        self.assertEqual(set(counts), {7, 8, 9})
        for seen in counts.values():
            self.assertAlmostEqual(seen / 6000, 1 / 3, delta=0.03)

    def test_expected_reward(self):
        self.assertEqual(rrc_expected_reward(P3), 8)
        self.assertEqual(rrc_expected_reward(K3), 8)
        self.assertEqual(rrc_expected_reward(clique(5)), 40)

    def test_monte_carlo_k5(self):
        summary = monte_carlo(lambda rng: rrc(clique(5), rng), clique(5), 100_000, seed=0)
        self.assertAlmostEqual(summary.mean, 40, delta=0.4)

    def test_monte_carlo_p3(self):
        summary = monte_carlo(lambda rng: rrc(P3, rng), P3, 100_000, seed=0)
        self.assertAlmostEqual(summary.mean, 8, delta=0.1)
        self.assertEqual((summary.minimum, summary.maximum), (7, 9))

    def test_monte_carlo_is_seeded(self):
        run = lambda rng: rrc(P3, rng)
        self.assertEqual(monte_carlo(run, P3, 50, seed=9), monte_carlo(run, P3, 50, seed=9))
        with self.assertRaises(DomainError):
            monte_carlo(run, P3, 0, seed=0)

    @settings(max_examples=20, deadline=None)
    @given(graphs(min_n=2, max_n=7))
    def test_monte_carlo_matches_expectation(self, g):
        summary = monte_carlo(lambda rng: rrc(g, rng), g, 2000, seed=0)
        expected = rrc_expected_reward(g)
        self.assertLessEqual(abs(summary.mean - expected), 5 * summary.stderr + 1e-9)


class DerandomizedTest(unittest.TestCase):
    def test_examples(self):
        self.assertEqual(dissimilarity_reward(local_search_derandomized(K3), K3), 8)
        self.assertGreaterEqual(dissimilarity_reward(local_search_derandomized(P3), P3), 8)

    def test_edgeless_cluster_still_splits(self):
        tree = local_search_derandomized(WeightedGraph(4))
        self.assertEqual(tree.n_leaves, 4)

    @settings(max_examples=100, deadline=None)
    @given(graphs(min_n=1, max_n=7))
    def test_two_thirds_guarantee(self, g):
        reward = dissimilarity_reward(local_search_derandomized(g), g)
        opt, _ = opt_dissimilarity(g)
        self.assertGreaterEqual(3 * reward, 2 * opt)
        self.assertGreaterEqual(3 * reward, 3 * rrc_expected_reward(g) - 1e-9)

    @settings(max_examples=100, deadline=None)
    @given(graphs(min_n=2, max_n=7))
    def test_random_cuts_two_thirds(self, g):
        summary = monte_carlo(lambda rng: rrc(g, rng), g, 300, seed=0)
        opt, _ = opt_dissimilarity(g)
        self.assertGreaterEqual(summary.mean, 2 * opt / 3 - 3 * summary.stderr - 1e-9)


class CrrcTest(unittest.TestCase):
    def test_forced_split(self):
        cs = ConstraintSet([(0, 2, 1)])
        rng = random.Random(0)
        for _ in range(20):
            tree = crrc(P3, cs, rng)
            self.assertEqual(tree, ClusterTree(((0, 2), 1)))
            self.assertEqual(dissimilarity_reward(tree, P3), 9)

    def test_without_constraints_matches_rrc(self):
        g = clique(7)
        for seed in range(10):
            self.assertEqual(crrc(g, ConstraintSet(), random.Random(seed)),
                             rrc(g, random.Random(seed)))

    def test_infeasible(self):
        with self.assertRaises(InfeasibleConstraintsError):
            crrc(K3, ConstraintSet([(0, 1, 2), (1, 2, 0)]), random.Random(0))

    @settings(max_examples=100, deadline=None)
    @given(feasible_instances(max_n=12))
    def test_feasible_instances(self, instance):
        g, cs, _ = instance
        rng = random.Random(0)
        for _ in range(5):
            self.assertEqual(violated_constraints(crrc(g, cs, rng), cs), [])

    def test_guarantee_on_chain(self):
        g = clique(10)
        cs = ConstraintSet([(0, 1, 2), (0, 2, 4)])
        alpha = crrc_guarantee(g.n, len(cs), dmc(cs))
        summary = monte_carlo(lambda rng: crrc(g, cs, rng), g, 10_000, seed=0)
        self.assertGreaterEqual(summary.mean, alpha * g.n * g.total_weight)


class DependencyTest(unittest.TestCase):
    def test_classes(self):
        (cls,) = constraint_classes(ConstraintSet([(0, 1, 2), (0, 1, 3)]))
        self.assertEqual(cls.base, (0, 1))
        self.assertEqual(cls.keys, (2, 3))
        self.assertEqual(len(constraint_classes(ConstraintSet([(0, 1, 2), (0, 2, 4)]))), 2)
        self.assertEqual(constraint_classes(ConstraintSet()), [])

    def test_digraph(self):
        dg = dependency_digraph(constraint_classes(ConstraintSet([(0, 1, 2)])))
        self.assertEqual(dg.arcs, [])

        first, second = constraint_classes(ConstraintSet([(0, 1, 2), (0, 2, 4)]))
        dg = dependency_digraph([first, second])
        self.assertEqual(dg.arcs, [(first, second)])
        self.assertTrue(dg.is_acyclic())

    def test_layers(self):
        (single,) = constraint_classes(ConstraintSet([(0, 1, 2)]))
        ls = layered_subgraph(dependency_digraph([single]), single)
        self.assertEqual((ls.depth, ls.layers), (0, ((single,),)))

        first, second = constraint_classes(ConstraintSet([(0, 1, 2), (0, 2, 4)]))
        ls = layered_subgraph(dependency_digraph([first, second]), first)
        self.assertEqual(ls.layers, ((first,), (second,)))

    def test_diamond(self):
        cs = ConstraintSet([(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 3, 2), (2, 3, 5)])
        top, left, right, bottom = constraint_classes(cs)
        self.assertEqual([c.base for c in (top, left, right, bottom)],
                         [(0, 1), (0, 2), (1, 3), (2, 3)])
        ls = layered_subgraph(dependency_digraph([top, left, right, bottom]), top)
        self.assertEqual(ls.layers, ((top,), (left, right), (bottom,)))
        self.assertEqual(dm(ls), 3 * 3 * 2)

    def test_dm(self):
        for constraints, expected in (([(0, 1, 2)], 2),
                                      ([(0, 1, 2), (0, 1, 3)], 3),
                                      ([(0, 1, 2), (0, 2, 4)], 4),
                                      ([], 1)):
            self.assertEqual(dmc(ConstraintSet(constraints)), expected)

    def test_cycle(self):
        cs = ConstraintSet([(0, 1, 2), (0, 2, 1)])
        dg = dependency_digraph(constraint_classes(cs))
        self.assertFalse(dg.is_acyclic())
        with self.assertRaises(DomainError):
            dmc(cs)

    def test_guarantee(self):
        self.assertAlmostEqual(crrc_guarantee(10, 1, 2), 0.3, delta=1e-12)
        self.assertAlmostEqual(crrc_guarantee(10, 2, 4), 2 / 15, delta=1e-12)
        self.assertAlmostEqual(crrc_guarantee(10, 0, 1), 2 / 3, delta=1e-12)
        with self.assertRaises(DomainError):
            crrc_guarantee(10, 1, 0)

    @settings(max_examples=100, deadline=None)
    @given(feasible_instances(max_n=12, max_constraints=10))
    def test_feasible_sets_have_layered_acyclic_digraphs(self, instance):
        _, cs, _ = instance
        dg = dependency_digraph(constraint_classes(cs))
        self.assertTrue(dg.is_acyclic())
        for source in dg.classes:
            for layer in layered_subgraph(dg, source).layers:
                members = set(layer)
                self.assertFalse(any(a in members and b in members for a, b in dg.arcs))


if __name__ == '__main__':
    unittest.main()
