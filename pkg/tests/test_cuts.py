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
from hypothesis import strategies as st

from constrainedhc import cuts
from constrainedhc.graph import Hyperedge3, WeightedGraph
from constrainedhc.utils import DomainError, NoAdmissibleCutError
from constrainedhc.utils.log import get_logger
from tests.strategies import graphs

P3 = WeightedGraph(3, [(0, 1, 2), (1, 2, 1)])
K3 = WeightedGraph(3, [(0, 1, 1), (0, 2, 1), (1, 2, 1)])
EDGE = WeightedGraph(2, [(0, 1, 5)])


def two_cliques(bridge=0.01):
    edges = [(u, v, 1) for block in (range(4), range(4, 8))
             for u in block for v in block if u < v]
    return WeightedGraph(8, edges + [(3, 4, bridge)])


def brute_force_sparsest(g):
    best = None
    for bits in range(1, 1 << (g.n - 1)):
        side = frozenset(v + 1 for v in range(g.n - 1) if bits >> v & 1)
        value = g.crossing_weight(side) / (len(side) * (g.n - len(side)))
        if best is None or value < best:
            best = value
    return best


class SparsestCutTest(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        get_logger(logging.INFO)

    def test_exact_examples(self):
        cut = cuts.sparsest_cut_exact(P3)
        self.assertEqual(cut.side, {2})
        self.assertEqual(cut.objective_value, 0.5)
        self.assertEqual(cut.crossing_weight, 1)

        self.assertEqual(cuts.sparsest_cut_exact(EDGE).objective_value, 5)

        cut = cuts.sparsest_cut_exact(K3)
        self.assertEqual(cut.side, {1})
        self.assertEqual(cut.objective_value, 1.0)

    def test_needs_two_vertices(self):
        with self.assertRaises(DomainError):
            cuts.sparsest_cut_exact(WeightedGraph(1))

    def test_limit(self):
        path = WeightedGraph(6, [(i, i + 1, i + 1) for i in range(5)])
        with self.assertRaises(DomainError):
            cuts.sparsest_cut_exact(path, limit=5)
        # Twins collapse the search space: a unit clique is one class.
        clique = WeightedGraph(30, [(u, v, 1) for u in range(30) for v in range(u + 1, 30)])
        self.assertEqual(cuts.sparsest_cut_exact(clique, limit=6).side, {1})

    @settings(max_examples=60, deadline=None)
    @given(graphs(min_n=2, max_n=8))
    def test_exact_matches_brute_force(self, g):
        cut = cuts.sparsest_cut_exact(g)
        self.assertNotIn(0, cut.side)
        self.assertAlmostEqual(cut.objective_value, brute_force_sparsest(g), places=9)

    def test_spectral_examples(self):
        self.assertEqual(cuts.sparsest_cut_spectral(two_cliques()).side, {4, 5, 6, 7})
        self.assertEqual(cuts.sparsest_cut_exact(two_cliques()).side, {4, 5, 6, 7})

        cut = cuts.sparsest_cut_spectral(P3)
        self.assertEqual(cut.side, {2})
        self.assertEqual(cut.objective_value, 0.5)

    def test_spectral_disconnected(self):
        g = WeightedGraph(4, [(0, 1, 1), (2, 3, 1)])
        cut = cuts.sparsest_cut_spectral(g)
        self.assertEqual(cut.crossing_weight, 0)
        self.assertEqual(cut.side, {2, 3})

    def test_spectral_is_deterministic(self):
        g = WeightedGraph(6, [(0, 1, 3), (1, 2, 1), (2, 3, 2), (3, 4, 1), (4, 5, 3), (0, 5, 1)])
        self.assertEqual(cuts.sparsest_cut_spectral(g, seed=3), cuts.sparsest_cut_spectral(g, seed=3))

    @settings(max_examples=100, deadline=None)
    @given(graphs(min_n=2, max_n=8))
    def test_spectral_never_beats_exact(self, g):
        spectral = cuts.sparsest_cut_spectral(g)
        self.assertNotIn(0, spectral.side)
        self.assertTrue(0 < len(spectral.side) < g.n)
        self.assertGreaterEqual(spectral.objective_value,
                                cuts.sparsest_cut_exact(g).objective_value - 1e-9)
        size = len(spectral.side)
        self.assertAlmostEqual(spectral.objective_value,
                               g.crossing_weight(spectral.side) / (size * (g.n - size)), places=9)


class BalancedCutTest(unittest.TestCase):
    def test_examples(self):
        cut = cuts.balanced_cut(P3)
        self.assertEqual(cut.side, {2})
        self.assertEqual(cut.objective_value, 1)

        self.assertEqual(cuts.balanced_cut(EDGE).side, {1})
        self.assertEqual(cuts.balanced_cut(two_cliques()).side, {4, 5, 6, 7})
        self.assertEqual(cuts.balanced_cut(two_cliques(), mode=cuts.HEURISTIC).side, {4, 5, 6, 7})

    def test_vertex_weights(self):
        # Vertex 2 stands for three vertices, so it balances {0, 1} on its own.
        g = WeightedGraph(3, [(0, 1, 1), (1, 2, 5), (0, 2, 5)])
        cut = cuts.balanced_cut(g, vertex_weights=[1, 1, 3], ratio=0.4)
        self.assertEqual(cut.side, {2})

    def test_no_admissible_cut(self):
        with self.assertRaises(NoAdmissibleCutError):
            cuts.balanced_cut(EDGE, ratio=0.6)
        with self.assertRaises(NoAdmissibleCutError):
            cuts.balanced_cut(P3, min_side=2)


class DensestCutTest(unittest.TestCase):
    def test_examples(self):
        cut = cuts.densest_cut(P3)
        self.assertEqual(cut.side, {1})
        self.assertEqual(cut.objective_value, 1.5)
        self.assertEqual(cuts.densest_cut(EDGE).objective_value, 5)
        self.assertEqual(cuts.densest_cut(K3).objective_value, 1.0)

    @settings(max_examples=40, deadline=None)
    @given(graphs(min_n=2, max_n=8), st.integers(0, 1000))
    def test_local_never_beats_exact(self, g, seed):
        exact = cuts.densest_cut(g)
        local = cuts.densest_cut(g, mode=cuts.LOCAL, epsilon=0.01, rng=random.Random(seed))
        self.assertNotIn(0, local.side)
        self.assertTrue(0 < len(local.side) < g.n)
        self.assertLessEqual(local.objective_value, exact.objective_value + 1e-9)

    @settings(max_examples=100, deadline=None)
    @given(graphs(min_n=3, max_n=8), st.integers(0, 1000), st.sampled_from([0.01, 0.1, 0.5]))
    def test_local_is_locally_optimal(self, g, seed, epsilon):
        local = cuts.densest_cut(g, mode=cuts.LOCAL, epsilon=epsilon, rng=random.Random(seed))
        density = local.objective_value
        for v in range(g.n):
            flipped = local.side ^ {v}
            if not 0 < len(flipped) < g.n:
                continue
            moved = g.crossing_weight(flipped) / (len(flipped) * (g.n - len(flipped)))
            if density == 0:
                self.assertEqual(moved, 0)
            else:
                self.assertLess(moved, (1 + epsilon) * density + 1e-9)

    def test_local_needs_positive_epsilon(self):
        with self.assertRaises(DomainError):
            cuts.densest_cut(P3, mode=cuts.LOCAL, epsilon=0)


class GadgetTest(unittest.TestCase):
    def test_examples(self):
        g = cuts.gadget_to_graph([Hyperedge3(0, 1, 2, 0, 2.5, 2.5)])
        self.assertEqual(g.edges, [(0, 1, 2.5)])

        g = cuts.gadget_to_graph([Hyperedge3(0, 1, 2, 1, 2, 3)])
        self.assertEqual((g.weight(0, 1), g.weight(0, 2), g.weight(1, 2)), (2, 1, 0))

        self.assertEqual(cuts.gadget_to_graph([Hyperedge3(0, 1, 2)], n=3).num_edges, 0)

    def test_triangle_inequality(self):
        with self.assertRaises(DomainError):
            cuts.gadget_to_graph([Hyperedge3(0, 1, 2, 5, 0, 0)])

    @settings(max_examples=1000, deadline=None)
    @given(st.tuples(*[st.floats(0, 100, allow_nan=False)] * 3))
    def test_triangle_preserves_split_weights(self, triangle):
        ab, ac, bc = triangle
        h = Hyperedge3(0, 1, 2, w_ab_c=ac + bc, w_ac_b=ab + bc, w_bc_a=ab + ac)
        g = cuts.gadget_to_graph([h], n=3)
        for side in ({0}, {1}, {2}):
            self.assertAlmostEqual(g.crossing_weight(side), cuts.hyper_split_weight(h, side),
                                   delta=1e-12 * max(1.0, ab + ac + bc))


class HyperSparsestCutTest(unittest.TestCase):
    def test_tie_goes_to_cheaper_split(self):
        g = WeightedGraph(3, [(0, 2, 1)])
        cut = cuts.hyper_sparsest_cut(g, [Hyperedge3(0, 1, 2, 0, 1, 1)])
        self.assertEqual(cut.side, {2})
        self.assertEqual(cut.objective_value, 0.5)

    def test_zero_edges(self):
        cut = cuts.hyper_sparsest_cut(WeightedGraph(3), [Hyperedge3(0, 1, 2, 0, 1, 1)])
        self.assertEqual(cut.side, {2})
        self.assertEqual(cut.objective_value, 0)

    def test_without_hyperedges(self):
        self.assertEqual(cuts.hyper_sparsest_cut(P3, []), cuts.sparsest_cut_exact(P3))


class RandomCutTest(unittest.TestCase):
    def test_two_vertices(self):
        rng = random.Random(0)
        for _ in range(20):
            self.assertEqual(cuts.random_cut([3, 7], rng), ({3}, {7}))

    def test_three_vertices_uniform(self):
        rng = random.Random(1)
        counts = Counter(cuts.random_cut(range(3), rng)[1] for _ in range(100_000))
        self.assertEqual(set(counts), {frozenset({1}), frozenset({2}), frozenset({1, 2})})
        for seen in counts.values():
            self.assertAlmostEqual(seen / 100_000, 1 / 3, delta=0.01)

    def test_seeded(self):
        a = [cuts.random_cut(range(8), random.Random(5)) for _ in range(3)]
        self.assertEqual(a[0], a[1])
        self.assertEqual(a[1], a[2])

    def test_first_part_holds_smallest(self):
        rng = random.Random(2)
        for _ in range(100):
            first, second = cuts.random_cut([4, 9, 2, 6], rng)
            self.assertIn(2, first)
            self.assertTrue(second)
            self.assertEqual(first | second, {2, 4, 6, 9})


if __name__ == '__main__':
    unittest.main()
