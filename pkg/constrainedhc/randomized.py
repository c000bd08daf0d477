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
"""
Recursive random cuts for the dissimilarity objective, their derandomization, the
constraint-respecting variant and the dependency analysis that bounds how much the
constraints cost it.
"""
import dataclasses
import random
from typing import Callable, Dict, List, Tuple

import networkx as nx
import numpy as np

from constrainedhc.constraints import ConstraintSet, TripletConstraint, active_constraints, supernodes
from constrainedhc.cuts import random_cut
from constrainedhc.divisive import check_feasible, divide
from constrainedhc.graph import ClusterTree, WeightedGraph, dissimilarity_reward
from constrainedhc.utils import DomainError, InternalError
from constrainedhc.utils.log import get_logger

LEFT = 0
RIGHT = 1


def rrc(g: WeightedGraph, rng: random.Random) -> ClusterTree:
    """
    Split every cluster by fair coins until only singletons remain.
    """
    return divide(g.n, lambda cluster: random_cut(cluster, rng)[1])


def rrc_expected_reward(g: WeightedGraph) -> float:
    """
    Exact expected dissimilarity reward of `rrc`.

    Each edge always counts its two endpoints; any third vertex stays under the edge's LCA with
    probability exactly 2/3.
    """
    return g.total_weight * (2 + 2 * (g.n - 2) / 3)


def _twelfths(placed: Dict[int, int], i, j, k):
    """
    12 * P(k lies under LCA(i, j)) given the fixed placements, the remaining vertices of the
    cluster being placed by fair coins and every later split being random.
    """
    si, sj, sk = placed.get(i), placed.get(j), placed.get(k)
    split = 6 if si is None or sj is None else (12 if si != sj else 0)

    fixed = {s for s in (si, sj, sk) if s is not None}
    free = (si is None) + (sj is None) + (sk is None)
    if len(fixed) == 2:
        together = 0
    elif fixed:
        together = 8 >> free
    else:
        together = 2
    return split + together


def _conditional_reward(edges, cluster, placed):
    """
    12 times the conditional expected reward of the edges inside `cluster`.
    """
    total = 0
    for i, j, w in edges:
        total += w * (24 + sum(_twelfths(placed, i, j, k) for k in cluster if k != i and k != j))
    return total


def local_search_derandomized(g: WeightedGraph) -> ClusterTree:
    """
    Deterministic counterpart of `rrc` by the method of conditional expectations.

    In each cluster vertices are placed in id order on the side with the larger conditional
    expected reward (ties go left). If every vertex lands on one side, the last one is moved
    across; all of its choices were then ties, so the expectation is unchanged.
    """
    def split(cluster):
        members = set(cluster)
        edges = [(u, v, w) for u, v, w in g.edges if u in members and v in members]
        placed = {}
        for v in cluster:
            placed[v] = LEFT
            left = _conditional_reward(edges, cluster, placed)
            placed[v] = RIGHT
            right = _conditional_reward(edges, cluster, placed)
            placed[v] = RIGHT if right > left else LEFT

        if len(set(placed.values())) == 1:
            placed[cluster[-1]] = 1 - placed[cluster[-1]]
        if placed[cluster[0]] == RIGHT:
            placed = {v: 1 - side for v, side in placed.items()}
        return frozenset(v for v, side in placed.items() if side == RIGHT)

    return divide(g.n, split)


def crrc(g: WeightedGraph, cs: ConstraintSet, rng: random.Random) -> ClusterTree:
    """
    Random cuts over each cluster's supernodes, so no active constrained pair is separated.

    With no constraints every supernode is a single vertex and the coin flips match `rrc`.
    """
    check_feasible(g, cs)

    def split(cluster):
        blocks = supernodes(cluster, active_constraints(cluster, cs))
        if len(blocks) < 2:
            raise InternalError(f'Cluster {list(cluster)} contracted to a single supernode')
        _, right = random_cut(range(len(blocks)), rng)
        return frozenset(v for b in right for v in blocks[b])

    return divide(g.n, split)


@dataclasses.dataclass(frozen=True)
class MonteCarloSummary:
    trials: int
    mean: float
    stderr: float
    minimum: float
    maximum: float


def monte_carlo(run: Callable[[random.Random], ClusterTree], g: WeightedGraph, trials, seed):
    """
    Dissimilarity reward statistics of `run` over `trials` runs seeded seed, seed + 1, ...
    """
    if trials < 1:
        raise DomainError(f'Need at least one trial, got {trials}')
    rewards = np.array([dissimilarity_reward(run(random.Random(seed + i)), g)
                        for i in range(trials)], dtype=float)
    stderr = rewards.std(ddof=1) / np.sqrt(trials) if trials > 1 else 0.0
    get_logger().debug('Monte Carlo over %d trials: mean %.6g, stderr %.3g', trials,
                       rewards.mean(), stderr)
    return MonteCarloSummary(trials, float(rewards.mean()), float(stderr), float(rewards.min()),
                             float(rewards.max()))


@dataclasses.dataclass(frozen=True, order=True)
class ConstraintClass:
    """
    Constraints sharing the base pair {p, q}; a member's key is its outsider s.
    """
    base: Tuple[int, int]
    members: Tuple[TripletConstraint, ...]

    @property
    def keys(self) -> Tuple[int, ...]:
        return tuple(c.s for c in self.members)

    def __len__(self):
        return len(self.members)

    def __str__(self):
        return '{%d,%d}' % self.base


def constraint_classes(cs: ConstraintSet) -> List[ConstraintClass]:
    grouped = {}
    for c in cs:
        grouped.setdefault(c.base, []).append(c)
    return [ConstraintClass(base, tuple(sorted(members)))
            for base, members in sorted(grouped.items())]


class DependencyDigraph:
    """
    Arc C -> C' whenever a member of C with base {p, q} and key s has base(C') = {s, p} or
    {s, q}: C' can only be resolved after s leaves the pair of C.
    """

    def __init__(self, classes: List[ConstraintClass]):
        self.classes = list(classes)
        self.graph = nx.DiGraph()
        self.graph.add_nodes_from(self.classes)

        by_base = {c.base: c for c in self.classes}
        for cls in self.classes:
            for c in cls.members:
                for other in (tuple(sorted((c.s, c.p))), tuple(sorted((c.s, c.q)))):
                    if other in by_base:
                        self.graph.add_edge(cls, by_base[other])

    @property
    def arcs(self) -> List[Tuple[ConstraintClass, ConstraintClass]]:
        return sorted(self.graph.edges)

    def is_acyclic(self):
        return nx.is_directed_acyclic_graph(self.graph)


def dependency_digraph(classes: List[ConstraintClass]) -> DependencyDigraph:
    return DependencyDigraph(classes)


@dataclasses.dataclass(frozen=True)
class LayeredSubgraph:
    source: ConstraintClass
    layers: Tuple[Tuple[ConstraintClass, ...], ...]

    @property
    def depth(self):
        return len(self.layers) - 1


def layered_subgraph(dg: DependencyDigraph, source: ConstraintClass) -> LayeredSubgraph:
    """
    Classes reachable from `source`, layered by the length of the longest path to them.
    """
    if source not in dg.graph:
        raise DomainError(f'Class {source} is not part of the dependency digraph')
    reachable = dg.graph.subgraph(nx.descendants(dg.graph, source) | {source})
    if not nx.is_directed_acyclic_graph(reachable):
        raise DomainError(f'Dependency digraph has a cycle reachable from class {source}')

    distance = {source: 0}
    for node in nx.topological_sort(reachable):
        for succ in reachable.successors(node):
            distance[succ] = max(distance.get(succ, 0), distance[node] + 1)

    layers = [[] for _ in range(max(distance.values()) + 1)]
    for node, d in distance.items():
        layers[d].append(node)
    return LayeredSubgraph(source, tuple(tuple(sorted(layer)) for layer in layers))


def dm(ls: LayeredSubgraph) -> int:
    """
    Dependency measure: product over layers of 1 + the number of constraints in the layer.
    """
    out = 1
    for layer in ls.layers:
        out *= 1 + sum(len(c) for c in layer)
    return out


def dmc(cs: ConstraintSet) -> int:
    """
    Largest dependency measure over all classes; 1 when there are no constraints.
    """
    dg = dependency_digraph(constraint_classes(cs))
    return max((dm(layered_subgraph(dg, c)) for c in dg.classes), default=1)


def crrc_guarantee(n, k, dmc_value) -> float:
    """
    Approximation factor 2 (1 - k/n) / (3 DMC) of `crrc` for k constraints on n vertices.
    """
    if n < 1 or not 0 <= k <= n:
        raise DomainError(f'Need n >= 1 and 0 <= k <= n, got n={n}, k={k}')
    if dmc_value < 1:
        raise DomainError(f'The dependency measure is at least 1, got {dmc_value}')
    return 2 * (1 - k / n) / (3 * dmc_value)
