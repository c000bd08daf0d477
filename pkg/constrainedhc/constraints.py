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
Triplet constraints pq|s ("merge p and q before s joins them"), the BUILD feasibility test and
the supergraph contraction that restricts divisive algorithms to feasible cuts.
"""
import dataclasses
import numbers
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx

from constrainedhc.graph import ClusterTree, WeightedGraph
from constrainedhc.utils import DomainError
from constrainedhc.utils.log import get_logger


@dataclasses.dataclass(frozen=True, order=True)
class TripletConstraint:
    p: int
    q: int
    s: int

    def __post_init__(self):
        for v in (self.p, self.q, self.s):
            if isinstance(v, bool) or not isinstance(v, numbers.Integral) or v < 0:
                raise DomainError(f'Constraint ids must be nonnegative integers, got {v!r}')
        if len({self.p, self.q, self.s}) != 3:
            raise DomainError(f'Constraint ids must be distinct: {self.p} {self.q} | {self.s}')
        if self.p > self.q:
            p, q = self.q, self.p
            object.__setattr__(self, 'p', p)
            object.__setattr__(self, 'q', q)

    @property
    def base(self) -> Tuple[int, int]:
        return self.p, self.q

    @property
    def vertices(self):
        return self.p, self.q, self.s

    def __str__(self):
        return f'{self.p} {self.q} | {self.s}'


class ConstraintSet:
    """
    Ordered collection of distinct triplet constraints, each with a nonnegative base cost.

    Constraints may be given as `TripletConstraint` objects or as (p, q, s) tuples.
    """

    def __init__(self, constraints: Iterable = (), base_costs: Optional[Iterable[float]] = None):
        constraints = [c if isinstance(c, TripletConstraint) else TripletConstraint(*c)
                       for c in constraints]
        costs = [1] * len(constraints) if base_costs is None else list(base_costs)
        if len(costs) != len(constraints):
            raise DomainError(f'Got {len(costs)} base costs for {len(constraints)} constraints')

        self._costs: Dict[TripletConstraint, float] = {}
        for c, cost in zip(constraints, costs):
            if c in self._costs:
                raise DomainError(f'Duplicate constraint {c}')
            if isinstance(cost, bool) or not isinstance(cost, numbers.Real) or not cost >= 0:
                raise DomainError(f'Base cost of {c} must be a nonnegative number, got {cost!r}')
            self._costs[c] = cost

    def __iter__(self):
        return iter(self._costs)

    def __len__(self):
        return len(self._costs)

    def __contains__(self, c):
        if not isinstance(c, TripletConstraint):
            c = TripletConstraint(*c)
        return c in self._costs

    def __bool__(self):
        return bool(self._costs)

    def cost(self, c: TripletConstraint):
        return self._costs[c]

    def items(self):
        return self._costs.items()

    def vertices(self) -> FrozenSet[int]:
        return frozenset(v for c in self._costs for v in c.vertices)

    def subset(self, constraints: Iterable[TripletConstraint]) -> 'ConstraintSet':
        constraints = list(constraints)
        return ConstraintSet(constraints, [self._costs[c] for c in constraints])

    def check_vertices(self, n):
        for c in self._costs:
            if max(c.vertices) >= n:
                raise DomainError(f'Constraint {c} references a vertex outside [0, {n})')

    def __eq__(self, other):
        if not isinstance(other, ConstraintSet):
            return NotImplemented
        return self._costs == other._costs

    def __repr__(self):
        return 'ConstraintSet([{}])'.format(', '.join(str(c) for c in self._costs))


def tree_to_triplets(tree: ClusterTree) -> ConstraintSet:
    """
    Equivalent triplet constraints for a binary tree over k >= 3 leaves.

    Cherries are removed deepest first (leftmost first within a depth); removing the cherry
    (a, b) emits ab|x where x labels the cherry's sibling, and the cherry becomes a leaf labelled
    a. Labels are the leftmost leaf of a subtree. Emits k - 2 constraints.
    """
    if tree.n_leaves < 3:
        raise DomainError(f'Need at least 3 leaves to express a tree as triplets, got {tree.n_leaves}')

    by_depth: List[List[int]] = []
    for node in tree.internal_nodes():
        d = tree.depth(node)
        while len(by_depth) <= d:
            by_depth.append([])
        by_depth[d].append(node)

    label = lambda node: tree.leaves_in_order(node)[0]
    out = []
    # The root is the last cherry standing and emits nothing.
    for nodes in reversed(by_depth[1:]):
        for node in nodes:
            left, right = tree.children(node)
            siblings = tree.children(tree.parent(node))
            sibling = siblings[1] if siblings[0] == node else siblings[0]
            out.append(TripletConstraint(label(left), label(right), label(sibling)))
    return ConstraintSet(out)


@dataclasses.dataclass(frozen=True)
class BuildResult:
    """
    Outcome of BUILD: a satisfying tree, or the cluster whose constraint graph was connected.
    """
    feasible: bool
    tree: Optional[ClusterTree] = None
    conflict: FrozenSet[int] = frozenset()

    def __bool__(self):
        return self.feasible


class _Conflict(Exception):
    def __init__(self, cluster):
        self.cluster = cluster


def _build(cluster: Tuple[int, ...], active: List[TripletConstraint]):
    if len(cluster) == 1:
        return cluster[0]

    blocks = supernodes(cluster, active)
    if len(blocks) == 1:
        raise _Conflict(cluster)

    block_of = {v: i for i, block in enumerate(blocks) for v in block}
    inside = [[] for _ in blocks]
    for c in active:
        if block_of[c.s] == block_of[c.p]:
            inside[block_of[c.p]].append(c)

    nested = None
    for block, sub in zip(blocks, inside):
        subtree = _build(block, sub)
        nested = subtree if nested is None else (nested, subtree)
    return nested


def build(vertices: Iterable[int], cs: ConstraintSet) -> BuildResult:
    """
    Aho et al.'s BUILD over `vertices`.

    Multiway splits are binarized left-deep with blocks in order of their smallest vertex.
    """
    cluster = tuple(sorted(set(vertices)))
    if not cluster:
        raise DomainError('BUILD needs at least one vertex')
    members = set(cluster)
    for c in cs:
        if not members.issuperset(c.vertices):
            raise DomainError(f'Constraint {c} references vertices outside the given set')

    try:
        nested = _build(cluster, list(cs))
    except _Conflict as e:
        get_logger().debug('BUILD: constraints connect all of %s', list(e.cluster))
        return BuildResult(False, conflict=frozenset(e.cluster))
    return BuildResult(True, tree=ClusterTree(nested))


def active_constraints(vertices, cs: ConstraintSet) -> ConstraintSet:
    """
    Constraints with all three endpoints inside `vertices`.
    """
    members = vertices if isinstance(vertices, (set, frozenset)) else set(vertices)
    return cs.subset(c for c in cs if c.p in members and c.q in members and c.s in members)


def supernodes(vertices: Sequence[int], active: Iterable[TripletConstraint]) -> List[Tuple[int, ...]]:
    """
    Components of the pair graph {p-q : pq|s active} over `vertices`, ordered by smallest vertex.
    """
    pairs = nx.Graph()
    pairs.add_nodes_from(vertices)
    pairs.add_edges_from(c.base for c in active)
    return sorted((tuple(sorted(block)) for block in nx.connected_components(pairs)),
                  key=lambda block: block[0])


@dataclasses.dataclass(frozen=True)
class SuperGraph:
    """
    A cluster contracted into supernodes; block i of `blocks` is vertex i of `contracted`.
    """
    blocks: Tuple[Tuple[int, ...], ...]
    block_of: Dict[int, int]
    contracted: WeightedGraph

    @property
    def vertex_counts(self) -> Tuple[int, ...]:
        return tuple(len(block) for block in self.blocks)

    def expand(self, block_ids: Iterable[int]) -> FrozenSet[int]:
        return frozenset(v for b in block_ids for v in self.blocks[b])


def contract(g: WeightedGraph, vertices: Iterable[int], active: ConstraintSet) -> SuperGraph:
    cluster = sorted(set(vertices))
    blocks = tuple(supernodes(cluster, active))
    block_of = {v: i for i, block in enumerate(blocks) for v in block}

    edges = []
    for v in cluster:
        for u, w in g.neighbors(v).items():
            if v < u and u in block_of and block_of[u] != block_of[v]:
                edges.append((block_of[v], block_of[u], w))

    return SuperGraph(blocks, block_of, WeightedGraph(len(blocks), edges))


def is_violated(tree: ClusterTree, c: TripletConstraint) -> bool:
    return tree.contains(tree.lca(c.p, c.q), c.s)


def violated_constraints(tree: ClusterTree, cs: ConstraintSet) -> List[TripletConstraint]:
    return [c for c in cs if is_violated(tree, c)]


def feasible_cut(vertices, split, cs: ConstraintSet) -> bool:
    """
    Whether the split (B1, B2) of `vertices` keeps every active pair on one side.
    """
    members = set(vertices)
    left, right = (set(side) for side in split)
    if not left or not right or left & right or left | right != members:
        raise DomainError('Split sides must be nonempty, disjoint and cover the vertex set')

    return all((c.p in left) == (c.q in left) for c in active_constraints(members, cs))
