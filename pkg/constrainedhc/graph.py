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
Weighted graphs, binary cluster trees and the objectives evaluated on them.

All objects are immutable once built; the cost functions are pure.
"""
import dataclasses
import itertools
import math
import numbers
from typing import TYPE_CHECKING, Dict, FrozenSet, Iterable, List, Sequence, Tuple

import numpy as np

from constrainedhc.utils import DomainError

if TYPE_CHECKING:
    from constrainedhc.constraints import ConstraintSet


def _check_weight(w):
    if isinstance(w, bool) or not isinstance(w, numbers.Real):
        raise DomainError(f'Edge weight must be a real number, got {w!r}')
    if not math.isfinite(w) or w < 0:
        raise DomainError(f'Edge weight must be finite and nonnegative, got {w!r}')
    return w


def _check_vertex(v, n):
    if isinstance(v, bool) or not isinstance(v, numbers.Integral):
        raise DomainError(f'Vertex id must be an integer, got {v!r}')
    if not 0 <= v < n:
        raise DomainError(f'Vertex id {v} out of range [0, {n})')
    return int(v)


class WeightedGraph:
    """
    Undirected graph on vertices 0..n-1 with nonnegative edge weights.

    Parallel edges are merged by summing their weights. When every weight is integral the
    weights are stored as Python ints so that costs are computed exactly.
    """

    __slots__ = ('n', 'integral', '_weights', '_adjacency')

    def __init__(self, n, edges=()):
        if isinstance(n, bool) or not isinstance(n, numbers.Integral) or n < 0:
            raise DomainError(f'Vertex count must be a nonnegative integer, got {n!r}')
        self.n = int(n)

        weights = {}
        for u, v, w in edges:
            u = _check_vertex(u, self.n)
            v = _check_vertex(v, self.n)
            if u == v:
                raise DomainError(f'Self-loop on vertex {u} is not allowed')
            key = (u, v) if u < v else (v, u)
            weights[key] = weights.get(key, 0) + _check_weight(w)

        self.integral = all(float(w).is_integer() for w in weights.values())
        cast = int if self.integral else float
        self._weights = {key: cast(w) for key, w in sorted(weights.items())}

        self._adjacency = [dict() for _ in range(self.n)]
        for (u, v), w in self._weights.items():
            self._adjacency[u][v] = w
            self._adjacency[v][u] = w

    @property
    def edges(self) -> List[Tuple[int, int, float]]:
        return [(u, v, w) for (u, v), w in self._weights.items()]

    @property
    def num_edges(self):
        return len(self._weights)

    @property
    def total_weight(self):
        return sum(self._weights.values())

    def weight(self, u, v):
        return self._adjacency[u].get(v, 0)

    def neighbors(self, v) -> Dict[int, float]:
        return dict(self._adjacency[v])

    def degree(self, v):
        return sum(self._adjacency[v].values())

    def crossing_weight(self, side) -> float:
        side = set(side)
        total = 0
        for v in side:
            for u, w in self._adjacency[v].items():
                if u not in side:
                    total += w
        return total

    def induced(self, vertices: Sequence[int]) -> 'WeightedGraph':
        """
        Subgraph on `vertices`; vertex i of the result is vertices[i].
        """
        local = {v: i for i, v in enumerate(vertices)}
        edges = []
        for v in vertices:
            for u, w in self._adjacency[v].items():
                if u in local and v < u:
                    edges.append((local[v], local[u], w))
        return WeightedGraph(len(vertices), edges)

    def scaled(self, alpha) -> 'WeightedGraph':
        _check_weight(alpha)
        return WeightedGraph(self.n, [(u, v, alpha * w) for u, v, w in self.edges])

    def __add__(self, other: 'WeightedGraph') -> 'WeightedGraph':
        if other.n != self.n:
            raise DomainError(f'Cannot add graphs on {self.n} and {other.n} vertices')
        return WeightedGraph(self.n, self.edges + other.edges)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=float)
        for (u, v), w in self._weights.items():
            a[u, v] = a[v, u] = w
        return a

    def __eq__(self, other):
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self._weights == other._weights

    def __hash__(self):
        return hash((self.n, tuple(self._weights.items())))

    def __repr__(self):
        return f'WeightedGraph(n={self.n}, edges={self.edges!r})'


def _as_label(obj):
    if isinstance(obj, bool) or not isinstance(obj, numbers.Integral):
        raise DomainError(f'Tree leaves must be integer ids, got {obj!r}')
    return int(obj)


class ClusterTree:
    """
    Rooted binary tree whose leaves are distinct integer labels.

    Built from a nested pair structure, e.g. ``((0, 1), 2)``. Nodes are numbered in preorder
    (root is 0, left subtree before right subtree); parent, depth, subtree size and leaf set of
    every node are computed once at construction.
    """

    __slots__ = ('_children', '_parent', '_depth', '_size', '_label', '_leaves_of', '_nested',
                 '_node_of', 'leaves')

    def __init__(self, nested):
        children, labels, parents = [], [], []

        stack = [(nested, -1, 0)]
        while stack:
            obj, parent, slot = stack.pop()
            node = len(labels)
            parents.append(parent)
            if isinstance(obj, (tuple, list)):
                if len(obj) != 2:
                    raise DomainError(f'Cluster trees are binary; got a node with {len(obj)} children')
                labels.append(None)
                children.append([None, None])
                stack.append((obj[1], node, 1))
                stack.append((obj[0], node, 0))
            else:
                labels.append(_as_label(obj))
                children.append(None)
            if parent >= 0:
                children[parent][slot] = node

        count = len(labels)
        size = [1] * count
        leaves_of = [None] * count
        nested_of = [None] * count
        for node in reversed(range(count)):
            if children[node] is None:
                leaves_of[node] = (labels[node],)
                nested_of[node] = labels[node]
            else:
                left, right = children[node]
                size[node] = size[left] + size[right]
                leaves_of[node] = leaves_of[left] + leaves_of[right]
                nested_of[node] = (nested_of[left], nested_of[right])

        depth = [0] * count
        for node in range(1, count):
            depth[node] = depth[parents[node]] + 1

        node_of = {}
        for node, label in enumerate(labels):
            if label is not None:
                if label in node_of:
                    raise DomainError(f'Leaf {label} appears more than once')
                node_of[label] = node

        self._children = [tuple(c) if c is not None else None for c in children]
        self._parent = parents
        self._depth = depth
        self._size = size
        self._label = labels
        self._leaves_of = leaves_of
        self._nested = nested_of[0]
        self._node_of = node_of
        self.leaves = frozenset(node_of)

    @staticmethod
    def join(left: 'ClusterTree', right: 'ClusterTree') -> 'ClusterTree':
        return ClusterTree((left.nested, right.nested))

    @property
    def root(self):
        return 0

    @property
    def nested(self):
        return self._nested

    @property
    def n_leaves(self):
        return len(self._node_of)

    @property
    def num_nodes(self):
        return len(self._label)

    def children(self, node):
        return self._children[node]

    def parent(self, node):
        return self._parent[node]

    def depth(self, node):
        return self._depth[node]

    def size(self, node):
        return self._size[node]

    def is_leaf(self, node):
        return self._children[node] is None

    def label(self, node):
        return self._label[node]

    def node_of(self, label):
        try:
            return self._node_of[label]
        except KeyError:
            raise DomainError(f'{label} is not a leaf of this tree') from None

    def leaf_set(self, node) -> FrozenSet[int]:
        return frozenset(self._leaves_of[node])

    def leaves_in_order(self, node=0) -> Tuple[int, ...]:
        return self._leaves_of[node]

    def internal_nodes(self):
        return (node for node in range(self.num_nodes) if self._children[node] is not None)

    def lca(self, x, y):
        """
        Node id of the lowest common ancestor of leaves `x` and `y`.
        """
        u = self.node_of(x)
        v = self.node_of(y)
        depth, parent = self._depth, self._parent
        while depth[u] > depth[v]:
            u = parent[u]
        while depth[v] > depth[u]:
            v = parent[v]
        while u != v:
            u = parent[u]
            v = parent[v]
        return u

    def lca_size(self, x, y):
        return self._size[self.lca(x, y)]

    def contains(self, node, label):
        """
        Whether leaf `label` lies in the subtree rooted at `node`.
        """
        u = self.node_of(label)
        while self._depth[u] > self._depth[node]:
            u = self._parent[u]
        return u == node

    def triplets(self) -> FrozenSet[Tuple[int, int, int]]:
        """
        Every relation (p, q, s), p < q, such that LCA(p, q) lies strictly below LCA(p, s).
        """
        out = set()
        for x, y, z in itertools.combinations(sorted(self.leaves), 3):
            pairs = ((x, y, z), (x, z, y), (y, z, x))
            depths = [self._depth[self.lca(p, q)] for p, q, _ in pairs]
            deepest = max(range(3), key=depths.__getitem__)
            out.add(pairs[deepest])
        return frozenset(out)

    def canonical(self) -> 'ClusterTree':
        """
        Same topology with each node's children ordered by their smallest leaf.
        """
        # (smallest leaf, nested) per node
        keyed = {}
        for node in reversed(range(self.num_nodes)):
            if self._children[node] is None:
                keyed[node] = (self._label[node], self._label[node])
            else:
                left, right = sorted((keyed.pop(c) for c in self._children[node]),
                                     key=lambda pair: pair[0])
                keyed[node] = (left[0], (left[1], right[1]))
        return ClusterTree(keyed[0][1])

    def relabel(self, mapping) -> 'ClusterTree':
        def walk(obj):
            if isinstance(obj, tuple):
                return walk(obj[0]), walk(obj[1])
            return mapping[obj]
        return ClusterTree(walk(self._nested))

    def newick(self):
        parts = {}
        for node in reversed(range(self.num_nodes)):
            if self._children[node] is None:
                parts[node] = str(self._label[node])
            else:
                left, right = self._children[node]
                parts[node] = f'({parts.pop(left)},{parts.pop(right)})'
        return parts[0] + ';'

    def __eq__(self, other):
        if not isinstance(other, ClusterTree):
            return NotImplemented
        return self._nested == other._nested

    def __hash__(self):
        return hash(self._nested)

    def __repr__(self):
        return f'ClusterTree({self.newick()})'


@dataclasses.dataclass(frozen=True)
class Hyperedge3:
    """
    Three vertices with one weight per way of splitting them: `w_ab_c` is charged when a and b
    stay together while c is separated, and so on.
    """
    a: int
    b: int
    c: int
    w_ab_c: float = 0
    w_ac_b: float = 0
    w_bc_a: float = 0

    def __post_init__(self):
        if len({self.a, self.b, self.c}) != 3:
            raise DomainError(f'Hyperedge endpoints must be distinct: {(self.a, self.b, self.c)}')
        for w in (self.w_ab_c, self.w_ac_b, self.w_bc_a):
            _check_weight(w)

    @property
    def vertices(self):
        return self.a, self.b, self.c

    def split_weight(self, x, y):
        """
        Weight charged when `x` and `y` stay together and the third vertex is separated.
        """
        pair = {x, y}
        if pair == {self.a, self.b}:
            return self.w_ab_c
        if pair == {self.a, self.c}:
            return self.w_ac_b
        if pair == {self.b, self.c}:
            return self.w_bc_a
        raise DomainError(f'{(x, y)} is not a pair of hyperedge {self.vertices}')

    def relabel(self, mapping) -> 'Hyperedge3':
        return dataclasses.replace(self, a=mapping[self.a], b=mapping[self.b], c=mapping[self.c])


@dataclasses.dataclass(frozen=True)
class RegularizedInstance:
    graph: WeightedGraph
    constraints: 'ConstraintSet'
    lam: float = 1.0

    def __post_init__(self):
        _check_weight(self.lam)
        for c in self.constraints:
            for v in (c.p, c.q, c.s):
                _check_vertex(v, self.graph.n)

    def hyperedges(self) -> List[Hyperedge3]:
        """
        Map every constraint pq|s with base cost c to a hyperedge that costs nothing when p, q
        stay together and lam * c for either other split.
        """
        out = []
        for c, cost in self.constraints.items():
            penalty = self.lam * cost
            out.append(Hyperedge3(c.p, c.q, c.s, w_ab_c=0, w_ac_b=penalty, w_bc_a=penalty))
        return out


def _check_tree_matches(tree: ClusterTree, g: WeightedGraph):
    if tree.n_leaves != g.n or (g.n and (min(tree.leaves) != 0 or max(tree.leaves) != g.n - 1)):
        raise DomainError(f'Tree leaves do not match the {g.n} graph vertices')


def similarity_cost(tree: ClusterTree, g: WeightedGraph):
    """
    Sum over edges of w_ij times the number of leaves under LCA(i, j).
    """
    _check_tree_matches(tree, g)
    return sum(w * tree.lca_size(u, v) for u, v, w in g.edges)


def dissimilarity_reward(tree: ClusterTree, g: WeightedGraph):
    """
    Same functional as `similarity_cost`, to be maximized when weights are dissimilarities.
    """
    return similarity_cost(tree, g)


def level_partition(tree: ClusterTree, t) -> List[FrozenSet[int]]:
    """
    Maximal clusters of `tree` holding at most `t` leaves, ordered by their smallest leaf.
    """
    if not 1 <= t <= tree.n_leaves:
        raise DomainError(f'Level t={t} out of range [1, {tree.n_leaves}]')

    blocks = []
    stack = [tree.root]
    while stack:
        node = stack.pop()
        if tree.size(node) <= t:
            blocks.append(tree.leaf_set(node))
        else:
            stack.extend(tree.children(node))
    return sorted(blocks, key=min)


def level_cut_weight(tree: ClusterTree, g: WeightedGraph, t):
    _check_tree_matches(tree, g)
    if not 0 <= t <= g.n:
        raise DomainError(f'Level t={t} out of range [0, {g.n}]')
    if t == 0:
        return g.total_weight

    block_of = {}
    for i, block in enumerate(level_partition(tree, t)):
        for v in block:
            block_of[v] = i
    return sum(w for u, v, w in g.edges if block_of[u] != block_of[v])


def level_decomposition_cost(tree: ClusterTree, g: WeightedGraph):
    """
    Sum of the level cut weights for t = 0..n; equals `similarity_cost`.
    """
    return sum(level_cut_weight(tree, g, t) for t in range(g.n + 1))


def scaled_level_bound(tree: ClusterTree, g: WeightedGraph, k):
    """
    (1 / 6k) * sum over t = 0..n of the level cut weight at level floor(t / 6k).
    """
    if k < 1:
        raise DomainError(f'k must be at least 1, got {k}')
    step = 6 * k
    cut = {}
    total = 0
    for t in range(g.n + 1):
        level = t // step
        if level not in cut:
            cut[level] = level_cut_weight(tree, g, level)
        total += cut[level]
    return total / step


def regularized_cost(tree: ClusterTree, inst: RegularizedInstance):
    """
    Similarity cost plus lam * base cost * |T_pq| for every violated constraint pq|s.
    """
    cost = similarity_cost(tree, inst.graph)
    penalty = 0
    for c, base in inst.constraints.items():
        top = tree.lca(c.p, c.q)
        if tree.contains(top, c.s):
            penalty += base * tree.size(top)
    return cost + inst.lam * penalty


def hypergraph_cost(tree: ClusterTree, g: WeightedGraph, hyperedges: Iterable[Hyperedge3]):
    """
    Similarity cost plus, for every hyperedge, the weight of the split made by the smallest
    cluster holding all three endpoints, times that cluster's size.
    """
    cost = similarity_cost(tree, g)
    for h in hyperedges:
        for v in h.vertices:
            _check_vertex(v, g.n)
        pairs = ((h.a, h.b), (h.a, h.c), (h.b, h.c))
        tops = [tree.lca(x, y) for x, y in pairs]
        together = max(range(3), key=lambda i: tree.depth(tops[i]))
        top = min(tops, key=tree.depth)
        cost += h.split_weight(*pairs[together]) * tree.size(top)
    return cost
