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
One-shot cut subroutines used by the divisive and randomized algorithms.

Every cut returned here is oriented the same way: `Cut.side` never contains vertex 0, and among
equally good cuts the lexicographically smallest sorted side wins.

The exact oracles do not enumerate raw subsets. Vertices with identical weights to every other
vertex (twins) are interchangeable, so a cut's value only depends on how many members of each
twin class it takes. For twin-free graphs this is the usual 2^(n-1) - 1 subset enumeration.
"""
import dataclasses
import math
import random
from typing import FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from constrainedhc import config
from constrainedhc.graph import Hyperedge3, WeightedGraph
from constrainedhc.utils import DomainError, NoAdmissibleCutError
from constrainedhc.utils.log import get_logger

EXACT = 'exact'
HEURISTIC = 'heuristic'
SPECTRAL = 'spectral'
LOCAL = 'local'

_CHUNK = 1 << 15
_RTOL = 1e-12


@dataclasses.dataclass(frozen=True)
class Cut:
    side: FrozenSet[int]
    crossing_weight: float
    objective_value: float

    def sides(self, vertices: Iterable[int]) -> Tuple[FrozenSet[int], FrozenSet[int]]:
        """
        (rest, side) as a split of `vertices`; the first part holds the smallest vertex.
        """
        rest = frozenset(vertices) - self.side
        return rest, self.side


def _require_two(g: WeightedGraph):
    if g.n < 2:
        raise DomainError(f'A cut needs at least 2 vertices, got {g.n}')


def _sparsity(g: WeightedGraph, side):
    crossing = g.crossing_weight(side)
    k = len(side)
    return crossing, crossing / (k * (g.n - k))


def _oriented(side, n):
    side = frozenset(side)
    return frozenset(range(n)) - side if 0 in side else side


class _TwinClasses:
    """
    Twin classes of a dense weight matrix and the count-vector space over them.

    Class 0 always holds vertex 0; a counted side never takes vertex 0 itself, so the space
    covers every cut exactly once.
    """

    def __init__(self, a: np.ndarray, vertex_weights: np.ndarray, pinned=frozenset(), limit=None):
        n = len(a)
        reps, members = [], []
        mask = np.ones(n, dtype=bool)
        for v in range(n):
            joined = False
            if v not in pinned:
                for i, r in enumerate(reps):
                    if r is None or vertex_weights[r] != vertex_weights[v]:
                        continue
                    mask[[r, v]] = False
                    same = np.array_equal(a[r, mask], a[v, mask])
                    mask[[r, v]] = True
                    if same:
                        members[i].append(v)
                        joined = True
                        break
            if not joined:
                reps.append(None if v in pinned else v)
                members.append([v])

        self.n = n
        self.members = members
        self.sizes = np.array([len(m) for m in members], dtype=np.int64)
        first = [m[0] for m in members]
        self.weights = np.asarray(vertex_weights, dtype=float)[first]
        self.inter = a[np.ix_(first, first)].astype(float)
        np.fill_diagonal(self.inter, 0.0)
        self.intra = np.array([a[m[0], m[1]] if len(m) > 1 else 0.0 for m in members])

        self.radices = self.sizes + 1
        self.radices[0] = self.sizes[0]
        self.space = int(np.prod(self.radices, dtype=object))
        if limit is not None and self.space > 2 ** (limit - 1):
            raise DomainError(f'Exhaustive cut search over {n} vertices ({len(members)} twin '
                              f'classes) exceeds the limit of {limit}; use the spectral heuristic')
        self.strides = np.ones(len(members), dtype=np.int64)
        for i in range(1, len(members)):
            self.strides[i] = self.strides[i - 1] * self.radices[i - 1]

    def chunks(self):
        for start in range(1, self.space, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, self.space), dtype=np.int64)
            yield (idx[:, None] // self.strides[None, :]) % self.radices[None, :]

    def crossing(self, x: np.ndarray) -> np.ndarray:
        y = self.sizes[None, :] - x
        return (x * y) @ self.intra + ((x @ self.inter) * y).sum(axis=1)

    def side_of(self, counts) -> Tuple[int, ...]:
        side = []
        for i, (m, c) in enumerate(zip(self.members, counts)):
            pool = m[1:] if i == 0 else m
            side.extend(pool[:int(c)])
        return tuple(sorted(side))


def _best_rows(keys: np.ndarray, rows: np.ndarray):
    finite = np.isfinite(keys)
    if not finite.any():
        return None, None
    best = keys[finite].min()
    sel = finite & (keys <= best + _RTOL * abs(best))
    return keys[sel], rows[sel]


def _exhaustive(classes: _TwinClasses, key_fn, secondary_fn=None):
    """
    Minimize key_fn over all count vectors; ties go to the smaller secondary key, then to the
    lexicographically smallest side. Returns None when every key is infinite.
    """
    kept_keys, kept_rows = [], []
    for x in classes.chunks():
        keys, rows = _best_rows(key_fn(x), x)
        if keys is not None:
            kept_keys.append(keys)
            kept_rows.append(rows)
    if not kept_keys:
        return None

    keys, rows = _best_rows(np.concatenate(kept_keys), np.concatenate(kept_rows))
    if secondary_fn is not None:
        _, rows = _best_rows(secondary_fn(rows), rows)
    return frozenset(min(classes.side_of(r) for r in rows))


def sparsest_cut_exact(g: WeightedGraph, limit=config.EXHAUSTIVE_LIMIT) -> Cut:
    """
    Minimize w(S, V-S) / (|S| |V-S|) by exhaustive search.
    """
    _require_two(g)
    classes = _TwinClasses(g.adjacency_matrix(), np.ones(g.n), limit=limit)

    def key(x):
        k = x.sum(axis=1)
        return classes.crossing(x) / (k * (g.n - k))

    side = _exhaustive(classes, key)
    crossing, value = _sparsity(g, side)
    return Cut(side, crossing, value)


def _components(g: WeightedGraph) -> List[Tuple[int, ...]]:
    support = nx.Graph()
    support.add_nodes_from(range(g.n))
    support.add_edges_from((u, v) for u, v, w in g.edges if w > 0)
    return sorted((tuple(sorted(c)) for c in nx.connected_components(support)),
                  key=lambda c: c[0])


def _fiedler_vector(a: np.ndarray, tolerance, max_iterations, seed) -> np.ndarray:
    """
    Second eigenvector of the normalized Laplacian of a connected graph, mapped back to vertex
    coordinates (D^-1/2 x).

    Power iteration on I + D^-1/2 A D^-1/2, whose spectrum is 2 minus the Laplacian's and is
    nonnegative, deflated against the top eigenvector D^1/2 1.
    """
    n = len(a)
    inv_sqrt = 1.0 / np.sqrt(a.sum(axis=1))
    m = np.eye(n) + inv_sqrt[:, None] * a * inv_sqrt[None, :]
    top = 1.0 / inv_sqrt
    top /= np.linalg.norm(top)

    x = np.random.default_rng(seed).standard_normal(n)
    x -= top * (top @ x)
    x /= np.linalg.norm(x)
    for _ in range(max_iterations):
        y = m @ x
        y -= top * (top @ y)
        norm = np.linalg.norm(y)
        if norm == 0:
            break
        y /= norm
        converged = np.linalg.norm(y - x) < tolerance
        x = y
        if converged:
            break
    else:
        get_logger().warning('Power iteration did not converge within %d iterations on %d '
                             'vertices; using the last iterate', max_iterations, n)
    return inv_sqrt * x


def _spectral_order(g: WeightedGraph, tolerance, max_iterations, seed) -> List[int]:
    """
    Vertices sorted by Fiedler coordinate; components are laid out one after another.
    """
    order = []
    for component in _components(g):
        if len(component) <= 2:
            order.extend(component)
            continue
        sub = g.induced(component)
        f = _fiedler_vector(sub.adjacency_matrix(), tolerance, max_iterations, seed)
        order.extend(component[i] for i in np.argsort(f, kind='stable'))
    return order


def _sweep_crossings(a: np.ndarray, order: Sequence[int]) -> np.ndarray:
    """
    Crossing weight of every proper prefix of `order`.
    """
    n = len(order)
    degree = a.sum(axis=1)
    inside = np.zeros(n, dtype=bool)
    crossing = 0.0
    out = np.empty(n - 1)
    for k, v in enumerate(order[:-1]):
        crossing += degree[v] - 2.0 * a[v, inside].sum()
        inside[v] = True
        out[k] = crossing
    return out


def sparsest_cut_spectral(g: WeightedGraph, tolerance=config.SPECTRAL_TOLERANCE,
                          max_iterations=config.SPECTRAL_MAX_ITERATIONS,
                          seed=config.SPECTRAL_SEED) -> Cut:
    """
    Best sweep cut along the Fiedler vector of the normalized Laplacian.

    A disconnected graph is split off from the component of vertex 0 at no cost.
    """
    _require_two(g)
    components = _components(g)
    if len(components) > 1:
        side = frozenset(range(g.n)) - frozenset(components[0])
        return Cut(side, 0, 0.0)

    order = _spectral_order(g, tolerance, max_iterations, seed)
    crossings = _sweep_crossings(g.adjacency_matrix(), order)
    k = np.arange(1, g.n)
    best = int(np.argmin(crossings / (k * (g.n - k))))
    side = _oriented(order[:best + 1], g.n)
    crossing, value = _sparsity(g, side)
    return Cut(side, crossing, value)


def balanced_cut(g: WeightedGraph, ratio=config.BALANCE_RATIO, mode=EXACT, vertex_weights=None,
                 min_side=None, limit=config.EXHAUSTIVE_LIMIT, tolerance=config.SPECTRAL_TOLERANCE,
                 max_iterations=config.SPECTRAL_MAX_ITERATIONS,
                 seed=config.SPECTRAL_SEED) -> Cut:
    """
    Minimum crossing weight subject to both sides weighing at least ceil(ratio * total).

    Vertex weights default to 1; `min_side` overrides the ratio-derived floor.
    """
    _require_two(g)
    weights = np.ones(g.n) if vertex_weights is None else np.asarray(vertex_weights, dtype=float)
    if len(weights) != g.n:
        raise DomainError(f'Got {len(weights)} vertex weights for {g.n} vertices')
    total = weights.sum()
    floor = math.ceil(ratio * total - 1e-9) if min_side is None else min_side

    if mode == EXACT:
        classes = _TwinClasses(g.adjacency_matrix(), weights, limit=limit)

        def key(x):
            w = x @ classes.weights
            keys = classes.crossing(x)
            keys[(w < floor) | (total - w < floor)] = np.inf
            return keys

        side = _exhaustive(classes, key)
    elif mode in (HEURISTIC, SPECTRAL):
        order = _spectral_order(g, tolerance, max_iterations, seed)
        crossings = _sweep_crossings(g.adjacency_matrix(), order)
        prefix = np.cumsum(weights[order])[:-1]
        crossings[(prefix < floor) | (total - prefix < floor)] = np.inf
        side = None
        if np.isfinite(crossings).any():
            side = _oriented(order[:int(np.argmin(crossings)) + 1], g.n)
    else:
        raise DomainError(f'Unknown balanced cut mode "{mode}"')

    if side is None:
        raise NoAdmissibleCutError(f'No cut of {g.n} vertices leaves {floor} on both sides')
    crossing = g.crossing_weight(side)
    return Cut(side, crossing, crossing)


def _density_of(a: np.ndarray, inside: np.ndarray):
    k = int(inside.sum())
    crossing = a[inside][:, ~inside].sum()
    return crossing / (k * (len(a) - k))


def densest_cut(g: WeightedGraph, mode=EXACT, epsilon=config.LOCAL_EPSILON, rng=None,
                limit=config.EXHAUSTIVE_LIMIT) -> Cut:
    """
    Maximize w(S, V-S) / (|S| |V-S|).

    `local` mode starts from a random cut and applies single-vertex moves while one improves
    the density by a factor of at least 1 + epsilon.
    """
    _require_two(g)
    if mode == EXACT:
        classes = _TwinClasses(g.adjacency_matrix(), np.ones(g.n), limit=limit)

        def key(x):
            k = x.sum(axis=1)
            return -classes.crossing(x) / (k * (g.n - k))

        side = _exhaustive(classes, key)
    elif mode == LOCAL:
        if not epsilon > 0:
            raise DomainError(f'Local search needs epsilon > 0, got {epsilon}')
        side = _local_densest(g, epsilon, rng or random.Random(config.DEFAULT_SEED))
    else:
        raise DomainError(f'Unknown densest cut mode "{mode}"')

    crossing, value = _sparsity(g, side)
    return Cut(side, crossing, value)


def _improves(new, old, epsilon):
    if old == 0:
        return new > 0
    return new >= (1 + epsilon) * old


def _local_densest(g: WeightedGraph, epsilon, rng: random.Random) -> FrozenSet[int]:
    a = g.adjacency_matrix()
    _, start = random_cut(range(g.n), rng)
    inside = np.zeros(g.n, dtype=bool)
    inside[list(start)] = True
    density = _density_of(a, inside)

    moves = 0
    improved = True
    while improved:
        improved = False
        for v in range(g.n):
            inside[v] = not inside[v]
            k = int(inside.sum())
            if 0 < k < g.n:
                candidate = _density_of(a, inside)
                if _improves(candidate, density, epsilon):
                    density = candidate
                    moves += 1
                    improved = True
                    break
            inside[v] = not inside[v]

    get_logger().debug('Local densest cut settled after %d moves at density %g', moves, density)
    return _oriented(np.flatnonzero(inside).tolist(), g.n)


def gadget_to_graph(hyperedges: Iterable[Hyperedge3], n=None) -> WeightedGraph:
    """
    Replace each 3-hyperedge by a triangle whose cuts weigh exactly the hyperedge's split
    weights.
    """
    hyperedges = list(hyperedges)
    if n is None:
        n = max((max(h.vertices) for h in hyperedges), default=-1) + 1

    edges = []
    for h in hyperedges:
        triangle = (
            (h.a, h.b, (h.w_bc_a + h.w_ac_b - h.w_ab_c) / 2),
            (h.a, h.c, (h.w_bc_a + h.w_ab_c - h.w_ac_b) / 2),
            (h.b, h.c, (h.w_ac_b + h.w_ab_c - h.w_bc_a) / 2),
        )
        scale = max(h.w_ab_c, h.w_ac_b, h.w_bc_a)
        for u, v, w in triangle:
            if w < 0 and w >= -_RTOL * scale:
                w = 0
            if w < 0:
                raise DomainError(f'Split weights of hyperedge {h.vertices} violate the triangle '
                                  f'inequality; its triangle would need a negative edge')
            if w > 0:
                edges.append((u, v, w))
    return WeightedGraph(n, edges)


def hyper_split_weight(h: Hyperedge3, side) -> float:
    """
    Weight the cut (side, rest) charges hyperedge `h`; zero unless it separates the endpoints.
    """
    a, b, c = (v in side for v in h.vertices)
    if a == b == c:
        return 0
    if a == b:
        return h.w_ab_c
    if a == c:
        return h.w_ac_b
    return h.w_bc_a


def hyper_sparsest_cut(g: WeightedGraph, hyperedges: Sequence[Hyperedge3], mode=EXACT,
                       limit=config.EXHAUSTIVE_LIMIT, tolerance=config.SPECTRAL_TOLERANCE,
                       max_iterations=config.SPECTRAL_MAX_ITERATIONS,
                       seed=config.SPECTRAL_SEED) -> Cut:
    """
    Minimize (w(S, V-S) + hyperedge split weights) / (|S| |V-S|) through the triangle gadget.

    Among tied cuts the one charging less hyperedge weight wins.
    """
    _require_two(g)
    hyperedges = list(hyperedges)
    combined = g + gadget_to_graph(hyperedges, g.n)

    if mode == EXACT:
        pinned = frozenset(v for h in hyperedges for v in h.vertices)
        classes = _TwinClasses(combined.adjacency_matrix(), np.ones(g.n), pinned=pinned,
                               limit=limit)
        column = {m[0]: i for i, m in enumerate(classes.members)}

        def key(x):
            k = x.sum(axis=1)
            return classes.crossing(x) / (k * (g.n - k))

        def charged(x):
            total = np.zeros(len(x))
            for h in hyperedges:
                a, b, c = (x[:, column[v]] > 0 for v in h.vertices)
                total += np.where(a == b, np.where(b == c, 0.0, h.w_ab_c),
                                  np.where(a == c, h.w_ac_b, h.w_bc_a))
            return total

        side = _exhaustive(classes, key, charged)
    elif mode in (HEURISTIC, SPECTRAL):
        side = sparsest_cut_spectral(combined, tolerance, max_iterations, seed).side
    else:
        raise DomainError(f'Unknown hyper sparsest cut mode "{mode}"')

    crossing, value = _sparsity(combined, side)
    return Cut(side, crossing, value)


def random_cut(vertices: Iterable[int], rng: random.Random) -> Tuple[FrozenSet[int], FrozenSet[int]]:
    """
    Split `vertices` by independent fair coins, resampling one-sided outcomes.

    The first part holds the smallest vertex.
    """
    vertices = sorted(vertices)
    k = len(vertices)
    if k < 2:
        raise DomainError(f'A random cut needs at least 2 vertices, got {k}')

    full = (1 << k) - 1
    bits = rng.getrandbits(k)
    while bits == 0 or bits == full:
        bits = rng.getrandbits(k)
    if not bits & 1:
        bits ^= full

    first = frozenset(v for i, v in enumerate(vertices) if bits >> i & 1)
    return first, frozenset(vertices) - first
