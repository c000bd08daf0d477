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
Ground truth for small instances: dynamic programs over vertex subsets and brute-force tree
enumeration.

Subsets are bitmasks. value(S) is the best cost of a tree on S, built from the best first split
(B, S - B) where B holds the lowest vertex of S:

    value(S) = opt over B of |S| * charge(B, S - B) + value(B) + value(S - B)

Hard constraints are checked split by split against the constraints active in S, without the
supergraph machinery the algorithms use.
"""
from typing import Iterator, List, Optional, Tuple

from constrainedhc import config
from constrainedhc.constraints import ConstraintSet, build
from constrainedhc.graph import ClusterTree, Hyperedge3, RegularizedInstance, WeightedGraph
from constrainedhc.utils import DomainError, InfeasibleConstraintsError
from constrainedhc.utils.log import get_logger


def _internal_weights(g: WeightedGraph) -> List[float]:
    """
    Total weight of the edges inside every vertex subset.
    """
    full = 1 << g.n
    adjacency = [g.neighbors(v) for v in range(g.n)]
    internal = [0] * full
    for mask in range(1, full):
        low = (mask & -mask).bit_length() - 1
        rest = mask & (mask - 1)
        internal[mask] = internal[rest] + sum(w for u, w in adjacency[low].items() if rest >> u & 1)
    return internal


def _hyper_charge(hyper, split):
    charge = 0
    for ma, mb, mc, h in hyper:
        a, b, c = bool(split & ma), bool(split & mb), bool(split & mc)
        if a == b == c:
            continue
        if a == b:
            charge += h.w_ab_c
        elif a == c:
            charge += h.w_ac_b
        else:
            charge += h.w_bc_a
    return charge


def _solve(g: WeightedGraph, maximize=False, cs: Optional[ConstraintSet] = None,
           hyperedges: Tuple[Hyperedge3, ...] = (), limit=config.ORACLE_LIMIT):
    n = g.n
    if n < 1:
        raise DomainError('Cannot cluster an empty graph')
    if n > limit:
        raise DomainError(f'Exact optimization is limited to {limit} vertices, got {n}')

    pairs = []
    if cs:
        cs.check_vertices(n)
        if not build(range(n), cs).feasible:
            raise InfeasibleConstraintsError()
        pairs = [(1 << c.p, 1 << c.q, (1 << c.p) | (1 << c.q) | (1 << c.s)) for c in cs]
    hyper = [(1 << h.a, 1 << h.b, 1 << h.c, h) for h in hyperedges]

    full = (1 << n) - 1
    internal = _internal_weights(g)
    value: List[Optional[float]] = [None] * (full + 1)
    choice = [0] * (full + 1)
    for v in range(n):
        value[1 << v] = 0

    for mask in range(1, full + 1):
        if not mask & (mask - 1):
            continue
        size = bin(mask).count('1')
        low = mask & -mask
        rest = mask ^ low
        active = [(pm, qm) for pm, qm, every in pairs if every & mask == every]
        chopped = [h for h in hyper if (h[0] | h[1] | h[2]) & mask == h[0] | h[1] | h[2]]

        best, best_split = None, 0
        sub = rest
        while sub:
            sub = (sub - 1) & rest
            left = sub | low
            right = mask ^ left
            if value[left] is None or value[right] is None:
                continue
            if any(bool(left & pm) != bool(left & qm) for pm, qm in active):
                continue
            cut = internal[mask] - internal[left] - internal[right]
            if chopped:
                cut += _hyper_charge(chopped, left)
            total = size * cut + value[left] + value[right]
            if best is None or (total > best if maximize else total < best):
                best, best_split = total, left
        value[mask] = best
        choice[mask] = best_split

    if value[full] is None:
        raise InfeasibleConstraintsError()

    def rebuild(mask):
        if not mask & (mask - 1):
            return mask.bit_length() - 1
        left = choice[mask]
        return rebuild(left), rebuild(mask ^ left)

    get_logger().debug('Subset DP over %d vertices: optimum %s', n, value[full])
    return value[full], ClusterTree(rebuild(full))


def opt_similarity(g: WeightedGraph, cs: Optional[ConstraintSet] = None,
                   limit=config.ORACLE_LIMIT) -> Tuple[float, ClusterTree]:
    """
    Minimum similarity cost over all trees, or over the trees satisfying `cs`.
    """
    return _solve(g, maximize=False, cs=cs, limit=limit)


def opt_dissimilarity(g: WeightedGraph, cs: Optional[ConstraintSet] = None,
                      limit=config.ORACLE_LIMIT) -> Tuple[float, ClusterTree]:
    return _solve(g, maximize=True, cs=cs, limit=limit)


def opt_regularized(inst: RegularizedInstance, limit=config.ORACLE_LIMIT) -> Tuple[float, ClusterTree]:
    """
    Minimum regularized cost, solved as the hypergraph problem on the gadget hyperedges.
    """
    return _solve(inst.graph, maximize=False, hyperedges=tuple(inst.hyperedges()), limit=limit)


def _insertions(nested, leaf):
    yield nested, leaf
    if isinstance(nested, tuple):
        left, right = nested
        for sub in _insertions(left, leaf):
            yield sub, right
        for sub in _insertions(right, leaf):
            yield left, sub


def enumerate_trees(n, limit=config.ENUMERATION_LIMIT) -> Iterator[ClusterTree]:
    """
    Every binary tree on leaves 0..n-1, each once: (2n - 3)!! of them.
    """
    if n < 1:
        raise DomainError(f'Need at least one leaf, got {n}')
    if n > limit:
        raise DomainError(f'Tree enumeration is limited to {limit} leaves, got {n}')

    def grow(nested, leaf):
        if leaf == n:
            yield nested
            return
        for bigger in _insertions(nested, leaf):
            yield from grow(bigger, leaf + 1)

    for nested in grow(0, 1):
        yield ClusterTree(nested)
