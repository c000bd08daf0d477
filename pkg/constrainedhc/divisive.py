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
Top-down clustering: recursive sparsest, balanced and densest cuts under hard triplet
constraints, the regularized hyper sparsest cut recursion and plain recursive spectral
clustering.

Hard-constraint algorithms cut each cluster's supergraph, so a constrained pair is never
separated while its outsider is still around.
"""
import dataclasses
import math
import random
from typing import Callable, FrozenSet, Optional, Tuple

from constrainedhc import config, cuts
from constrainedhc.constraints import (ConstraintSet, SuperGraph, active_constraints, build,
                                       contract)
from constrainedhc.graph import ClusterTree, RegularizedInstance, WeightedGraph
from constrainedhc.utils import (DomainError, InfeasibleConstraintsError, InternalError,
                                 NoAdmissibleCutError)
from constrainedhc.utils.log import get_logger

SPARSEST = 'sparsest'
BALANCED = 'balanced'
DENSEST = 'densest'
HYPER_SPARSEST = 'hyper-sparsest'
SPECTRAL = 'spectral'

CUT_KINDS = (SPARSEST, BALANCED, DENSEST, HYPER_SPARSEST, SPECTRAL)
CUT_MODES = (cuts.EXACT, cuts.HEURISTIC, cuts.SPECTRAL, cuts.LOCAL)


@dataclasses.dataclass(frozen=True)
class DivisiveConfig:
    cut_kind: str = SPARSEST
    cut_mode: str = cuts.EXACT
    exhaustive_limit: int = config.EXHAUSTIVE_LIMIT
    epsilon: float = config.LOCAL_EPSILON
    seed: Optional[int] = None
    balance_ratio: float = config.BALANCE_RATIO
    spectral_tolerance: float = config.SPECTRAL_TOLERANCE
    spectral_max_iterations: int = config.SPECTRAL_MAX_ITERATIONS
    spectral_seed: int = config.SPECTRAL_SEED

    def __post_init__(self):
        if self.cut_kind not in CUT_KINDS:
            raise DomainError(f'Unknown cut kind "{self.cut_kind}"; expected one of {CUT_KINDS}')
        if self.cut_mode not in CUT_MODES:
            raise DomainError(f'Unknown cut mode "{self.cut_mode}"; expected one of {CUT_MODES}')
        if self.exhaustive_limit < 2:
            raise DomainError(f'exhaustive_limit must be at least 2, got {self.exhaustive_limit}')
        if self.cut_mode == cuts.LOCAL and not self.epsilon > 0:
            raise DomainError(f'Local search needs epsilon > 0, got {self.epsilon}')

    @staticmethod
    def from_settings(settings, **kwargs) -> 'DivisiveConfig':
        """
        Build a config whose tunables come from a loaded `Config()`.
        """
        defaults = dict(
            exhaustive_limit=settings.exhaustive_limit,
            epsilon=settings.local_epsilon,
            seed=settings.default_seed,
            balance_ratio=settings.balance_ratio,
            spectral_tolerance=settings.spectral_tolerance,
            spectral_max_iterations=settings.spectral_max_iterations,
            spectral_seed=settings.spectral_seed,
        )
        defaults.update(kwargs)
        return DivisiveConfig(**defaults)

    def rng(self) -> random.Random:
        return random.Random(config.DEFAULT_SEED if self.seed is None else self.seed)

    @property
    def spectral(self):
        return dict(tolerance=self.spectral_tolerance, max_iterations=self.spectral_max_iterations,
                    seed=self.spectral_seed)


def divide(n, split: Callable[[Tuple[int, ...]], FrozenSet[int]]) -> ClusterTree:
    """
    Shared recursion: `split(cluster)` returns the part to peel off, which never holds the
    cluster's smallest vertex; that part becomes the right child.
    """
    if n < 1:
        raise DomainError('Cannot cluster an empty graph')

    def recurse(cluster):
        if len(cluster) == 1:
            return cluster[0]
        right = split(cluster)
        left = tuple(v for v in cluster if v not in right)
        get_logger().debug('split %d vertices into %d + %d', len(cluster), len(left), len(right))
        return recurse(left), recurse(tuple(sorted(right)))

    return ClusterTree(recurse(tuple(range(n))))


def check_feasible(g: WeightedGraph, cs: ConstraintSet):
    cs.check_vertices(g.n)
    result = build(range(g.n), cs)
    if not result.feasible:
        raise InfeasibleConstraintsError(cluster=result.conflict)


def _supergraph_divide(g: WeightedGraph, cs: ConstraintSet,
                       choose: Callable[[SuperGraph], cuts.Cut]) -> ClusterTree:
    """
    Recursion over supergraphs: contract each cluster by its active constraints and let
    `choose` cut the contracted graph.
    """
    check_feasible(g, cs)

    def split(cluster):
        sg = contract(g, cluster, active_constraints(cluster, cs))
        if len(sg.blocks) < 2:
            raise InternalError(f'Cluster {list(cluster)} contracted to a single supernode')
        if len(sg.blocks) == 2:
            return sg.expand([1])
        return sg.expand(choose(sg).side)

    return divide(g.n, split)


def crsc(g: WeightedGraph, cs: ConstraintSet, cfg: DivisiveConfig = DivisiveConfig()) -> ClusterTree:
    """
    Constrained recursive sparsest cut.
    """
    if cfg.cut_mode == cuts.EXACT:
        choose = lambda sg: cuts.sparsest_cut_exact(sg.contracted, limit=cfg.exhaustive_limit)
    else:
        choose = lambda sg: cuts.sparsest_cut_spectral(sg.contracted, **cfg.spectral)
    return _supergraph_divide(g, cs, choose)


def crbc(g: WeightedGraph, cs: ConstraintSet, cfg: DivisiveConfig = DivisiveConfig()) -> ClusterTree:
    """
    Constrained recursive balanced cut.

    Balance is measured in original vertices. When no split of the supernodes meets the floor,
    the floor is lowered one vertex at a time.
    """
    mode = cuts.EXACT if cfg.cut_mode == cuts.EXACT else cuts.HEURISTIC

    def choose(sg):
        counts = sg.vertex_counts
        floor = math.ceil(cfg.balance_ratio * sum(counts) - 1e-9)
        while True:
            try:
                cut = cuts.balanced_cut(sg.contracted, mode=mode, vertex_weights=counts,
                                        min_side=floor, limit=cfg.exhaustive_limit,
                                        **cfg.spectral)
            except NoAdmissibleCutError:
                if floor <= 1:
                    raise
                floor -= 1
                continue
            if floor < math.ceil(cfg.balance_ratio * sum(counts) - 1e-9):
                get_logger().warning('No balanced split of %d supernodes (%d vertices); relaxed '
                                     'the side minimum to %d', len(counts), sum(counts), floor)
            return cut

    return _supergraph_divide(g, cs, choose)


def crdc(g: WeightedGraph, cs: ConstraintSet, cfg: DivisiveConfig = DivisiveConfig()) -> ClusterTree:
    """
    Constrained recursive densest cut; aims at a high dissimilarity reward.

    There is no spectral densest cut, so a heuristic mode runs the local search instead.
    """
    mode = cfg.cut_mode
    if mode in (cuts.HEURISTIC, cuts.SPECTRAL):
        get_logger().warning('No %s densest cut; using local search with epsilon %g', mode,
                             cfg.epsilon)
        mode = cuts.LOCAL
    rng = cfg.rng()
    choose = lambda sg: cuts.densest_cut(sg.contracted, mode=mode, epsilon=cfg.epsilon, rng=rng,
                                         limit=cfg.exhaustive_limit)
    return _supergraph_divide(g, cs, choose)


def recursive_spectral(g: WeightedGraph, cs: Optional[ConstraintSet] = None,
                       cfg: DivisiveConfig = DivisiveConfig()) -> ClusterTree:
    """
    Repeated spectral sweep cuts. With constraints the sweep runs on each cluster's supergraph,
    so every cut it can pick is feasible.
    """
    choose = lambda sg: cuts.sparsest_cut_spectral(sg.contracted, **cfg.spectral)
    return _supergraph_divide(g, cs or ConstraintSet(), choose)


def rhsc(inst: RegularizedInstance, cfg: DivisiveConfig = DivisiveConfig()) -> ClusterTree:
    """
    Recursive hyper sparsest cut on the gadget instance of a regularized problem. Constraints
    are soft, so this works for inconsistent constraint sets too.
    """
    g = inst.graph
    hyperedges = inst.hyperedges()
    mode = cuts.EXACT if cfg.cut_mode == cuts.EXACT else cuts.HEURISTIC

    def split(cluster):
        local = {v: i for i, v in enumerate(cluster)}
        active = [h.relabel(local) for h in hyperedges
                  if h.a in local and h.b in local and h.c in local]
        cut = cuts.hyper_sparsest_cut(g.induced(cluster), active, mode=mode,
                                      limit=cfg.exhaustive_limit, **cfg.spectral)
        return frozenset(cluster[i] for i in cut.side)

    return divide(g.n, split)


def densest_failure_instance(n, heavy_weight=None, light_weight=None, bc_weight=None):
    """
    Instance on which constrained recursive densest cut loses a factor growing with n; the
    family `demo-densest` runs at each requested size.

    Vertices 0, 1, 2 play a, b, c; vertices 3..n-1 form a unit clique. w(a, b) is heavy, c is
    tied to b and to every clique vertex by light edges, and the constraint ab|c keeps a and b
    together until c is gone. Defaults: heavy n^3, light 1/n^2, w(b, c) light.
    """
    if n < 6:
        raise DomainError(f'The densest cut failure instance needs n >= 6, got {n}')
    heavy = n ** 3 if heavy_weight is None else heavy_weight
    light = 1 / n ** 2 if light_weight is None else light_weight
    bc = light if bc_weight is None else bc_weight
    if not (heavy > 0 and light > 0 and bc > 0):
        raise DomainError('Densest cut failure instance weights must be positive')

    edges = [(0, 1, heavy), (1, 2, bc)]
    edges += [(2, j, light) for j in range(3, n)]
    edges += [(i, j, 1) for i in range(3, n) for j in range(i + 1, n)]
    return WeightedGraph(n, edges), ConstraintSet([(0, 1, 2)])
