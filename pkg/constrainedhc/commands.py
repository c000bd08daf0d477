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
import random

import yaml
from invoke import task

from constrainedhc import config, cuts
from constrainedhc.constraints import ConstraintSet, build, tree_to_triplets, violated_constraints
from constrainedhc.divisive import (BALANCED, DENSEST, SPARSEST, DivisiveConfig, crbc, crdc, crsc,
                                    recursive_spectral, rhsc)
from constrainedhc.formats import emit_report, load_constraints, load_graph, load_tree
from constrainedhc.graph import (RegularizedInstance, dissimilarity_reward, regularized_cost,
                                 similarity_cost)
from constrainedhc.oracle import opt_dissimilarity, opt_regularized, opt_similarity
from constrainedhc.randomized import (constraint_classes, crrc, crrc_guarantee, dependency_digraph,
                                      dm, layered_subgraph, local_search_derandomized, monte_carlo,
                                      rrc)
from constrainedhc.utils import InfeasibleConstraintsError, exit_codes, require_choice
from constrainedhc.utils.log import get_logger

ALGORITHMS = ('crsc', 'crbc', 'rhsc', 'crdc', 'rrc', 'crrc', 'localsearch', 'spectral')
CUTS = ('exact', 'spectral', 'local')
OBJECTIVES = ('sim', 'dis', 'reg')
FORMATS = ('json', 'tsv')

_FORMAT_HELP = 'Report format: json or tsv'


def _optional_int(value, default):
    return default if value is None else int(value)


def _constraints_or_empty(path):
    return load_constraints(path) if path else ConstraintSet()


def _run_algorithm(alg, g, cs, cfg: DivisiveConfig, lam, rng):
    if alg == 'crsc':
        return crsc(g, cs, cfg)
    if alg == 'crbc':
        return crbc(g, cs, cfg)
    if alg == 'crdc':
        return crdc(g, cs, cfg)
    if alg == 'rhsc':
        return rhsc(RegularizedInstance(g, cs, lam), cfg)
    if alg == 'rrc':
        return rrc(g, rng)
    if alg == 'crrc':
        return crrc(g, cs, rng)
    if alg == 'localsearch':
        return local_search_derandomized(g)
    return recursive_spectral(g, cs, cfg)


@task(help={
    'constraints': 'Constraint file, one "p q | s" per line',
    'vertices': 'Number of vertices; defaults to the largest constrained vertex + 1',
    'format': _FORMAT_HELP,
})
def check(ctx, constraints, vertices=None, format='json'):
    """
    Decide whether hard triplet constraints can all be satisfied by one tree.
    """
    require_choice('format', format, FORMATS)
    with exit_codes():
        cs = load_constraints(constraints)
        n = _optional_int(vertices, max(cs.vertices(), default=0) + 1)
        cs.check_vertices(n)
        result = build(range(n), cs)

        report = {'n': n, 'constraints': len(cs), 'feasible': result.feasible}
        if result.feasible:
            report['tree'] = result.tree.newick()
        else:
            report['conflict'] = sorted(result.conflict)
        print(emit_report(report, format))

        if not result.feasible:
            raise InfeasibleConstraintsError(cluster=result.conflict)


@task(help={'tree': 'Newick tree, or a file holding one', 'format': _FORMAT_HELP})
def convert(ctx, tree, format='json'):
    """
    List the triplet constraints that characterize a tree.
    """
    require_choice('format', format, FORMATS)
    with exit_codes():
        t = load_tree(tree)
        cs = tree_to_triplets(t)
        print(emit_report({'leaves': t.n_leaves, 'count': len(cs),
                           'constraints': [str(c) for c in cs]}, format))


@task(help={
    'graph': 'Edge list file, one "u v w" per line',
    'constraints': 'Constraint file, one "p q | s" per line',
    'alg': 'One of ' + ', '.join(ALGORITHMS),
    'cut': 'Cut solver: exact, spectral, or local (densest cuts only)',
    'lambda_': 'Violation penalty multiplier for rhsc and the regularized cost',
    'seed': 'Random seed for rrc, crrc and local densest search',
    'trials': 'Monte Carlo trials for rrc and crrc',
    'epsilon': 'Improvement threshold of the local densest search',
    'format': _FORMAT_HELP,
})
def cluster(ctx, graph, constraints=None, alg='crsc', cut='exact', lambda_=1.0, seed=None,
            trials=1, epsilon=None, format='json'):
    """
    Build a hierarchy with one algorithm and score it.
    """
    require_choice('algorithm', alg, ALGORITHMS)
    require_choice('cut solver', cut, CUTS)
    require_choice('format', format, FORMATS)
    with exit_codes():
        settings = config.Config()
        g = load_graph(graph)
        cs = _constraints_or_empty(constraints)
        cs.check_vertices(g.n)
        seed = _optional_int(seed, settings.default_seed)
        trials = int(trials)
        lam = float(lambda_)

        kind = {'crbc': BALANCED, 'crdc': DENSEST}.get(alg, SPARSEST)
        mode = {'exact': cuts.EXACT, 'spectral': cuts.HEURISTIC, 'local': cuts.LOCAL}[cut]
        if kind == DENSEST and mode == cuts.HEURISTIC:
            mode = cuts.LOCAL
        elif mode == cuts.LOCAL and kind != DENSEST:
            mode = cuts.HEURISTIC
        cfg = DivisiveConfig.from_settings(
            settings, cut_kind=kind, cut_mode=mode, seed=seed,
            epsilon=float(epsilon) if epsilon is not None else settings.local_epsilon)

        tree = _run_algorithm(alg, g, cs, cfg, lam, random.Random(seed))
        report = {
            'algorithm': alg,
            'n': g.n,
            'seed': seed,
            'tree': tree.newick(),
            'similarity_cost': similarity_cost(tree, g),
            'dissimilarity_reward': dissimilarity_reward(tree, g),
            'violated': len(violated_constraints(tree, cs)),
        }
        if cs:
            report['regularized_cost'] = regularized_cost(tree, RegularizedInstance(g, cs, lam))

        if trials > 1 and alg in ('rrc', 'crrc'):
            run = (lambda rng: rrc(g, rng)) if alg == 'rrc' else (lambda rng: crrc(g, cs, rng))
            mc = monte_carlo(run, g, trials, seed)
            report['monte_carlo'] = {'trials': mc.trials, 'mean': mc.mean, 'stderr': mc.stderr,
                                     'min': mc.minimum, 'max': mc.maximum}
        print(emit_report(report, format))


@task(help={
    'graph': 'Edge list file',
    'tree': 'Newick tree, or a file holding one',
    'objective': 'sim (similarity cost), dis (dissimilarity reward) or reg (regularized cost)',
    'constraints': 'Constraint file for the regularized cost',
    'lambda_': 'Violation penalty multiplier',
    'format': _FORMAT_HELP,
})
def cost(ctx, graph, tree, objective='sim', constraints=None, lambda_=1.0, format='json'):
    """
    Score a given tree.
    """
    require_choice('objective', objective, OBJECTIVES)
    require_choice('format', format, FORMATS)
    with exit_codes():
        g = load_graph(graph)
        t = load_tree(tree)
        if objective == 'sim':
            value = similarity_cost(t, g)
        elif objective == 'dis':
            value = dissimilarity_reward(t, g)
        else:
            value = regularized_cost(t, RegularizedInstance(g, _constraints_or_empty(constraints),
                                                            float(lambda_)))
        print(emit_report({'objective': objective, 'value': value}, format))


@task(help={
    'constraints': 'Constraint file',
    'vertices': 'Number of vertices; defaults to the largest constrained vertex + 1',
    'format': _FORMAT_HELP,
})
def depmeasure(ctx, constraints, vertices=None, format='json'):
    """
    Dependency classes, their digraph, DMC and the resulting guarantee of crrc.
    """
    require_choice('format', format, FORMATS)
    with exit_codes():
        cs = load_constraints(constraints)
        n = _optional_int(vertices, max(cs.vertices(), default=0) + 1)
        cs.check_vertices(n)

        classes = constraint_classes(cs)
        dg = dependency_digraph(classes)
        report = {
            'n': n,
            'classes': len(classes),
            'arcs': [f'{a} -> {b}' for a, b in dg.arcs],
            'acyclic': dg.is_acyclic(),
        }
        if not report['acyclic']:
            print(emit_report(report, format))
            raise InfeasibleConstraintsError(
                'infeasible: the dependency digraph has a cycle, so the constraints are '
                'inconsistent; use the regularized algorithm (--alg rhsc) instead')

        measures = {str(c): dm(layered_subgraph(dg, c)) for c in classes}
        report['dm'] = measures
        report['dmc'] = max(measures.values(), default=1)
        report['alpha'] = crrc_guarantee(n, len(cs), report['dmc'])
        print(emit_report(report, format))


@task(help={
    'graph': 'Edge list file',
    'objective': 'sim, dis or reg',
    'constraints': 'Constraint file',
    'lambda_': 'Violation penalty multiplier for reg',
    'format': _FORMAT_HELP,
})
def oracle(ctx, graph, objective='sim', constraints=None, lambda_=1.0, format='json'):
    """
    Exact optimum by dynamic programming over vertex subsets; small graphs only.
    """
    require_choice('objective', objective, OBJECTIVES)
    require_choice('format', format, FORMATS)
    with exit_codes():
        limit = config.Config().oracle_limit
        g = load_graph(graph)
        cs = _constraints_or_empty(constraints)
        if objective == 'sim':
            value, tree = opt_similarity(g, cs, limit=limit)
        elif objective == 'dis':
            value, tree = opt_dissimilarity(g, cs, limit=limit)
        else:
            value, tree = opt_regularized(RegularizedInstance(g, cs, float(lambda_)), limit=limit)
        get_logger().debug('Oracle %s optimum %s', objective, value)
        print(emit_report({'objective': objective, 'value': value, 'tree': tree.newick()}, format))


@task
def show_config(ctx):
    """
    Print the effective configuration as YAML.
    """
    with exit_codes():
        settings = config.Config()
        print(f'# {config.CONFIG_FILE}')
        print(yaml.safe_dump(settings.as_dict(), default_flow_style=False), end='')
