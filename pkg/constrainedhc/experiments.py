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
Experiments: noisy-feature clustering of the Zoo dataset with and without structural
constraints, and the instance family on which constrained recursive densest cut falls behind
constrained random cuts.
"""
import dataclasses
import pathlib
from typing import Dict, List, Sequence

import requests
from invoke import task

from constrainedhc import config, templates
from constrainedhc.constraints import ConstraintSet, violated_constraints
from constrainedhc.divisive import (DENSEST, SPECTRAL, DivisiveConfig, crdc,
                                    densest_failure_instance, recursive_spectral)
from constrainedhc.formats import cosine_similarity, emit_report, load_constraints, load_zoo
from constrainedhc.graph import ClusterTree, dissimilarity_reward, similarity_cost
from constrainedhc.oracle import opt_dissimilarity
from constrainedhc.randomized import crrc, monte_carlo, rrc
from constrainedhc.utils import DataError, DomainError, exit_codes, require_choice
from constrainedhc.utils.log import get_logger, highlight, log_func, log_multiline


def split_constraints(tree: ClusterTree) -> ConstraintSet:
    """
    Constraints that force the root split of `tree` and nothing below it.

    With A and B the leaves under the root's children, emits a_i a_i+1 | b_0 and
    b_i b_i+1 | a_0; once b_0 (or a_0) is split off they are all resolved.
    """
    if tree.n_leaves < 2:
        return ConstraintSet()
    left, right = (sorted(tree.leaf_set(child)) for child in tree.children(tree.root))
    out = [(x, y, right[0]) for x, y in zip(left, left[1:])]
    out += [(x, y, left[0]) for x, y in zip(right, right[1:])]
    return ConstraintSet(out)


@dataclasses.dataclass
class ExperimentReport:
    opt_cost: float
    unconstrained_noisy_cost: float
    constrained_noisy_cost: float
    improvement_pct: float
    metadata: Dict = dataclasses.field(default_factory=dict)

    def as_dict(self):
        out = dataclasses.asdict(self)
        out['reference'] = [dict(zip(('animals', 'opt_cost', 'unconstrained_noisy_cost',
                                      'constrained_noisy_cost', 'improvement_pct'), row))
                            for row in templates.zoo_reference_rows]
        return out


def zoo_experiment(zoo_path=None, constraints_path=None, dims_full=16, dims_noisy=10, limit=None,
                   cfg: DivisiveConfig = DivisiveConfig()) -> ExperimentReport:
    """
    Cluster the Zoo animals three times with recursive spectral cuts: on all features (the
    reference "OPT"), on the first `dims_noisy` features, and on those features under
    constraints. All three trees are scored with the full-feature similarities.

    Without a constraint file the constraints force the root split of the full-feature tree.
    """
    records = load_zoo(zoo_path, limit)
    full = cosine_similarity(records, dims_full)
    noisy = cosine_similarity(records, dims_noisy)
    get_logger().info('Zoo: %d animals, %d vs %d features', len(records), dims_full, dims_noisy)

    opt_tree = log_func(lambda: recursive_spectral(full, cfg=cfg), 'Full-feature clustering')
    if constraints_path is not None:
        cs = load_constraints(constraints_path)
        cs.check_vertices(full.n)
        source = str(constraints_path)
    else:
        cs = split_constraints(opt_tree)
        source = 'root split of the full-feature tree'

    unconstrained = log_func(lambda: recursive_spectral(noisy, cfg=cfg), 'Noisy clustering')
    constrained = log_func(lambda: recursive_spectral(noisy, cs, cfg=cfg),
                           'Constrained noisy clustering')

    opt_cost = similarity_cost(opt_tree, full)
    unc_cost = similarity_cost(unconstrained, full)
    con_cost = similarity_cost(constrained, full)
    improvement = (unc_cost - con_cost) / opt_cost * 100 if opt_cost else 0.0

    return ExperimentReport(
        opt_cost=opt_cost,
        unconstrained_noisy_cost=unc_cost,
        constrained_noisy_cost=con_cost,
        improvement_pct=improvement,
        metadata={
            'animals': len(records),
            'dims_full': dims_full,
            'dims_noisy': dims_noisy,
            'constraints': source,
            'num_constraints': len(cs),
            'violated': len(violated_constraints(constrained, cs)),
            'algorithm': 'recursive-spectral',
            'seed': cfg.spectral_seed,
        })


def densest_cut_demo(sizes: Sequence[int] = (10, 20, 40), trials=config.MONTE_CARLO_TRIALS,
                     seed=config.DEFAULT_SEED, cfg: DivisiveConfig = DivisiveConfig(cut_kind=DENSEST),
                     oracle_limit=config.ORACLE_LIMIT) -> Dict:
    """
    Dissimilarity reward of constrained recursive densest cut against the Monte Carlo mean of
    constrained random cuts on the failure instances, with and without the constraint.
    """
    rows: List[Dict] = []
    for n in sizes:
        g, cs = densest_failure_instance(n)
        row = {'n': n, 'heavy_weight': n ** 3, 'light_weight': 1 / n ** 2}

        row['crdc_reward'] = dissimilarity_reward(crdc(g, cs, cfg), g)
        mc = monte_carlo(lambda rng: crrc(g, cs, rng), g, trials, seed)
        row['crrc_mean'] = mc.mean
        row['crrc_stderr'] = mc.stderr
        row['ratio'] = row['crdc_reward'] / mc.mean

        free = ConstraintSet()
        row['unconstrained_crdc_reward'] = dissimilarity_reward(crdc(g, free, cfg), g)
        mc_free = monte_carlo(lambda rng: rrc(g, rng), g, trials, seed)
        row['unconstrained_ratio'] = row['unconstrained_crdc_reward'] / mc_free.mean

        if n <= oracle_limit:
            opt, _ = opt_dissimilarity(g, cs, limit=oracle_limit)
            row['oracle_reward'] = opt
            row['oracle_ratio'] = row['crdc_reward'] / opt

        get_logger().info(templates.densest_demo_row.format(**row))
        rows.append(row)

    ratios = [row['ratio'] for row in rows]
    return {
        'rows': rows,
        'trials': trials,
        'seed': seed,
        'ratio_strictly_decreasing': all(a > b for a, b in zip(ratios, ratios[1:])),
    }


def _reference_table(report: ExperimentReport):
    lines = [templates.zoo_table_header]
    lines += [templates.zoo_table_row.format(*row) for row in templates.zoo_reference_rows]
    lines.append(highlight(templates.zoo_measured_row.format(
        report.metadata['animals'], report.opt_cost, report.unconstrained_noisy_cost,
        report.constrained_noisy_cost, report.improvement_pct)))
    return lines


@task(help={
    'data': 'UCI-style zoo file; defaults to the bundled copy',
    'constraints': 'Constraint file; defaults to constraints forcing the full-feature root split',
    'limit': 'Use only the first LIMIT animals',
    'format': 'json or tsv',
})
def zoo(ctx, data=None, constraints=None, limit=None, dims_full=16, dims_noisy=10, format='json'):
    """
    Run the Zoo experiment and print its report next to the published reference rows.
    """
    require_choice('format', format, ('json', 'tsv'))
    with exit_codes():
        cfg = DivisiveConfig.from_settings(config.Config(), cut_kind=SPECTRAL)
        report = zoo_experiment(data, constraints, int(dims_full), int(dims_noisy),
                                int(limit) if limit is not None else None, cfg)
        log_multiline(get_logger().info, _reference_table(report))
        print(emit_report(report.as_dict(), format))


@task(help={
    'sizes': 'Comma-separated instance sizes',
    'trials': 'Monte Carlo trials for the random baselines',
    'seed': 'Base seed; trial i uses seed + i',
    'format': 'json or tsv',
})
def demo_densest(ctx, sizes='10,20,40', trials=None, seed=None, format='json'):
    """
    Show constrained recursive densest cut losing ground to constrained random cuts as n grows.
    """
    require_choice('format', format, ('json', 'tsv'))
    with exit_codes():
        settings = config.Config()
        try:
            sizes = [int(s) for s in sizes.split(',') if s.strip()]
        except ValueError:
            raise DomainError(f'--sizes must be comma-separated integers, got "{sizes}"') from None
        cfg = DivisiveConfig.from_settings(settings, cut_kind=DENSEST)
        report = densest_cut_demo(
            sizes,
            trials=int(trials) if trials is not None else settings.monte_carlo_trials,
            seed=int(seed) if seed is not None else settings.default_seed,
            cfg=cfg,
            oracle_limit=settings.oracle_limit)
        print(emit_report(report, format))


@task(help={'dest': 'Where to save the file; defaults to zoo.data in the config directory'})
def fetch_zoo(ctx, dest=None):
    """
    Download the UCI zoo dataset.
    """
    with exit_codes():
        dest = pathlib.Path(dest or config.CONFIG_DIR / 'zoo.data')
        get_logger().info('Downloading %s', config.ZOO_URL)
        try:
            response = requests.get(config.ZOO_URL, timeout=30)
            response.raise_for_status()
        except requests.RequestException as e:
            raise DataError(f'Could not download the zoo dataset: {e}') from None

        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(response.text)
        records = load_zoo(dest)
        get_logger().info(highlight(f'Saved {len(records)} animals to {dest}'))
