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
Readers and writers for graphs, constraints, trees, the Zoo dataset and reports.

Text formats:

    graph        one edge per line, ``u v w`` (0-based ids, tab or space separated);
                 ``# vertices: N`` declares trailing isolated vertices
    constraints  one per line, ``p q | s`` with an optional ``@ cost`` suffix
    tree         Newick with integer leaf labels, e.g. ``((0,1),2);``

``#`` starts a comment everywhere.
"""
import csv
import dataclasses
import json
import math
import pathlib
import re
from typing import List, Tuple

import numpy as np

from constrainedhc import config
from constrainedhc.constraints import ConstraintSet, TripletConstraint
from constrainedhc.graph import ClusterTree, WeightedGraph
from constrainedhc.utils import DataError, DomainError
from constrainedhc.utils.log import get_logger

_VERTICES = re.compile(r'#\s*vertices\s*:\s*(\d+)\s*$')

ZOO_FEATURES = ('hair', 'feathers', 'eggs', 'milk', 'airborne', 'aquatic', 'predator', 'toothed',
                'backbone', 'breathes', 'venomous', 'fins', 'legs', 'tail', 'domestic', 'catsize')


def _number(text):
    try:
        return int(text)
    except ValueError:
        return float(text)


def _lines(path):
    with open(str(path), 'r') as fh:
        for lineno, raw in enumerate(fh, start=1):
            yield lineno, raw


def load_graph(path, n=None) -> WeightedGraph:
    """
    Read a weighted edge list; parallel edges are summed.
    """
    declared = None
    edges = []
    for lineno, raw in _lines(path):
        match = _VERTICES.match(raw.strip())
        if match:
            declared = int(match.group(1))
            continue
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        fields = line.split()
        if len(fields) != 3:
            raise DataError(f'Expected "u v w", got {len(fields)} fields', path, lineno)
        try:
            u, v, w = int(fields[0]), int(fields[1]), _number(fields[2])
        except ValueError:
            raise DataError(f'Cannot parse edge "{line}"', path, lineno) from None
        if u < 0 or v < 0:
            raise DataError(f'Vertex ids must be nonnegative: "{line}"', path, lineno)
        if u == v:
            raise DataError(f'Self-loop on vertex {u}', path, lineno)
        if not math.isfinite(w) or w < 0:
            raise DataError(f'Edge weight must be finite and nonnegative, got {fields[2]}',
                            path, lineno)
        edges.append((u, v, w))

    needed = max((max(u, v) for u, v, _ in edges), default=-1) + 1
    n = n if n is not None else (declared if declared is not None else needed)
    if needed > n:
        raise DataError(f'Edge list references vertex {needed - 1} but the graph has {n} vertices',
                        path)
    get_logger().debug('Read %d edges on %d vertices from %s', len(edges), n, path)
    return WeightedGraph(n, edges)


def dump_graph(g: WeightedGraph) -> str:
    lines = [f'# vertices: {g.n}']
    lines += [f'{u}\t{v}\t{w!r}' for u, v, w in g.edges]
    return '\n'.join(lines) + '\n'


def load_constraints(path) -> ConstraintSet:
    constraints, costs, seen = [], [], set()
    for lineno, raw in _lines(path):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue

        body, _, cost_text = line.partition('@')
        pair, bar, outsider = body.partition('|')
        try:
            p, q = (int(x) for x in pair.split())
            (s,) = (int(x) for x in outsider.split())
            cost = _number(cost_text.strip()) if cost_text.strip() else 1
        except ValueError:
            raise DataError(f'Expected "p q | s [@ cost]", got "{line}"', path, lineno) from None
        if not bar:
            raise DataError(f'Missing "|" in constraint "{line}"', path, lineno)
        if not math.isfinite(cost) or cost < 0:
            raise DataError(f'Base cost must be finite and nonnegative, got {cost_text.strip()}',
                            path, lineno)
        try:
            c = TripletConstraint(p, q, s)
        except DomainError as e:
            raise DataError(str(e), path, lineno) from None
        if c in seen:
            raise DataError(f'Duplicate constraint {c}', path, lineno)
        seen.add(c)
        constraints.append(c)
        costs.append(cost)

    return ConstraintSet(constraints, costs)


def dump_constraints(cs: ConstraintSet) -> str:
    lines = []
    for c, cost in cs.items():
        lines.append(str(c) if cost == 1 else f'{c} @ {cost!r}')
    return ''.join(line + '\n' for line in lines)


def _tree_json(tree: ClusterTree):
    nodes = {}
    for node in reversed(range(tree.num_nodes)):
        if tree.is_leaf(node):
            nodes[node] = {'leaf': tree.label(node), 'size': 1}
        else:
            left, right = tree.children(node)
            nodes[node] = {'size': tree.size(node), 'children': [nodes.pop(left), nodes.pop(right)]}
    return nodes[tree.root]


def emit_tree(tree: ClusterTree, fmt='newick') -> str:
    if fmt == 'newick':
        return tree.newick()
    if fmt == 'json':
        return json.dumps(_tree_json(tree))
    raise DomainError(f'Unknown tree format "{fmt}"; expected newick or json')


def parse_newick(text) -> ClusterTree:
    """
    Read a binary Newick tree with integer leaf labels. Branch lengths and internal node labels
    are skipped.
    """
    s = ''.join(text.split())
    if not s.endswith(';'):
        raise DataError('Newick tree must end with ";"')
    s = s[:-1]

    stack: List[list] = [[]]
    closed = False
    i = 0
    while i < len(s):
        ch = s[i]
        if ch == '(':
            stack.append([])
            closed = False
            i += 1
        elif ch == ',':
            closed = False
            i += 1
        elif ch == ')':
            children = stack.pop()
            if len(children) != 2 or not stack:
                raise DataError(f'Malformed binary Newick tree near position {i}')
            stack[-1].append(tuple(children))
            closed = True
            i += 1
        else:
            j = i
            while j < len(s) and s[j] not in '(),':
                j += 1
            token = s[i:j].split(':', 1)[0]
            if not closed:
                if not token:
                    raise DataError(f'Missing leaf label near position {i}')
                try:
                    stack[-1].append(int(token))
                except ValueError:
                    raise DataError(f'Leaf labels must be integers, got "{token}"') from None
            i = j

    if len(stack) != 1 or len(stack[0]) != 1:
        raise DataError('Malformed Newick tree: unbalanced parentheses')
    return ClusterTree(stack[0][0])


def load_tree(text_or_path) -> ClusterTree:
    """
    Parse a Newick string, or the contents of the file it names.
    """
    path = pathlib.Path(text_or_path)
    if not text_or_path.strip().endswith(';') and path.is_file():
        text_or_path = path.read_text()
    return parse_newick(text_or_path)


@dataclasses.dataclass(frozen=True)
class ZooRecord:
    name: str
    features: Tuple[int, ...]
    class_label: int

    def __post_init__(self):
        if len(self.features) != len(ZOO_FEATURES):
            raise DomainError(f'{self.name}: expected {len(ZOO_FEATURES)} features, '
                              f'got {len(self.features)}')
        if not 1 <= self.class_label <= 7:
            raise DomainError(f'{self.name}: class must be in [1, 7], got {self.class_label}')


def load_zoo(path=None, limit=None) -> List[ZooRecord]:
    """
    Read UCI zoo rows ``name, 16 attributes, class``. Repeated names keep their first row.
    """
    path = path or config.BUNDLED_ZOO
    if limit is not None and limit < 1:
        raise DomainError(f'limit must be positive, got {limit}')

    records, names = [], set()
    with open(str(path), 'r', newline='') as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or not ''.join(row).strip():
                continue
            if len(row) != len(ZOO_FEATURES) + 2:
                raise DataError(f'Expected {len(ZOO_FEATURES) + 2} fields, got {len(row)}',
                                path, lineno)
            name = row[0].strip()
            try:
                record = ZooRecord(name, tuple(int(x) for x in row[1:-1]), int(row[-1]))
            except (ValueError, DomainError) as e:
                raise DataError(str(e), path, lineno) from None
            if name in names:
                get_logger().debug('Dropping repeated animal "%s" on line %d', name, lineno)
                continue
            names.add(name)
            records.append(record)

    return records[:limit] if limit is not None else records


def cosine_similarity(records: List[ZooRecord], dims=len(ZOO_FEATURES)) -> WeightedGraph:
    """
    Complete graph of cosine similarities over the first `dims` features. All-zero vectors are
    given similarity 0.
    """
    if not 1 <= dims <= len(ZOO_FEATURES):
        raise DomainError(f'dims must be in [1, {len(ZOO_FEATURES)}], got {dims}')

    x = np.array([r.features[:dims] for r in records], dtype=float).reshape(len(records), dims)
    norms = np.linalg.norm(x, axis=1)
    unit = np.divide(x, norms[:, None], out=np.zeros_like(x), where=norms[:, None] > 0)
    sim = unit @ unit.T

    n = len(records)
    edges = [(i, j, float(sim[i, j])) for i in range(n) for j in range(i + 1, n) if sim[i, j] > 0]
    return WeightedGraph(n, edges)


def _jsonable(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, (set, frozenset)):
        return sorted(value)
    raise TypeError(f'{type(value).__name__} is not JSON serializable')


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f'{prefix}.{key}' if prefix else str(key), item, out)
    elif isinstance(value, (list, tuple)):
        out.append((prefix, json.dumps(value, default=_jsonable)))
    else:
        out.append((prefix, value))


def emit_report(report: dict, fmt='json') -> str:
    """
    Render a report as versioned JSON, or as ``key<TAB>value`` lines with dotted keys.
    """
    report = {'schema': config.REPORT_SCHEMA, **report}
    if fmt == 'json':
        return json.dumps(report, indent=2, default=_jsonable)
    if fmt == 'tsv':
        rows = []
        _flatten('', report, rows)
        return '\n'.join(f'{key}\t{value}' for key, value in rows)
    raise DomainError(f'Unknown report format "{fmt}"; expected json or tsv')
