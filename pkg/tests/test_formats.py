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

import json
import logging
import math
import os.path
import tempfile
import unittest

from hypothesis import given, settings, strategies as st

from constrainedhc import config
from constrainedhc.constraints import ConstraintSet, TripletConstraint
from constrainedhc.formats import (ZooRecord, cosine_similarity, dump_constraints, dump_graph,
                                   emit_report, emit_tree, load_constraints, load_graph, load_tree,
                                   load_zoo, parse_newick)
from constrainedhc.graph import ClusterTree, WeightedGraph
from constrainedhc.utils import DataError, DomainError
from constrainedhc.utils.log import get_logger
from tests.strategies import trees


class FileTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls) -> None:
        get_logger(logging.INFO)

    def setUp(self) -> None:
        self.temp_dir = tempfile.TemporaryDirectory()

    def tearDown(self) -> None:
        self.temp_dir.cleanup()

    def write(self, text, name='input.txt'):
        path = os.path.join(self.temp_dir.name, name)
        with open(path, 'w') as fh:
            fh.write(text)
        return path


class GraphFileTest(FileTestCase):
    def test_load(self):
        g = load_graph(self.write('# a path\n0 1 2\n1\t2\t0.5  # light\n\n0 1 1\n'))
        self.assertEqual(g.n, 3)
        self.assertEqual(g.weight(0, 1), 3)
        self.assertEqual(g.weight(2, 1), 0.5)

    def test_declared_vertices(self):
        g = load_graph(self.write('# vertices: 5\n0 1 1\n'))
        self.assertEqual(g.n, 5)
        self.assertEqual(load_graph(self.write('0 1 1\n'), n=4).n, 4)

    def test_dump(self):
        g = WeightedGraph(4, [(0, 1, 1.5), (1, 2, 3)])
        self.assertEqual(load_graph(self.write(dump_graph(g))), g)
        self.assertTrue(dump_graph(g).startswith('# vertices: 4\n'))

    def test_self_loop(self):
        with self.assertRaises(DataError) as cm:
            load_graph(self.write('0 1 1\n1 1 2\n'))
        self.assertEqual(cm.exception.line, 2)
        self.assertIn(':2:', str(cm.exception))

    def test_malformed(self):
        for text in ('0 1\n', '0 1 x\n', '-1 2 1\n', '0 1 -2\n', '0 1 nan\n', '0 1 inf\n'):
            with self.assertRaises(DataError, msg=text):
                load_graph(self.write(text))
        with self.assertRaises(DataError):
            load_graph(self.write('0 3 1\n'), n=3)


class ConstraintFileTest(FileTestCase):
    def test_load(self):
        cs = load_constraints(self.write('# must-links\n1 0 | 2\n2 3|0 @ 2.5\n'))
        self.assertEqual(list(cs), [TripletConstraint(0, 1, 2), TripletConstraint(2, 3, 0)])
        self.assertEqual(cs.cost(TripletConstraint(0, 1, 2)), 1)
        self.assertEqual(cs.cost(TripletConstraint(2, 3, 0)), 2.5)

    def test_dump(self):
        cs = ConstraintSet([(0, 1, 2), (2, 3, 0)], [1, 2.5])
        text = dump_constraints(cs)
        self.assertEqual(text, '0 1 | 2\n2 3 | 0 @ 2.5\n')
        self.assertEqual(load_constraints(self.write(text)), cs)

    def test_malformed(self):
        for text in ('0 1 2\n', '0 1 | \n', '0 | 2\n', '0 0 | 1\n', '0 1 | 2 @ -1\n',
                     '0 1 | 2 @ x\n', '0 1 | 2\n1 0 | 2\n', 'a b | c\n'):
            with self.assertRaises(DataError, msg=text):
                load_constraints(self.write(text))

    def test_empty(self):
        self.assertEqual(len(load_constraints(self.write('# nothing\n'))), 0)


class NewickTest(FileTestCase):
    def test_emit(self):
        tree = ClusterTree(((0, 1), 2))
        self.assertEqual(emit_tree(tree), '((0,1),2);')
        self.assertEqual(json.loads(emit_tree(tree, 'json')), {
            'size': 3,
            'children': [
                {'size': 2, 'children': [{'leaf': 0, 'size': 1}, {'leaf': 1, 'size': 1}]},
                {'leaf': 2, 'size': 1},
            ],
        })
        with self.assertRaises(DomainError):
            emit_tree(tree, 'dot')

    def test_parse(self):
        self.assertEqual(parse_newick('((0,1),2);'), ClusterTree(((0, 1), 2)))
        self.assertEqual(parse_newick(' ( (0:0.1, 1:2)inner:0.5 ,2 )root;\n'),
                         ClusterTree(((0, 1), 2)))
        self.assertEqual(parse_newick('7;'), ClusterTree(7))

    def test_malformed(self):
        for text in ('((0,1),2)', '(0,1,2);', '((0,1);', '(0,1));', '(a,1);', '(,1);', ''):
            with self.assertRaises(DataError, msg=text):
                parse_newick(text)

    def test_load_tree(self):
        self.assertEqual(load_tree('(0,(1,2));'), ClusterTree((0, (1, 2))))
        self.assertEqual(load_tree(self.write('(0,(1,2));\n', 'tree.nwk')), ClusterTree((0, (1, 2))))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 12).flatmap(trees))
    def test_newick_is_read_back(self, tree):
        self.assertEqual(parse_newick(tree.newick()), tree)


def _record(name, *ones):
    return ZooRecord(name, tuple(1 if i in ones else 0 for i in range(16)), 1)


class ZooTest(FileTestCase):
    def test_bundled(self):
        records = load_zoo()
        self.assertEqual(len(records), 100)
        self.assertEqual(records[0].name, 'aardvark')
        self.assertEqual(len({r.name for r in records}), 100)
        self.assertEqual([r.name for r in load_zoo(limit=20)], [r.name for r in records[:20]])

    def test_malformed(self):
        with self.assertRaises(DataError):
            load_zoo(self.write('aardvark,1,0,0,1,0,0,1,1,1,1,0,0,4,0,0,1\n'))
        with self.assertRaises(DataError):
            load_zoo(self.write('aardvark,1,0,0,1,0,0,1,1,1,1,0,0,4,0,0,1,9\n'))
        with self.assertRaises(DomainError):
            load_zoo(limit=0)

    def test_cosine_similarity(self):
        records = [_record('a', 0), _record('b', 0), _record('c', 1), _record('d', 0, 1),
                   _record('e')]
        g = cosine_similarity(records)
        self.assertEqual(g.n, 5)
        self.assertAlmostEqual(g.weight(0, 1), 1.0, places=12)
        self.assertEqual(g.weight(0, 2), 0)
        self.assertAlmostEqual(g.weight(0, 3), 1 / math.sqrt(2), places=12)
        self.assertEqual(g.neighbors(4), {})

        # Only the first feature: c and e are zero vectors.
        g = cosine_similarity(records, dims=1)
        self.assertEqual(g.neighbors(2), {})
        with self.assertRaises(DomainError):
            cosine_similarity(records, dims=0)


class ReportTest(unittest.TestCase):
    def test_json(self):
        out = json.loads(emit_report({'tree': '(0,1);', 'conflict': frozenset({2, 0})}))
        self.assertEqual(out, {'schema': config.REPORT_SCHEMA, 'tree': '(0,1);', 'conflict': [0, 2]})

    def test_tsv(self):
        out = emit_report({'n': 3, 'mc': {'mean': 1.5, 'trials': 2}, 'rows': [1, 2]}, 'tsv')
        self.assertEqual(out.splitlines(), [f'schema\t{config.REPORT_SCHEMA}', 'n\t3',
                                            'mc.mean\t1.5', 'mc.trials\t2', 'rows\t[1, 2]'])

    def test_unknown_format(self):
        with self.assertRaises(DomainError):
            emit_report({}, 'xml')


if __name__ == '__main__':
    unittest.main()
