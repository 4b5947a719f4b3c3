import copy
import unittest

from holoknot.diagram.builtin import builtin, builtin_document, FIGURE8, TREFOIL
from holoknot.diagram.diagram import (parse_diagram, serialize, Role,
                                      TurnbackKind, OpenDiagram)
from holoknot.diagram.diagram_error import (DiagramError, IncidenceError, PlanarityError,
                                            NotAKnotError, UnknownBuiltinError)

KINK = {
    'name': 'kink',
    'crossings': [{'id': 'k1', 'sign': 1, 's1': 'in', 's2': 'loop', 's1p': 'loop', 's2p': 'out'}],
    'boundary': {'in': 'in', 'out': 'out'},
}


class TestBuiltinDiagrams(unittest.TestCase):

    def setUp(self):
        self.figure8 = builtin('figure8')
        self.trefoil = builtin('trefoil')

    def test_figure8_counts(self):
        self.assertEqual(self.figure8.cr, 4)
        self.assertEqual(len(self.figure8.E), 7)
        self.assertEqual(len(self.figure8.turnbacks), 4)
        self.assertEqual(self.figure8.E, ('t1', 't2', 't3', 't4', 't5', 't6', 't7'))

    def test_trefoil_counts(self):
        self.assertEqual(self.trefoil.cr, 3)
        self.assertEqual(len(self.trefoil.E), 5)
        self.assertEqual({crossing.sign for crossing in self.trefoil.crossings}, {1})

    def test_crossing_count_identity(self):
        for diagram in (self.figure8, self.trefoil, parse_diagram(copy.deepcopy(KINK))):
            self.assertEqual(2 * diagram.cr, len(diagram.E) + 1)

    def test_region_counts(self):
        self.assertEqual(len(self.figure8.regions()), 6)
        self.assertEqual(len(self.trefoil.regions()), 5)
        self.assertEqual(len(parse_diagram(copy.deepcopy(KINK)).regions()), 3)

    def test_above_and_below_differ(self):
        for diagram in (self.figure8, self.trefoil):
            for segment in diagram.E:
                self.assertNotEqual(diagram.above(segment), diagram.below(segment))

    def test_boundary_segments_share_regions(self):
        D = self.figure8
        self.assertEqual(D.above(D.boundary_in), D.above(D.boundary_out))
        self.assertEqual(D.below(D.boundary_in), D.below(D.boundary_out))

    def test_figure8_turnback_shifts(self):
        D = self.figure8
        N = 5
        self.assertAlmostEqual(D.occurrence_shift('c3', Role.S1, N), 1.0 / N - 1)
        self.assertAlmostEqual(D.occurrence_shift('c3', Role.S1P, N), 1.0 / N - 1)
        self.assertAlmostEqual(D.occurrence_shift('c2', Role.S1, N), 1.0 / N - 1)
        self.assertAlmostEqual(D.occurrence_shift('c2', Role.S1P, N), 1.0 / N - 1)
        self.assertEqual(D.occurrence_shift('c1', Role.S2, N), 0.0)
        self.assertEqual(D.occurrence_shift('c3', Role.S1), -1.0)

    def test_turnback_sigma(self):
        self.assertEqual(TurnbackKind.CUP_POS.sigma, 0)
        self.assertEqual(TurnbackKind.CUP_NEG.sigma, 0)
        self.assertEqual(TurnbackKind.CAP_POS.sigma, 1)
        self.assertEqual(TurnbackKind.CAP_NEG.sigma, -1)

    def test_traversal_visits_every_crossing_twice(self):
        for diagram in (self.figure8, self.trefoil):
            visits = diagram.traversal()
            self.assertEqual(len(visits), 2 * diagram.cr)
            self.assertEqual(visits[0].segment_in, diagram.boundary_in)
            self.assertEqual(visits[-1].segment_out, diagram.boundary_out)

    def test_arcs(self):
        self.assertEqual(self.figure8.arcs(), {
            'in': ('in', 't1', 'out'),
            't2': ('t2', 't3'),
            't4': ('t4', 't5'),
            't6': ('t6', 't7'),
        })
        self.assertEqual(len(self.trefoil.arcs()), 3)
        self.assertEqual(self.trefoil.arc_of('out'), 'in')

    def test_round_trip(self):
        for diagram in (self.figure8, self.trefoil):
            again = parse_diagram(serialize(diagram))
            self.assertEqual(again, diagram)
            self.assertEqual(serialize(again), serialize(diagram))

    def test_memento(self):
        restored = OpenDiagram.from_memento(self.figure8.create_memento())
        self.assertEqual(restored, self.figure8)

    def test_unknown_builtin(self):
        with self.assertRaises(UnknownBuiltinError):
            builtin('unknown')

    def test_builtin_document_is_a_copy(self):
        document = builtin_document('figure8')
        document['crossings'].pop()
        self.assertEqual(len(FIGURE8['crossings']), 4)


class TestDiagramValidation(unittest.TestCase):

    def setUp(self):
        self.document = copy.deepcopy(TREFOIL)

    def test_segment_in_three_roles(self):
        self.document['crossings'][2]['s1'] = 't1'
        with self.assertRaises(IncidenceError):
            parse_diagram(self.document)

    def test_duplicate_role_use(self):
        self.document['crossings'][0]['s2'] = 'in'
        with self.assertRaises(IncidenceError):
            parse_diagram(self.document)

    def test_no_crossings(self):
        self.document['crossings'] = []
        with self.assertRaises(DiagramError):
            parse_diagram(self.document)

    def test_bad_sign(self):
        self.document['crossings'][0]['sign'] = 0
        with self.assertRaises(DiagramError):
            parse_diagram(self.document)

    def test_bad_rotation(self):
        # s1 and s1p adjacent: the two ends of the over strand must be opposite
        self.document['rotation']['x1'] = ['s1', 's2p', 's2', 's1p']
        with self.assertRaises(PlanarityError):
            parse_diagram(self.document)

    def test_cyclic_rotation_accepted(self):
        self.document['rotation']['x1'] = ['s2', 's1p', 's2p', 's1']
        self.assertEqual(parse_diagram(self.document).cr, 3)

    def test_mirrored_rotation_swaps_above_and_below(self):
        D = builtin('trefoil')
        mirrored = D.revised(rotation={crossing: list(reversed(darts))
                                       for crossing, darts in TREFOIL['rotation'].items()})

        def border(diagram, region_id):
            region = {region.id: region for region in diagram.regions()}[region_id]
            return frozenset(region.above_of + region.below_of)

        self.assertEqual(len(mirrored.regions()), len(D.regions()))
        for segment in (D.boundary_in,) + D.E + (D.boundary_out,):
            self.assertEqual(border(mirrored, mirrored.above(segment)), border(D, D.below(segment)))
            self.assertEqual(border(mirrored, mirrored.below(segment)), border(D, D.above(segment)))

    def test_link_closure(self):
        document = {
            'name': 'split',
            'crossings': [
                {'id': 'a', 'sign': 1, 's1': 'in', 's2': 'u', 's1p': 'mid', 's2p': 'u'},
                {'id': 'b', 'sign': 1, 's1': 'mid', 's2': 'w', 's1p': 'out', 's2p': 'w'},
            ],
            'boundary': {'in': 'in', 'out': 'out'},
        }
        with self.assertRaises((NotAKnotError, IncidenceError)):
            parse_diagram(document)

    def test_euler_failure(self):
        # a positive crossing whose under strand re-enters on the wrong side
        document = {
            'name': 'twisted',
            'crossings': [
                {'id': 'a', 'sign': 1, 's1': 'in', 's2': 'p', 's1p': 'q', 's2p': 'r'},
                {'id': 'b', 'sign': 1, 's1': 'q', 's2': 'r', 's1p': 'p', 's2p': 'out'},
            ],
            'boundary': {'in': 'in', 'out': 'out'},
        }
        with self.assertRaises(PlanarityError):
            parse_diagram(document)

    def test_turnback_must_touch_crossing(self):
        self.document['turnbacks'] = [{'kind': 'cap_pos', 'from': 't3', 'to': 'x2'}]
        with self.assertRaises(DiagramError):
            parse_diagram(self.document)

    def test_turnback_to_segment(self):
        document = builtin_document('figure8')
        document['turnbacks'] = [
            {'kind': 'cap_neg', 'from': 't3', 'to': 't4'},
            {'kind': 'cap_neg', 'from': 't4', 'to': 't3'},
            {'kind': 'cap_neg', 'from': 't4', 'to': 't5'},
            {'kind': 'cap_neg', 'from': 't5', 'to': 't4'},
        ]
        self.assertEqual(parse_diagram(document), builtin('figure8'))

    def test_turnback_to_segment_picks_the_end(self):
        document = copy.deepcopy(KINK)
        document['turnbacks'] = [{'kind': 'cap_pos', 'from': 'loop', 'to': 'out'}]
        self.assertEqual(parse_diagram(document).turnbacks[0].role, Role.S2)
        document['turnbacks'] = [{'kind': 'cap_pos', 'from': 'loop', 'to': 'in'}]
        self.assertEqual(parse_diagram(document).turnbacks[0].role, Role.S1P)

    def test_turnback_to_unknown(self):
        self.document['turnbacks'] = [{'kind': 'cap_pos', 'from': 't3', 'to': 'nowhere'}]
        with self.assertRaises(DiagramError):
            parse_diagram(self.document)
        self.document['turnbacks'] = [{'kind': 'cap_pos', 'from': 't3', 'to': 't1'}]
        with self.assertRaises(DiagramError):
            parse_diagram(self.document)

    def test_turnback_kind(self):
        self.document['turnbacks'] = [{'kind': 'cap', 'from': 't3', 'to': 'x1'}]
        with self.assertRaises(DiagramError):
            parse_diagram(self.document)

    def test_kink_loop_needs_role(self):
        document = copy.deepcopy(KINK)
        document['turnbacks'] = [{'kind': 'cap_pos', 'from': 'loop', 'to': 'k1'}]
        with self.assertRaises(DiagramError):
            parse_diagram(document)
        document['turnbacks'][0]['role'] = 's2'
        diagram = parse_diagram(document)
        self.assertEqual(diagram.turnbacks[0].role, Role.S2)


if __name__ == '__main__':
    unittest.main()
