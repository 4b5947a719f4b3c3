import unittest

import mpmath
import numpy as np
import numpy.testing as npt

from holoknot.action.builder import build_classical_action
from holoknot.action.evaluate import exp_grad_classical
from holoknot.coloring.gauge_search import unit_circle_gauge_search
from holoknot.coloring.segment_coloring import solve_two_generator
from holoknot.coloring.shadow import propagate_shadow
from holoknot.diagram.builtin import builtin
from holoknot.geometry.critical import (bloch_wigner_volume, chern_simons, conjugate,
                                        critical_point_from_parameters, find_critical_point,
                                        shifted, volume)
from holoknot.geometry.geometry_error import DegenerateShapeError, GeometryError
from holoknot.geometry.segment_equations import (SegmentEquationSystem, default_pins,
                                                 segment_residuals)
from holoknot.geometry.shapes import crossing_shapes, edge_pairs, shape_parameters
from holoknot.geometry.solution_model import SolutionModel
from holoknot.geometry.solver import MultistartSolver, SolveResult, solve_segment_equations
from lib.numeric import numerical_rank

FIGURE8_VOLUME = 2 * float(mpmath.clsin(2, mpmath.pi / 3))


def _coloring_parameters(name, m, w0, seed=5):
    D = builtin(name)
    _, coloring = solve_two_generator(D, m, w0)
    shadow = propagate_shadow(D, coloring, [1.0, 0.3 + 0.2j])
    return D, unit_circle_gauge_search(shadow, np.random.default_rng(seed)).parameters


class TestShapes(unittest.TestCase):

    def setUp(self):
        self.figure8 = builtin('figure8')
        self.rng = np.random.default_rng(3)

    def test_unit_ratio_degenerate(self):
        b = np.exp(self.rng.normal(0, 0.3, 7) + 2j * np.pi * self.rng.uniform(0, 1, 7))
        b[self.figure8.index('t6')] = 1.0
        shapes = shape_parameters(b, 1.0, self.figure8)
        self.assertEqual(shapes[('c1', 'N')], 1.0)
        self.assertIn(('c1', 'N'), shapes.degenerate())

    def test_sign_inverts_shapes(self):
        values = (0.7 + 0.2j, -1.1 + 0.4j, 0.3 - 0.9j, 2.0 + 0.1j)
        m = 1.3 - 0.2j
        positive = crossing_shapes(1, m, *values)
        negative = crossing_shapes(-1, m, *values)
        for corner in positive:
            self.assertAlmostEqual(positive[corner] * negative[corner], 1.0)

    def test_edge_pairs(self):
        z = 0.4 + 1.3j
        self.assertAlmostEqual(np.prod(edge_pairs(z)), -1.0)

    def test_zero_parameter(self):
        with self.assertRaises(DegenerateShapeError):
            crossing_shapes(1, 1.0, 0.0, 1.0, 1.0, 1.0)

    def test_document(self):
        shapes = shape_parameters(np.ones(7) * 2.0, 1.0, self.figure8)
        self.assertEqual(len(shapes.to_document()), 16)
        self.assertEqual(set(shapes.at('c2')), {'N', 'S', 'W', 'E'})


class TestSegmentEquations(unittest.TestCase):

    def setUp(self):
        self.figure8 = builtin('figure8')
        self.trefoil = builtin('trefoil')
        self.rng = np.random.default_rng(6)

    def test_coloring_parameters_solve(self):
        for name, m, w0 in (('figure8', 1.0, 0.5 + 0.8j), ('trefoil', 1.2 + 0.3j, -0.8 + 0.1j)):
            D, parameters = _coloring_parameters(name, m, w0)
            self.assertTrue(parameters.normalized)
            self.assertLess(np.max(np.abs(segment_residuals(parameters, m, D))), 1e-9, name)

    def test_random_parameters_fail(self):
        b = np.exp(self.rng.normal(0, 0.3, 7) + 2j * np.pi * self.rng.uniform(0, 1, 7))
        self.assertGreater(np.max(np.abs(segment_residuals(b, 1.0, self.figure8))), 1e-3)

    def test_jacobian_finite_differences(self):
        m = 1.1 + 0.2j
        system = SegmentEquationSystem(self.figure8, m)
        b = np.exp(self.rng.normal(0, 0.3, 7) + 2j * np.pi * self.rng.uniform(0, 1, 7))
        h = 1e-6
        J = system.jacobian(b)
        for j in range(len(b)):
            step = np.zeros(len(b), dtype=complex)
            step[j] = h * abs(b[j])
            column = (system.residual(b + step) - system.residual(b - step)) / (2 * step[j])
            npt.assert_allclose(J[:, j], column, rtol=1e-5, atol=1e-7)

    def test_gauge_rank_deficiency(self):
        D, parameters = _coloring_parameters('figure8', 1.0, 0.5 + 0.8j)
        J = SegmentEquationSystem(D, 1.0).jacobian(parameters.b_vector(D.E))
        rank, _ = numerical_rank(J, 1e-7)
        self.assertLessEqual(rank, len(D.E) - 1)

    def test_default_pins(self):
        pins = default_pins(self.figure8)
        self.assertEqual(len(pins), 2)
        self.assertEqual(pins, ('t7', 't2'))


class TestSolver(unittest.TestCase):

    def setUp(self):
        self.figure8 = builtin('figure8')
        self.rng = np.random.default_rng(12)

    def test_seed_already_solution(self):
        D, parameters = _coloring_parameters('figure8', 1.0, 0.5 + 0.8j)
        seed = solve_segment_equations(D, 1.0, parameters.b_vector(D.E)).b
        result = solve_segment_equations(D, 1.0, seed)
        self.assertEqual(result.iterations, 0)
        self.assertEqual(result.method, 'seed')
        npt.assert_array_equal(result.b, seed)

    def test_perturbed_seed(self):
        D, parameters = _coloring_parameters('trefoil', 1.2 + 0.3j, -0.8 + 0.1j)
        seed = parameters.b_vector(D.E) * (1 + 1e-3 * self.rng.normal(size=len(D.E)))
        result = solve_segment_equations(D, 1.2 + 0.3j, seed)
        self.assertLess(result.residual, 1e-10)
        self.assertGreater(result.iterations, 0)
        if result.method != 'newton':
            return
        for segment in result.pins:
            i = D.index(segment)
            self.assertEqual(result.b[i], seed[i])

    def test_too_many_pins(self):
        with self.assertRaises(GeometryError):
            solve_segment_equations(self.figure8, 1.0, np.ones(7) * 2.0, pins=('t1', 't2', 't3'))

    def test_zero_seed(self):
        with self.assertRaises(DegenerateShapeError):
            solve_segment_equations(self.figure8, 1.0, np.zeros(7))

    def test_multistart_signals(self):
        solver = MultistartSolver(self.figure8, 1.0)
        events = {'pre': 0, 'post': 0, 'error': 0}

        def pre(index, seed):
            events['pre'] += 1

        def post(index, result):
            events['post'] += 1
            self.assertLess(result.residual, 1e-10)

        def error(index, exception):
            events['error'] += 1

        solver.pre_solve.connect(pre)
        solver.post_solve.connect(post)
        solver.error_solve.connect(error)
        model = solver.run(self.rng, seeds=16)
        self.assertEqual(events['pre'], 16)
        self.assertEqual(events['post'] + events['error'], 16)
        self.assertGreaterEqual(events['post'], len(model))
        self.assertGreater(len(model), 0)

    def test_trefoil_generic_eigenvalue(self):
        trefoil = builtin('trefoil')
        model = MultistartSolver(trefoil, 1.2 + 0.3j).run(self.rng, seeds=16)
        self.assertGreater(len(model), 0)
        self.assertLess(np.max(np.abs(segment_residuals(model.best().b, 1.2 + 0.3j, trefoil))), 1e-10)


class TestSolutionModel(unittest.TestCase):

    def setUp(self):
        self.model = SolutionModel(1e-6)
        self.added, self.replaced = [], []
        self.model.solution_added.connect(self._on_added)
        self.model.solution_replaced.connect(self._on_replaced)

    def _on_added(self, key, result):
        self.added.append(key)

    def _on_replaced(self, key, old, new):
        self.replaced.append((old.residual, new.residual))

    def test_deduplicate_keeps_smaller_residual(self):
        b = np.array([1.0 + 1.0j, 2.0])
        self.assertTrue(self.model.add(SolveResult(b, 1e-11, 3, (), 'newton')))
        self.assertTrue(self.model.add(SolveResult(b + 1e-8, 1e-12, 4, (), 'newton')))
        self.assertFalse(self.model.add(SolveResult(b + 1e-8, 1e-10, 5, (), 'newton')))
        self.assertEqual(len(self.model), 1)
        self.assertEqual(self.model.best().residual, 1e-12)
        self.assertEqual(len(self.added), 1)
        self.assertEqual(self.replaced, [(1e-11, 1e-12)])

    def test_replace_among_several(self):
        first = SolveResult(np.array([1.0 + 0j, 2.0]), 1e-11, 1, (), 'newton')
        second = SolveResult(np.array([5.0 + 0j, 6.0]), 1e-12, 1, (), 'newton')
        self.model.add(first)
        self.model.add(second)
        better = SolveResult(first.b + 1e-9, 1e-13, 2, (), 'newton')
        self.model.add(better)
        self.assertEqual(list(self.model), [better, second])
        self.assertIs(self.model[0], better)

    def test_order(self):
        first = SolveResult(np.array([3.0 + 0j]), 1e-12, 1, (), 'newton')
        second = SolveResult(np.array([1.0 + 0j]), 1e-11, 1, (), 'newton')
        self.model.add(second)
        self.model.add(first)
        self.assertIs(self.model[0], first)
        self.assertIn(second, self.model)
        self.model.reset()
        self.assertEqual(len(self.model), 0)


class TestCriticalPoint(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.figure8 = builtin('figure8')
        cls.action = build_classical_action(cls.figure8)
        cls.point = find_critical_point(cls.figure8, rng=np.random.default_rng(1), action=cls.action)

    def test_residual(self):
        self.assertLess(self.point.diagnostics['residual'], 1e-10)

    def test_flattening(self):
        self.assertLess(self.point.flattening_defect, 1e-6)

    def test_volume(self):
        self.assertAlmostEqual(abs(volume(self.point)), FIGURE8_VOLUME, delta=1e-6)
        report = chern_simons(self.point, FIGURE8_VOLUME)
        self.assertAlmostEqual(report['volume'], FIGURE8_VOLUME, delta=1e-6)
        self.assertEqual(report['sign_matching_oracle'], '+' if report['volume_signed'] > 0 else '-')
        self.assertGreaterEqual(report['cs_phase'], 0.0)
        self.assertLess(report['cs_phase'], 2 * np.pi)

    def test_exp_gradient(self):
        exp_grad = exp_grad_classical(self.action, self.point.gamma)
        npt.assert_allclose(exp_grad, 1.0, atol=1e-8)

    def test_parameters_match(self):
        again = critical_point_from_parameters(self.action, self.point.b)
        npt.assert_allclose(np.exp(2j * np.pi * again.gamma), self.point.b, atol=1e-12)

    def test_conjugate(self):
        other = conjugate(self.point, self.action)
        self.assertAlmostEqual(volume(other), -volume(self.point), delta=1e-6)
        shapes = shape_parameters(self.point.b, 1.0, self.figure8)
        conjugate_shapes = shape_parameters(other.b, 1.0, self.figure8)
        self.assertAlmostEqual(bloch_wigner_volume(conjugate_shapes), -bloch_wigner_volume(shapes),
                               places=9)

    def test_logarithm_branch(self):
        shifts = np.zeros(len(self.figure8.E))
        shifts[2] = 1
        moved = shifted(self.point, self.action, shifts)
        self.assertLess(moved.flattening_defect, 1e-6)
        self.assertAlmostEqual(moved.reduced_value.real, self.point.reduced_value.real, places=8)

    def test_seeded(self):
        point = find_critical_point(self.figure8, seed=self.point.b, action=self.action)
        self.assertEqual(point.diagnostics['method'], 'seed')
        self.assertAlmostEqual(abs(volume(point)), FIGURE8_VOLUME, delta=1e-6)


if __name__ == '__main__':
    unittest.main()
