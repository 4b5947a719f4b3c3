import os
import unittest

import numpy as np
import numpy.testing as npt

from holoknot.backend.backend import StateNetwork
from holoknot.backend.backend_error import NoBackendFoundError
from holoknot.backend.registry import get_quadrature_backend, get_sum_backend
from holoknot.coloring.representation import Representation
from holoknot.coloring.segment_coloring import solve_two_generator
from holoknot.core.config import QuadratureSettings
from holoknot.core.core_error import HoloKnotError, InputError
from holoknot.diagram.builtin import builtin
from holoknot.module.brute_force import BruteForceBackend
from holoknot.module.gauss_legendre import GaussLegendreBackend
from holoknot.module.rank1_lattice import Rank1LatticeBackend, korobov_vector
from holoknot.module.tensor_network import TensorNetworkBackend
from holoknot.quantize.log_coloring import LogColoring, log_coloring_from_representation
from holoknot.quantize.poles import contour_distance, pole_distance, singular_distance
from holoknot.quantize.quantize_error import NodeBudgetError, PinchedColoringError
from holoknot.quantize.scans import (allowed_mu, asymptotics_table, gauge_invariance,
                                     log_shift_invariance, parabolic_vanishing_scan)
from holoknot.quantize.state_integral import StateIntegrator, state_integral
from holoknot.quantize.state_sum import crossing_segments, quantum_action, state_sum
from holoknot.quantize.theorem import (character_sum, composite_legendre, dirichlet_kernel,
                                       fejer_kernel, fourier_coefficients, fourier_verify_1d,
                                       reconstruct, theorem_partial_sum)

SLOW = os.environ.get('HOLOKNOT_SLOW_TESTS')

TREFOIL = ('trefoil', 1.2 + 0.3j, -0.8 + 0.1j)
FIGURE8 = ('figure8', 1.0, 0.5 + 0.8j)


def _log_coloring(name, m, w0, seed=5):
    D = builtin(name)
    _, coloring = solve_two_generator(D, m, w0)
    representation = Representation(coloring, np.array([1.0, 0.3 + 0.2j]))
    lc, search = log_coloring_from_representation(D, representation, np.random.default_rng(seed))
    return D, lc, search


class TestBackends(unittest.TestCase):

    def setUp(self):
        self.rng = np.random.default_rng(2)

    def _random_network(self):
        # a ring of three tensors over four indices, one of them shared three ways
        segments = ('a', 'b', 'c', 'd')
        tensors = [
            (('a', 'b'), self.rng.normal(size=(3, 3)) + 1j * self.rng.normal(size=(3, 3))),
            (('b', 'c', 'd'), self.rng.normal(size=(3, 3, 3)) + 0j),
            (('c', 'a', 'd'), self.rng.normal(size=(3, 3, 3)) + 1j),
        ]

        def summand(n):
            result = np.ones(len(n), dtype=complex)
            index = {segment: i for i, segment in enumerate(segments)}
            for indices, array in tensors:
                result *= array[tuple(n[:, index[segment]] for segment in indices)]
            return result

        return StateNetwork(segments, 3, tensors, summand)

    def test_contraction_matches_enumeration(self):
        network = self._random_network()
        expected, _ = BruteForceBackend(chunk=7).evaluate(network)
        for strategy in ('greedy', 'optimal'):
            value, bound = TensorNetworkBackend(strategy).evaluate(network)
            self.assertAlmostEqual(abs(value - expected) / abs(expected), 0.0, delta=1e-12)
            self.assertGreater(bound, 0.0)

    def test_brute_force_budget(self):
        with self.assertRaises(NodeBudgetError):
            BruteForceBackend(max_terms=10).evaluate(self._random_network())

    def test_registry(self):
        self.assertIsInstance(get_sum_backend('brute_force'), BruteForceBackend)
        self.assertIsInstance(get_quadrature_backend('auto', 3), GaussLegendreBackend)
        self.assertIsInstance(get_quadrature_backend('auto', 5), Rank1LatticeBackend)
        with self.assertRaises(NoBackendFoundError):
            get_sum_backend('abacus')
        with self.assertRaises(NoBackendFoundError):
            get_quadrature_backend('simpson')

    def test_korobov_vector(self):
        z = korobov_vector(1021, 5)
        self.assertEqual(z[0], 1)
        self.assertEqual(len(z), 5)
        self.assertEqual(z, korobov_vector(1021, 5))

    def test_lattice_rule(self):
        backend = Rank1LatticeBackend(shifts=8)
        rules = backend.nodes(5, 1 << 14, self.rng)
        self.assertEqual(len(rules), 8)
        values = [np.sum(weights * np.prod(np.exp(points), axis=1)) for points, weights in rules]
        estimate, error = backend.estimate(values)
        exact = (np.e - 1) ** 5
        self.assertLess(abs(estimate - exact) / exact, 1e-3)
        self.assertLess(error / exact, 1e-3)

    def test_gauss_rule(self):
        backend = GaussLegendreBackend(gauss_nodes=6)
        rules = backend.nodes(3, 10 ** 6)
        self.assertEqual(len(rules[0][1]), 6 ** 3)
        values = [np.sum(weights * np.prod(points ** 2, axis=1)) for points, weights in rules]
        estimate, error = backend.estimate(values)
        self.assertAlmostEqual(estimate.real, 1.0 / 27.0, places=12)
        self.assertLess(error, 1e-12)


class TestLogColoring(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.D, cls.lc, cls.search = _log_coloring(*TREFOIL)

    def test_exponential_consistency(self):
        npt.assert_allclose(self.lc.b, self.search.parameters.b_vector(self.D.E), rtol=1e-12)
        self.assertAlmostEqual(abs(self.lc.m - TREFOIL[1]), 0.0, places=12)
        self.assertEqual(self.lc.pinched, ())

    def test_shifted(self):
        moved = self.lc.shifted('t3', 2)
        i = self.D.index('t3')
        self.assertEqual(moved.beta[i], self.lc.beta[i] + 2)
        npt.assert_array_equal(np.delete(moved.beta, i), np.delete(self.lc.beta, i))
        npt.assert_allclose(moved.b, self.lc.b, rtol=1e-12)
        with self.assertRaises(InputError):
            self.lc.shifted('t3', 0.5)

    def test_with_mu(self):
        self.assertEqual(self.lc.with_mu(self.lc.mu + 1).mu, self.lc.mu + 1)
        with self.assertRaises(InputError):
            self.lc.with_mu(self.lc.mu + 0.5)

    def test_shape(self):
        with self.assertRaises(InputError):
            LogColoring(self.D, np.zeros(3), 0.0)

    def test_values(self):
        n = np.array([[0, 1, 0, 1, 1]])
        npt.assert_allclose(self.lc.values(n, 2), (self.lc.beta + n) / 2)

    def test_pinched(self):
        pinched = LogColoring(self.D, self.lc.beta, self.lc.mu, ('x1',))
        with self.assertRaises(PinchedColoringError):
            state_sum(self.D, pinched, 2)


class TestStateSum(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.trefoil, cls.trefoil_lc, cls.trefoil_search = _log_coloring(*TREFOIL)
        cls.figure8, cls.figure8_lc, _ = _log_coloring(*FIGURE8)

    def test_contraction_matches_brute_force(self):
        for D, lc, N in ((self.trefoil, self.trefoil_lc, 2), (self.trefoil, self.trefoil_lc, 3),
                         (self.figure8, self.figure8_lc, 2)):
            contracted = state_sum(D, lc, N)
            direct = state_sum(D, lc, N, backend='brute_force')
            self.assertEqual(direct.terms, N ** len(D.E))
            self.assertLess(abs(contracted.value - direct.value) / abs(direct.value), 1e-10,
                            (D.name, N))

    def test_contraction_orders_agree(self):
        greedy = state_sum(self.trefoil, self.trefoil_lc, 3, backend=TensorNetworkBackend('greedy'))
        optimal = state_sum(self.trefoil, self.trefoil_lc, 3, backend=TensorNetworkBackend('optimal'))
        self.assertLess(abs(greedy.value - optimal.value) / abs(greedy.value), 1e-9)
        self.assertEqual(optimal.strategy['strategy'], 'optimal')

    def test_prefactor(self):
        result = state_sum(self.trefoil, self.trefoil_lc, 2)
        self.assertAlmostEqual(result.diagnostics['prefactor'], 2.0 ** -3)
        self.assertAlmostEqual(abs(result.raw_value * 2.0 ** -3 - result.value), 0.0, places=12)

    def test_crossing_tensors_are_local(self):
        action = quantum_action(self.trefoil, self.trefoil_lc, 2)
        for crossing in self.trefoil.crossings:
            segments = crossing_segments(action, crossing.id)
            self.assertLessEqual(len(segments), 4)
            self.assertTrue(set(segments) <= set(self.trefoil.E))

    def test_gauge_invariance(self):
        for N in (2, 3):
            report = gauge_invariance(self.trefoil, self.trefoil_search.shadow, N,
                                      np.random.default_rng(7 + N))
            self.assertEqual(len(report['values']), 3)
            self.assertLess(report['spread'], 1e-8, N)

    def test_gauge_invariance_figure8(self):
        _, _, search = _log_coloring(*FIGURE8)
        report = gauge_invariance(self.figure8, search.shadow, 2, np.random.default_rng(9))
        self.assertLess(report['spread'], 1e-8)

    def test_log_shift_invariance(self):
        report = log_shift_invariance(self.trefoil, self.trefoil_lc, 3,
                                      [('t1', 1), ('t4', -2), ('t5', 3)])
        self.assertLess(report['spread'], 1e-8)


class TestPoles(unittest.TestCase):

    def test_singular_distance(self):
        npt.assert_allclose(singular_distance(3, [-1 / 3, 0.5, 1 + 0.1j]), [0.0, 0.5, 0.1], atol=1e-15)

    def test_contour_distance(self):
        self.assertAlmostEqual(contour_distance(2, 0.2 + 0.05j, (0.0, 1.0)), 0.05)
        self.assertAlmostEqual(contour_distance(2, 0.2 + 0.05j, (0.0, 0.5)), np.hypot(0.3, 0.05))
        self.assertAlmostEqual(contour_distance(2, 0.2 + 0.05j, (-1.0, 0.0)), 0.05)

    def test_pole_distance_positive(self):
        D, lc, _ = _log_coloring(*TREFOIL)
        report = pole_distance(D, lc, 2)
        self.assertGreater(report['lattice'], 0.0)
        self.assertGreater(report['contour'], 0.0)
        self.assertGreaterEqual(report['lattice'], report['contour'] - 1e-12)
        self.assertEqual(len(report['contour_terms']), 12)


class TestFourierTools(unittest.TestCase):

    def test_character_sums(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            N = int(rng.integers(2, 8))
            E = int(rng.integers(1, 6))
            k = rng.integers(-3 * N, 3 * N + 1, E)
            if rng.random() < 0.3:
                k = k * N
            expected = N ** E if all(component % N == 0 for component in k) else 0
            self.assertEqual(character_sum(k, N), expected, (k.tolist(), N))

    def test_character_sum_matches_floats(self):
        k, N = (1, 3, 0), 3
        n = np.stack(np.meshgrid(*([np.arange(N)] * 3), indexing='ij'), axis=-1).reshape(-1, 3)
        direct = np.sum(np.exp(2j * np.pi * (n @ np.array(k)) / N))
        self.assertAlmostEqual(abs(direct), 0.0, places=10)
        self.assertEqual(character_sum(k, N), 0)
        self.assertEqual(character_sum((3, -6, 0), N), 27)

    def test_kernels(self):
        for K in (0, 1, 4):
            self.assertAlmostEqual(float(dirichlet_kernel(K, 0.0)), 2 * K + 1)
            self.assertAlmostEqual(float(fejer_kernel(K, 0.0)), K + 1)
            x = np.arange(1000) / 1000
            self.assertGreaterEqual(np.min(fejer_kernel(K, x)), -1e-12)
            self.assertAlmostEqual(np.mean(fejer_kernel(K, x)), 1.0)
            self.assertAlmostEqual(np.mean(dirichlet_kernel(K, x)), 1.0)

    def test_coefficients_and_reconstruction(self):
        nodes, weights = composite_legendre(64)
        self.assertAlmostEqual(np.sum(weights), 1.0, places=13)
        values = 2.0 * np.exp(2j * np.pi * 3 * nodes) + 0.5
        coefficients = fourier_coefficients(values, nodes, weights, 8, chunk=5)
        expected = np.zeros(17, dtype=complex)
        expected[8] = 0.5
        expected[8 + 3] = 2.0
        npt.assert_allclose(coefficients, expected, atol=1e-12)
        s = np.array([0.0, 0.25, 0.6])
        npt.assert_allclose(reconstruct(coefficients, s, 8), 2.0 * np.exp(2j * np.pi * 3 * s) + 0.5,
                            atol=1e-12)
        npt.assert_allclose(reconstruct(coefficients, s, 5, cesaro=True),
                            2.0 * (1 - 3 / 6) * np.exp(2j * np.pi * 3 * s) + 0.5, atol=1e-12)


class TestScans(unittest.TestCase):

    def test_allowed_mu(self):
        self.assertEqual([mu for mu in range(5) if allowed_mu(mu, 5)], [2])
        self.assertEqual([mu for mu in range(3) if allowed_mu(mu, 3)], [1])

    def test_empty_asymptotics(self):
        D, lc, _ = _log_coloring(*TREFOIL)
        self.assertEqual(len(asymptotics_table(D, lc, [])), 0)

    def test_skipped_row(self):
        D, lc, _ = _log_coloring(*TREFOIL)

        def family(N):
            if N == 3:
                raise HoloKnotError('no coloring at N = 3')
            return lc

        table = asymptotics_table(D, family, [2, 3], reference=0.3 + 0.1j)
        self.assertFalse(table.rows[0]['skipped'])
        self.assertTrue(table.rows[1]['skipped'])
        self.assertAlmostEqual(table.rows[0]['reference_real'], 0.3)

    def test_scan_preconditions(self):
        D, lc, _ = _log_coloring(*TREFOIL)
        with self.assertRaises(InputError):
            parabolic_vanishing_scan(D, lc, 3)
        _, parabolic, _ = _log_coloring(*FIGURE8)
        with self.assertRaises(InputError):
            parabolic_vanishing_scan(builtin('figure8'), parabolic, 4)


@unittest.skipUnless(SLOW, 'set HOLOKNOT_SLOW_TESTS to run state integral checks')
class TestStateIntegral(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.D, cls.lc, _ = _log_coloring(*TREFOIL)
        settings = QuadratureSettings()
        settings.qmc_points = 1 << 15
        cls.settings = settings
        cls.integrator = StateIntegrator(cls.D, cls.lc, 2, settings)

    def test_seed_reproducibility(self):
        first = self.integrator.integrate(np.zeros(5), rng=np.random.default_rng(1), refine=False)
        second = self.integrator.integrate(np.zeros(5), rng=np.random.default_rng(2), refine=False)
        self.assertLess(abs(first.value - second.value),
                        3 * (first.error_estimate + second.error_estimate) + 1e-12)

    def test_same_seed_bit_identical(self):
        first = self.integrator.integrate(np.zeros(5), rng=np.random.default_rng(4), refine=False)
        second = self.integrator.integrate(np.zeros(5), rng=np.random.default_rng(4), refine=False)
        self.assertEqual(first.value, second.value)

    def test_rule_signals(self):
        seen = []

        def post(index, sums):
            seen.append(index)

        self.integrator.post_rule.connect(post)
        self.integrator.integrate(np.zeros(5), rng=np.random.default_rng(3), refine=False)
        self.integrator.post_rule.disconnect(post)
        self.assertEqual(sorted(seen), list(range(self.settings.qmc_shifts)))

    def test_large_k_decays(self):
        k0 = self.integrator.integrate(np.zeros(5), rng=np.random.default_rng(5), refine=False)
        k = np.zeros(5, dtype=int)
        k[0] = 64
        far = self.integrator.integrate(k, rng=np.random.default_rng(5), refine=False)
        self.assertLess(abs(far.value), abs(k0.value))

    def test_threads(self):
        threaded = state_integral(self.D, self.lc, 2, np.zeros(5), self.settings,
                                  rng=np.random.default_rng(6), threads=4, refine=False)
        single = self.integrator.integrate(np.zeros(5), rng=np.random.default_rng(6), refine=False)
        self.assertAlmostEqual(abs(threaded.value - single.value), 0.0, places=12)

    def test_theorem_partial_sums(self):
        report = theorem_partial_sum(self.D, self.lc, 2, 3, self.settings, integrator=self.integrator,
                                     rng=np.random.default_rng(8))
        self.assertGreater(report.gap, 0.0)
        self.assertTrue(report.decreasing, report.cesaro_errors)
        self.assertLess(report.final_error, 5e-2)


@unittest.skipUnless(SLOW, 'set HOLOKNOT_SLOW_TESTS to run Fourier and scan checks')
class TestSlowChecks(unittest.TestCase):

    def test_fourier_reconstruction(self):
        D, lc, _ = _log_coloring(*FIGURE8)
        report = fourier_verify_1d(D, lc, 3, 't3', np.zeros(7, dtype=int), 1024, orders=(512, 1024))
        self.assertLess(report.cesaro_errors[1024], 1e-2)
        self.assertTrue(report.decreasing)
        self.assertLess(report.endpoint_defect, 1e-8)

    def test_parabolic_scan(self):
        D, lc, _ = _log_coloring(*FIGURE8)
        scan = parabolic_vanishing_scan(D, lc, 5)
        self.assertEqual([row['mu'] for row in scan.rows if row['allowed']], [2])
        self.assertTrue(np.isfinite(scan.ratio))


if __name__ == '__main__':
    unittest.main()
