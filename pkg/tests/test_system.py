import math
import unittest

import numpy as np

from src.qmbvp._enums import Condition, Verdict
from src.qmbvp._exceptions import CertificationError, ShapeError
from src.qmbvp._registry import bounded_coupled, build_system, mfg_equilibrium, zero
from src.qmbvp._sampling import sample_box
from src.qmbvp.ivp import FieldEval
from src.qmbvp.monotone_solver import initial_supersolution, sweep
from src.qmbvp.oscillator import closed_form_solution, oscillator_system
from src.qmbvp.paths import BoundaryData, Grid, PathPair, VecPath, pointwise_min
from src.qmbvp.system import SystemDef, reduce_pair, reduced_system
from tests.supersolution_helper import coupled_supersolution


class TestResidual(unittest.TestCase):

    def test_closed_form_oscillator_has_small_residual(self):
        system = oscillator_system(3.0, 4.0)
        pair = closed_form_solution(3.0, 4.0, Grid(system.horizon, 4000))
        residual = system.residual(pair)
        self.assertLess(residual.interior, 1e-5)
        self.assertLess(residual.boundary, 1e-12)
        self.assertEqual(residual.x_defects.shape, (4000, 1))

    def test_boundary_gap_is_reported(self):
        system = zero(x_bar=1.0, y_bar=2.0)
        grid = system.grid(10)
        pair = PathPair(VecPath.constant(grid, 1.5), VecPath.constant(grid, 1.0))
        residual = system.residual(pair)
        self.assertAlmostEqual(residual.boundary_gap_x[0], 0.5)
        self.assertAlmostEqual(residual.boundary_gap_y[0], -1.0)
        self.assertEqual(residual.interior, 0.0)
        self.assertAlmostEqual(residual.total, 1.0)

    def test_wrong_dimensions_raise(self):
        system = bounded_coupled(dim=2)
        grid = system.grid(10)
        pair = PathPair(VecPath.constant(grid, 0.0), VecPath.constant(grid, 0.0))
        with self.assertRaises(ShapeError):
            system.residual(pair)

    def test_wrong_horizon_raises(self):
        system = bounded_coupled()
        grid = Grid(2.0, 10)
        pair = PathPair(VecPath.constant(grid, 0.0), VecPath.constant(grid, 0.0))
        with self.assertRaises(ShapeError):
            system.residual(pair)


class TestSupersolution(unittest.TestCase):

    def test_scaled_oscillator_solution_is_supersolution(self):
        system = oscillator_system(3.0, 4.0)
        pair = closed_form_solution(6.0, 8.0, Grid(system.horizon, 4000))
        self.assertEqual(system.is_supersolution(pair, tol=1e-5).verdict, Verdict.PASS)

    def test_violation_location(self):
        system = zero()
        grid = system.grid(10)
        x = VecPath.from_function(grid, lambda t: 1.0 - t)
        pair = PathPair(x, VecPath.constant(grid, 0.0))
        cert = system.is_supersolution(pair)
        self.assertFalse(cert.passed)
        self.assertAlmostEqual(cert.worst_x_residual, -1.0)
        self.assertEqual(cert.worst_x_location[1], 0)

    def test_pointwise_min_of_supersolutions_randomized(self):
        system = bounded_coupled(x_bar=0.5, y_bar=1.0, dim=2, horizon=1.0)
        grid = system.grid(1000)
        rng = np.random.default_rng(20240501)
        passed = 0
        for _ in range(100):
            first = coupled_supersolution(grid, rng, 2, 1.0)
            second = coupled_supersolution(grid, rng, 2, 1.0)
            self.assertTrue(system.is_supersolution(first, tol=1e-8).passed)
            self.assertTrue(system.is_supersolution(second, tol=1e-8).passed)
            if system.is_supersolution(pointwise_min(first, second), tol=1e-8).passed:
                passed += 1
        self.assertEqual(passed, 100)

    def test_reduced_pair_is_supersolution_of_reduced_system(self):
        system = bounded_coupled(x_bar=[0.5, 0.7], y_bar=[1.0, 1.2], horizon=1.0)
        grid = system.grid(500)
        pair = coupled_supersolution(grid, np.random.default_rng(7), 2, 1.2)
        self.assertTrue(system.is_supersolution(pair, tol=1e-8).passed)
        reduced = reduced_system(system)
        self.assertEqual((reduced.m, reduced.n), (1, 1))
        self.assertTrue(reduced.is_supersolution(reduce_pair(pair), tol=1e-8).passed)


class TestQuasiMonotone(unittest.TestCase):

    def test_bounded_coupled_passes(self):
        report = bounded_coupled(dim=3).check_quasi_monotone(samples=200)
        self.assertEqual(report.verdict, Verdict.PASS)
        self.assertEqual(report.violations, [])

    def test_oscillator_passes(self):
        self.assertEqual(oscillator_system().check_quasi_monotone(samples=200).verdict, Verdict.PASS)

    def test_raw_equilibrium_system_fails_all_y_reading(self):
        report = mfg_equilibrium('sqrt', convention='B', transformed=False).check_quasi_monotone(samples=100)
        self.assertEqual(report.verdict, Verdict.FAIL)
        self.assertTrue(any(v.which == 'M1' and v.perturbed == 'y1' for v in report.violations))

    def test_transformed_conventions(self):
        passing = mfg_equilibrium('sqrt', convention='B', transformed=True).check_quasi_monotone(samples=100)
        failing = mfg_equilibrium('sqrt', convention='A', transformed=True).check_quasi_monotone(samples=100)
        self.assertEqual(passing.verdict, Verdict.PASS)
        self.assertEqual(failing.verdict, Verdict.FAIL)
        self.assertTrue(all(v.which == 'M2' for v in failing.violations))

    def test_off_diagonal_reading_skips_own_costate(self):
        system = build_system('zero')
        hamiltonian = build_system('hamiltonian', dim=2)
        self.assertEqual(system.check_quasi_monotone(samples=10).verdict, Verdict.PASS)
        report = hamiltonian.check_quasi_monotone(samples=100, reading='off-diagonal')
        self.assertFalse(any(v.which == 'M1' and v.perturbed == f'y{v.row}' for v in report.violations))

    def test_seeded_sampling_is_reproducible(self):
        system = mfg_equilibrium('sqrt', convention='A')
        first = system.check_quasi_monotone(samples=50, seed=3)
        second = system.check_quasi_monotone(samples=50, seed=3)
        self.assertEqual([v.point for v in first.violations], [v.point for v in second.violations])


class TestReduceExtremes(unittest.TestCase):

    def test_extremes_are_ordered_component_bounds(self):
        system = SystemDef(
            m=2,
            n=3,
            f_eval=lambda t, x, y: [np.sin(t) + x[0] * y[2], x[1] - y[0] ** 2],
            g_eval=lambda t, x, y: [np.cos(x[0]) * t, -y[1], x[1] * y[2]],
            horizon=1.0,
            boundary=BoundaryData([0.0, 0.0], [0.0, 0.0, 0.0]),
            name='mixed'
        )
        reduced = system.reduce_extremes()
        for t, s, tau in sample_box([0.0, -3.0, -3.0], [1.0, 3.0, 3.0], 200):
            f_values = system.f(t, np.full(2, s), np.full(3, tau))
            g_values = system.g(t, np.full(2, s), np.full(3, tau))
            self.assertLessEqual(reduced.f_min(t, s, tau), reduced.f_max(t, s, tau))
            self.assertLessEqual(reduced.g_min(t, s, tau), reduced.g_max(t, s, tau))
            self.assertEqual(reduced.f_min(t, s, tau), f_values.min())
            self.assertEqual(reduced.f_max(t, s, tau), f_values.max())
            self.assertEqual(reduced.g_min(t, s, tau), g_values.min())
            self.assertEqual(reduced.g_max(t, s, tau), g_values.max())


class TestConditionCertificates(unittest.TestCase):

    def test_condition_i_on_bounded_coupled(self):
        system = bounded_coupled(x_bar=0.5, y_bar=1.0, horizon=1.0)
        cert = system.certify_condition(Condition.CONDITION_I, samples=2000)
        self.assertTrue(cert.passed)
        self.assertTrue(cert.envelope_ok)
        self.assertEqual(len(cert.instances_checked), 4)
        t = cert.gamma1_path.grid.nodes
        np.testing.assert_allclose(cert.gamma1_path.values[:, 0], -1.0 + 1.5 * np.exp(-t), atol=1e-9)
        np.testing.assert_allclose(cert.gamma2_path.values[:, 0], 1.0 - 0.5 * np.exp(-t), atol=1e-9)
        self.assertLessEqual(cert.m_star, float(cert.gamma1_path.values.min()))

    def test_condition_i_fails_on_oscillator(self):
        cert = oscillator_system().certify_condition('i', samples=500)
        self.assertFalse(cert.passed)
        self.assertFalse(cert.envelope_ok)
        self.assertTrue(any('envelope' in failure for failure in cert.failures))

    def test_condition_ii_on_transformed_equilibrium_system(self):
        system = mfg_equilibrium('sqrt', convention='B', transformed=True, horizon=8.0)
        cert = system.certify_condition('ii', samples=2000)
        self.assertTrue(cert.passed)
        t = cert.eta2_path.grid.nodes
        np.testing.assert_allclose(cert.eta2_path.values[:, 0], 8.0 * t, atol=1e-9)
        np.testing.assert_allclose(cert.gamma2_path.values[:, 0], 8.0 - t, atol=1e-9)
        self.assertAlmostEqual(cert.m_star, -64.0, places=6)

    def test_m_star_bounds_supersolutions_of_the_reduced_system(self):
        system = bounded_coupled(x_bar=[0.5, 0.7], y_bar=[1.0, 1.2], horizon=1.0)
        reduced = reduced_system(system)
        cert = reduced.certify_condition('i', bounds=system.alpha, intervals=200, samples=1000)
        self.assertTrue(cert.passed)
        pair = initial_supersolution(reduced, cert)
        supersolutions = [pair]
        for _ in range(20):
            pair = sweep(reduced, pair)
            supersolutions.append(pair)
        rng = np.random.default_rng(99)
        for _ in range(20):
            supersolutions.append(reduce_pair(coupled_supersolution(pair.grid, rng, 2, 1.2)))
        for candidate in supersolutions:
            self.assertTrue(reduced.is_supersolution(candidate, tol=1e-4).passed)
            self.assertGreaterEqual(min(candidate.x.values.min(), candidate.y.values.min()), cert.m_star)

    def test_missing_bounds_raise(self):
        system = build_system('hamiltonian', dh_dx=lambda x, p: x)
        with self.assertRaises(CertificationError):
            system.certify_condition('i')

    def test_blow_up_of_a_bound_fails_the_certificate(self):
        system = zero(horizon=2.0)
        quadratic = (system.alpha[0], FieldEval.scalar(lambda t, s: s ** 2 + 1.0, 'riccati'))
        cert = system.certify_condition('i', bounds=quadratic, samples=100)
        self.assertFalse(cert.passed)
        self.assertTrue(any(failure.startswith('gamma2') for failure in cert.failures))
        self.assertIsNone(cert.eta1_path)
        self.assertTrue(math.isnan(cert.m_star))


if __name__ == '__main__':
    unittest.main()
