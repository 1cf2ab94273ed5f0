import unittest

import numpy as np

from src.qmbvp._enums import Condition
from src.qmbvp._exceptions import BlowUpError, CertificationError, InconsistencyError, UnboundedBelowError
from src.qmbvp._models import SolveOptions
from src.qmbvp._registry import bounded_coupled
from src.qmbvp.monotone_solver import initial_supersolution, solve_minimal, sweep
from src.qmbvp.oscillator import closed_form_solution, oscillator_system
from src.qmbvp.paths import BoundaryData, PathPair, VecPath, leq_path
from src.qmbvp.shooting import multi_start
from src.qmbvp.system import SystemDef
from tests.supersolution_helper import coupled_supersolution


class TestInitialSupersolution(unittest.TestCase):

    def test_condition_i_tiles_bound_paths(self):
        system = bounded_coupled(x_bar=[0.5, 0.2], y_bar=[1.0, 0.8], horizon=1.0)
        cert = system.certify_condition(Condition.CONDITION_I, samples=500)
        pair = initial_supersolution(system, cert)
        self.assertEqual(pair.dims, (2, 2))
        np.testing.assert_array_equal(pair.x.values[:, 1], cert.gamma2_path.values[:, 0])
        np.testing.assert_array_equal(pair.y.values[:, 0], cert.eta2_path.values[:, 0])
        self.assertTrue(system.is_supersolution(pair, tol=1e-6).passed)

    def test_failed_certificate_raises(self):
        system = oscillator_system()
        cert = system.certify_condition('i', samples=200)
        with self.assertRaises(CertificationError):
            initial_supersolution(system, cert)


class TestSweep(unittest.TestCase):

    def test_sweep_decreases_a_supersolution(self):
        system = bounded_coupled(horizon=1.0)
        cert = system.certify_condition('i', samples=500)
        start = initial_supersolution(system, cert)
        for order in ('x-then-y', 'y-then-x'):
            with self.subTest(order=order):
                new = sweep(system, start, order)
                self.assertTrue(leq_path(new.x, start.x, slack=1e-10))
                self.assertTrue(leq_path(new.y, start.y, slack=1e-10))
                self.assertEqual(new.x.start[0], 0.5)
                self.assertEqual(new.y.end[0], 1.0)

    def test_sweep_decreases_random_supersolutions(self):
        system = bounded_coupled(x_bar=0.5, y_bar=1.0, dim=2, horizon=1.0)
        grid = system.grid(200)
        rng = np.random.default_rng(20240502)
        for case in range(100):
            start = coupled_supersolution(grid, rng, 2, 1.0)
            order = 'x-then-y' if case % 2 == 0 else 'y-then-x'
            with self.subTest(case=case, order=order):
                new = sweep(system, start, order)
                self.assertTrue(leq_path(new.x, start.x, slack=1e-10))
                self.assertTrue(leq_path(new.y, start.y, slack=1e-10))

    def test_invalid_order_raises(self):
        system = bounded_coupled()
        grid = system.grid(10)
        pair = PathPair(VecPath.constant(grid, 1.0), VecPath.constant(grid, 1.0))
        with self.assertRaises(ValueError):
            sweep(system, pair, 'sideways')


class TestSolveMinimal(unittest.TestCase):

    @classmethod
    def setUpClass(cls):
        cls.system = bounded_coupled(x_bar=0.5, y_bar=1.0, horizon=1.0)
        cls.cert = cls.system.certify_condition('i', samples=2000)
        cls.report = solve_minimal(cls.system, SolveOptions(tol=1e-6, max_sweeps=200, intervals=1000), cert=cls.cert)

    def test_converges_within_budget(self):
        self.assertTrue(self.report.converged)
        self.assertLessEqual(self.report.final_residual, 1e-6)
        self.assertLessEqual(self.report.sweeps_used, 200)
        self.assertFalse(self.report.stalled)

    def test_residual_history_nonincreasing(self):
        history = np.array(self.report.residual_history)
        self.assertTrue(np.all(np.diff(history) <= 1e-10))

    def test_iterates_respect_lower_bound(self):
        self.assertTrue(self.report.monotone_ok)
        self.assertTrue(self.report.lower_bound_ok)
        self.assertEqual(self.report.m_star, self.cert.m_star)
        solution = self.report.solution
        self.assertGreaterEqual(min(solution.x.values.min(), solution.y.values.min()), self.cert.m_star - 1e-6)

    def test_matches_shooting(self):
        results = multi_start(self.system, [-1.0, 0.0, 1.0, 2.0], intervals=1000)
        self.assertEqual(len(results), 1)
        shot = results[0].solution
        self.assertLessEqual(self.report.solution.distance(shot), 1e-5)
        self.assertTrue(leq_path(self.report.solution.x, shot.x, slack=1e-5))
        self.assertTrue(leq_path(self.report.solution.y, shot.y, slack=1e-5))

    def test_y_then_x_order_reaches_the_same_solution(self):
        report = solve_minimal(self.system, SolveOptions(tol=1e-6, max_sweeps=200, order='y-then-x'), cert=self.cert)
        self.assertTrue(report.converged)
        self.assertLessEqual(report.solution.distance(self.report.solution), 1e-5)

    def test_needs_certificate_or_initial_pair(self):
        with self.assertRaises(ValueError):
            solve_minimal(self.system)


class TestSolveMinimalOscillator(unittest.TestCase):

    def setUp(self):
        self.system = oscillator_system(3.0, 4.0)
        self.start = closed_form_solution(4.0, 5.0, self.system.grid(1000))

    def test_divergence_guard_trips(self):
        opts = SolveOptions(intervals=1000, strict=False, max_sweeps=200)
        with self.assertRaises(UnboundedBelowError):
            solve_minimal(self.system, opts, initial=self.start)

    def test_strict_mode_reports_inconsistency_or_divergence(self):
        with self.assertRaises((InconsistencyError, UnboundedBelowError)):
            solve_minimal(self.system, SolveOptions(intervals=1000, max_sweeps=200), initial=self.start)


class TestSolveMinimalBlowUp(unittest.TestCase):

    def riccati(self, sign, x_bar):
        return SystemDef(
            m=1,
            n=1,
            f_eval=lambda t, x, y: sign * x ** 2,
            g_eval=lambda t, x, y: 0.0 * y,
            horizon=1.0,
            boundary=BoundaryData(x_bar, 0.0),
            name='riccati'
        )

    def start(self, system, value):
        grid = system.grid(100)
        return PathPair(VecPath.constant(grid, value), VecPath.constant(grid, 0.0))

    def test_upward_blow_up_is_not_unbounded_below(self):
        system = self.riccati(1.0, 2.0)
        with self.assertRaises(BlowUpError) as ctx:
            solve_minimal(system, SolveOptions(intervals=100, strict=False), initial=self.start(system, 3.0))
        self.assertNotIsInstance(ctx.exception, UnboundedBelowError)
        self.assertFalse(ctx.exception.downward)

    def test_downward_blow_up_is_unbounded_below(self):
        system = self.riccati(-1.0, -2.0)
        with self.assertRaises(UnboundedBelowError) as ctx:
            solve_minimal(system, SolveOptions(intervals=100, strict=False), initial=self.start(system, 0.0))
        self.assertTrue(ctx.exception.__cause__.downward)


if __name__ == '__main__':
    unittest.main()
