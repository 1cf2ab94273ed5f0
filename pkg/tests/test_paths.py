import os
import tempfile
import unittest

import numpy as np

from src.qmbvp._exceptions import ShapeError
from src.qmbvp.paths import (
    BoundaryData,
    Grid,
    PathPair,
    VecPath,
    leq_path,
    pointwise_min,
    read_pair_csv,
    sup_distance,
    worst_order_violation,
    write_pair_csv
)


class TestGrid(unittest.TestCase):

    def test_grid_nodes_and_midpoints(self):
        grid = Grid(2.0, 4)
        np.testing.assert_allclose(grid.nodes, [0.0, 0.5, 1.0, 1.5, 2.0])
        np.testing.assert_allclose(grid.midpoints, [0.25, 0.75, 1.25, 1.75])
        self.assertEqual(grid.step, 0.5)
        self.assertEqual(len(grid), 5)

    def test_grid_rejects_single_interval(self):
        with self.assertRaises(ValueError):
            Grid(1.0, 1)

    def test_grid_rejects_non_positive_horizon(self):
        with self.assertRaises(ValueError):
            Grid(0.0, 10)

    def test_grid_equality(self):
        self.assertEqual(Grid(1, 10), Grid(1.0, 10))
        self.assertNotEqual(Grid(1.0, 10), Grid(1.0, 20))


class TestVecPath(unittest.TestCase):

    def setUp(self):
        self.grid = Grid(1.0, 10)

    def test_scalar_values_become_columns(self):
        path = VecPath(self.grid, np.zeros(11))
        self.assertEqual(path.values.shape, (11, 1))
        self.assertEqual(path.dim, 1)

    def test_values_are_read_only(self):
        path = VecPath.constant(self.grid, 1.0, 2)
        with self.assertRaises(ValueError):
            path.values[0, 0] = 5.0

    def test_wrong_length_raises(self):
        with self.assertRaises(ShapeError):
            VecPath(self.grid, np.zeros(10))

    def test_non_finite_values_raise(self):
        values = np.zeros(11)
        values[3] = np.nan
        with self.assertRaises(ValueError):
            VecPath(self.grid, values)

    def test_at_interpolates_linearly(self):
        path = VecPath.from_function(self.grid, lambda t: [2.0 * t, 1.0 - t])
        np.testing.assert_allclose(path.at(0.35), [0.7, 0.65])
        np.testing.assert_allclose(path.at(1.0), [2.0, 0.0])
        np.testing.assert_allclose(path.at(-1.0), [0.0, 1.0])

    def test_slopes_and_midpoints(self):
        path = VecPath.from_function(self.grid, lambda t: t ** 2)
        np.testing.assert_allclose(path.slopes()[:, 0], 2.0 * self.grid.midpoints)
        self.assertAlmostEqual(path.midpoint_values()[0, 0], 0.005)

    def test_sup_norm(self):
        path = VecPath.from_function(self.grid, lambda t: [t - 0.8, 0.5])
        self.assertAlmostEqual(path.sup_norm(), 0.8)


class TestOrder(unittest.TestCase):

    def setUp(self):
        self.grid = Grid(1.0, 10)
        self.low = VecPath.from_function(self.grid, lambda t: [t, -1.0])
        self.high = VecPath.from_function(self.grid, lambda t: [t + 0.1, 0.0])

    def test_leq_path(self):
        self.assertTrue(leq_path(self.low, self.high))
        self.assertFalse(leq_path(self.high, self.low))
        self.assertTrue(leq_path(self.high, self.low, slack=1.0))

    def test_leq_path_negative_slack_raises(self):
        with self.assertRaises(ValueError):
            leq_path(self.low, self.high, slack=-1.0)

    def test_worst_order_violation(self):
        excess, node, component = worst_order_violation(self.high, self.low)
        self.assertAlmostEqual(excess, 1.0)
        self.assertEqual(component, 1)
        self.assertEqual(node, 0)

    def test_pointwise_min_is_below_both(self):
        a = PathPair(self.low, self.high)
        b = PathPair(self.high, self.low)
        m = pointwise_min(a, b)
        for pair in (a, b):
            self.assertTrue(leq_path(m.x, pair.x))
            self.assertTrue(leq_path(m.y, pair.y))
        np.testing.assert_allclose(m.x.values, self.low.values)

    def test_mismatched_grids_raise(self):
        other = VecPath.constant(Grid(1.0, 20), 0.0, 2)
        with self.assertRaises(ShapeError):
            sup_distance(self.low, other)
        with self.assertRaises(ShapeError):
            PathPair(self.low, other)

    def test_sup_distance(self):
        self.assertAlmostEqual(sup_distance(self.low, self.high), 1.0)


class TestBoundaryData(unittest.TestCase):

    def test_scalars_become_vectors(self):
        boundary = BoundaryData(0.5, [1.0, 2.0])
        self.assertEqual(boundary.dims, (1, 2))

    def test_non_finite_rejected(self):
        with self.assertRaises(ValueError):
            BoundaryData(float('inf'), 0.0)


class TestPairCsv(unittest.TestCase):

    def test_csv_round_trip_is_exact(self):
        grid = Grid(1.5, 7)
        pair = PathPair(VecPath.from_function(grid, lambda t: [np.sin(t), t / 3.0]),
                        VecPath.from_function(grid, lambda t: np.exp(-t)))
        with tempfile.TemporaryDirectory() as tmp:
            file_path = os.path.join(tmp, 'pair.csv')
            write_pair_csv(pair, file_path)
            with open(file_path) as f:
                self.assertEqual(f.readline().strip(), 't,x1,x2,y1')
            loaded = read_pair_csv(file_path)
        self.assertEqual(loaded.grid, grid)
        np.testing.assert_array_equal(loaded.x.values, pair.x.values)
        np.testing.assert_array_equal(loaded.y.values, pair.y.values)


if __name__ == '__main__':
    unittest.main()
