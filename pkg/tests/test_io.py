import csv
import json
import os
import tempfile
import unittest

import numpy as np

from src.qmbvp._enums import Verdict
from src.qmbvp._io import to_jsonable, write_json_report, write_trace_csv
from src.qmbvp._models import IterationTrace
from src.qmbvp.paths import Grid, VecPath


class TestReports(unittest.TestCase):

    def setUp(self):
        grid = Grid(1.0, 4)
        self.trace = IterationTrace(
            iterates=[VecPath.constant(grid, v) for v in (1.0, 0.5, 0.25)],
            increments=[0.5, 0.25],
            distances_to_limit=[0.75, 0.25, 0.0],
            converged=False,
            empirical_ratio=None
        )

    def test_paths_are_dropped_from_json(self):
        data = to_jsonable(self.trace)
        self.assertNotIn('iterates', data)
        self.assertEqual(data['increments'], [0.5, 0.25])
        self.assertIsNone(data['empirical_ratio'])

    def test_special_values(self):
        data = to_jsonable({'verdict': Verdict.PASS, 'm_star': float('nan'), 'bound': np.float64(2.0)})
        self.assertEqual(data['m_star'], 'nan')
        self.assertEqual(data['bound'], 2.0)
        with tempfile.TemporaryDirectory() as tmp:
            file_path = os.path.join(tmp, 'nested', 'report.json')
            write_json_report(data, file_path)
            with open(file_path) as f:
                loaded = json.load(f)
        self.assertEqual(loaded['verdict'], Verdict.PASS.value)

    def test_trace_csv(self):
        with tempfile.TemporaryDirectory() as tmp:
            file_path = os.path.join(tmp, 'trace.csv')
            write_trace_csv(self.trace, file_path)
            with open(file_path, newline='') as f:
                rows = list(csv.reader(f))
        self.assertEqual(rows[0], ['iterate', 'increment', 'distance_to_limit'])
        self.assertEqual(rows[1], ['0', '', '0.75'])
        self.assertEqual(rows[3], ['2', '0.25', '0.0'])
        self.assertEqual(len(rows), 4)


if __name__ == '__main__':
    unittest.main()
