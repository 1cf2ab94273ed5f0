import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest import mock

from src.qmbvp._exceptions import BlowUpError
from src.qmbvp.cli import COMMANDS, load_config, run
from tests.snapshot_helper import SnapshotHelper


def quiet_run(argv):
    with redirect_stdout(io.StringIO()), redirect_stderr(io.StringIO()):
        return run(argv)


class TestCliScenarios(unittest.TestCase):

    def setUp(self):
        self.snapshot_helper = SnapshotHelper()

    def test_cli_scenarios_from_file(self):
        with open('tests/scenarios.json', 'r') as f:
            scenarios = json.load(f)

        for scenario in scenarios:
            scenario_name = scenario['scenario_name']
            with self.subTest(scenario_name=scenario_name), tempfile.TemporaryDirectory() as out:
                code = quiet_run(scenario['argv'] + ['--out', out])
                self.assertEqual(code, scenario['exit_code'])
                if 'report' not in scenario:
                    continue
                with open(os.path.join(out, scenario['report'])) as f:
                    report = json.load(f)
                for expectation in scenario['expect']:
                    value = self.snapshot_helper.lookup(report, expectation['path'])
                    if 'approx' in expectation:
                        self.assertAlmostEqual(value, expectation['approx'], delta=expectation['tol'])
                    else:
                        self.assertEqual(value, expectation['equals'])

    def test_repeated_runs_are_identical(self):
        argv = ['check', '--system', 'bounded_coupled', '--samples', '100', '--seed', '11']
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            self.assertEqual(quiet_run(argv + ['--out', first]), 0)
            self.assertEqual(quiet_run(argv + ['--out', second]), 0)
            self.snapshot_helper.compare('check_bounded_coupled', first, second)

    def test_repeated_solves_are_identical(self):
        argv = ['solve-minimal', '--system', 'bounded_coupled', '--T', '1', '--N', '200']
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            quiet_run(argv + ['--out', first])
            quiet_run(argv + ['--out', second])
            self.assertIn('minimal.csv', os.listdir(first))
            self.snapshot_helper.compare('solve_minimal_bounded_coupled', first, second)


class TestCliConfiguration(unittest.TestCase):

    def test_config_file_with_flag_override(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = os.path.join(tmp, 'demo.cfg')
            with open(config, 'w') as f:
                f.write("# oscillator demo\na = 3\nb = 4  # terminal value\nscale = 5\nN = 1000\n")
            out = os.path.join(tmp, 'out')
            self.assertEqual(quiet_run(['demo-oscillator', '--config', config, '--scale', '2', '--out', out]), 0)
            with open(os.path.join(out, 'demo-oscillator.json')) as f:
                report = json.load(f)
        self.assertEqual(report['a_star'], 6.0)
        self.assertEqual(report['b_star'], 8.0)

    def test_unknown_config_key(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = os.path.join(tmp, 'bad.cfg')
            with open(config, 'w') as f:
                f.write("amplitude = 3\n")
            self.assertEqual(quiet_run(['demo-oscillator', '--config', config, '--out', tmp]), 2)
            with self.assertRaises(ValueError):
                load_config(config)

    def test_config_aliases(self):
        with tempfile.TemporaryDirectory() as tmp:
            config = os.path.join(tmp, 'game.cfg')
            with open(config, 'w') as f:
                f.write("T = 8\nlambda = 0.5\nx-bar = 0.5,1.5\nstrict = yes\n")
            values = load_config(config)
        self.assertEqual(values['horizon'], 8.0)
        self.assertEqual(values['lambda_param'], 0.5)
        self.assertEqual(list(values['x_bar']), [0.5, 1.5])
        self.assertTrue(values['strict'])

    def test_output_directory_from_environment(self):
        with tempfile.TemporaryDirectory() as tmp:
            with mock.patch.dict(os.environ, {'QMBVP_OUT': tmp}):
                self.assertEqual(quiet_run(['mfg-admissibility']), 0)
            self.assertIn('mfg-admissibility.json', os.listdir(tmp))

    def test_help_exits_cleanly(self):
        self.assertEqual(quiet_run(['--help']), 0)

    def test_missing_command(self):
        self.assertEqual(quiet_run([]), 2)

    def test_blow_up_maps_to_not_converged(self):
        def blow_up(args, out):
            raise BlowUpError(7, 0.5, float('inf'), 'riccati')

        with tempfile.TemporaryDirectory() as tmp, mock.patch.dict(COMMANDS, {'check': blow_up}):
            self.assertEqual(quiet_run(['check', '--system', 'zero', '--out', tmp]), 1)


if __name__ == '__main__':
    unittest.main()
