# -*- coding: utf-8 -*-
"""
Command-line front end.

Every subcommand writes a JSON report and CSV trajectories to the output
directory and prints a one-line summary. Exit codes:

    0  success
    1  solver did not converge or a solve blew up
    2  invalid configuration
    3  supersolutions unbounded below
"""
import argparse
import logging
import os
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from ._enums import Condition
from ._exceptions import BlowUpError, CertificationError, ConvergenceError, InconsistencyError, UnboundedBelowError
from ._io import write_json_report, write_trace_csv
from ._models import SolveOptions
from ._registry import SYSTEMS, build_system
from .mfg import MeanFieldGame
from .monotone_solver import solve_minimal
from .oscillator import demo
from .paths import VecPath, write_pair_csv, write_path_csv
from .shooting import multi_start, shoot
from .system import SystemDef


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NOT_CONVERGED = 1
EXIT_CONFIG = 2
EXIT_UNBOUNDED = 3

DEFAULT_OUT = 'qmbvp_out'
OUT_ENV = 'QMBVP_OUT'


def _vector(text: str) -> Union[float, np.ndarray]:
    values = [float(item) for item in text.split(',') if item.strip()]
    if not values:
        raise ValueError(f"Empty vector: {text!r}.")
    return values[0] if len(values) == 1 else np.array(values)


def _guesses(text: str) -> List[Union[float, np.ndarray]]:
    """Guesses separated by ';', components by ','."""
    return [_vector(item) for item in text.split(';') if item.strip()]


def _boolean(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ('1', 'true', 'yes', 'on'):
        return True
    if lowered in ('0', 'false', 'no', 'off'):
        return False
    raise ValueError(f"Not a boolean: {text!r}.")


# flag, destination, converter, choices, help
OPTIONS = [
    ('--system', 'system', str, sorted(SYSTEMS), 'registry system'),
    ('--N', 'intervals', int, None, 'number of grid intervals'),
    ('--tol', 'tol', float, None, 'residual tolerance'),
    ('--T', 'horizon', float, None, 'horizon'),
    ('--kappa', 'kappa', float, None, 'barycenter attraction weight'),
    ('--convention', 'convention', str, ['A', 'B'], 'costate sign convention'),
    ('--out', 'out', str, None, f'output directory (default ${OUT_ENV} or {DEFAULT_OUT})'),
    ('--seed', 'seed', int, None, 'seed of the scrambled sampling sequence'),
    ('--log-level', 'log_level', str, ['DEBUG', 'INFO', 'WARNING', 'ERROR'], 'logging level'),
    ('--a', 'a', float, None, 'oscillator x(0)'),
    ('--b', 'b', float, None, 'oscillator y(T)'),
    ('--x-bar', 'x_bar', _vector, None, 'initial state, comma separated'),
    ('--y-bar', 'y_bar', _vector, None, 'terminal state, comma separated'),
    ('--dim', 'dim', int, None, 'dimension'),
    ('--potential', 'potential', str, None, 'potential name'),
    ('--scale', 'scale', float, None, 'supersolution scale of the oscillator demo'),
    ('--theta', 'theta', float, None, 'candidate scale'),
    ('--lambda', 'lambda_param', float, None, 'candidate switching fraction'),
    ('--variant', 'variant', str, ['as-printed', 'sign-adjusted'], 'candidate variant'),
    ('--guesses', 'guesses', _guesses, None, "shooting guesses, ';' between guesses, ',' between components"),
    ('--max-iters', 'max_iters', int, None, 'fixed-point iterations'),
    ('--b0', 'b0', float, None, 'constant initial barycenter'),
    ('--max-sweeps', 'max_sweeps', int, None, 'monotone sweeps'),
    ('--order', 'order', str, ['x-then-y', 'y-then-x'], 'sweep order'),
    ('--strict', 'strict', _boolean, None, 'raise on monotonicity violations'),
    ('--reading', 'reading', str, ['all-y', 'off-diagonal'], 'quasi-monotonicity reading'),
    ('--samples', 'samples', int, None, 'sample count of the monotonicity check'),
    ('--equilibrium', 'equilibrium', str, ['zero', 'nontrivial'], 'equilibrium analysed by mfg-spectrum'),
]
CONVERTERS: Dict[str, Callable[[str], Any]] = {dest: converter for _, dest, converter, _, _ in OPTIONS}


def _kwargs(**params: Any) -> Dict[str, Any]:
    return {key: value for key, value in params.items() if value is not None}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    for flag, dest, converter, choices, text in OPTIONS:
        common.add_argument(flag, dest=dest, type=converter, choices=choices, default=None, help=text)
    common.add_argument('--config', dest='config', default=None, help='key=value configuration file')

    parser = argparse.ArgumentParser(prog='qmbvp', description='Quasi-monotone two-point boundary value problems.')
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True
    for name, text in (
            ('check', 'quasi-monotonicity and existence certificates'),
            ('solve-minimal', 'minimal solution by monotone sweeps'),
            ('shoot', 'solutions by (multi-start) shooting'),
            ('demo-oscillator', 'unbounded supersolutions of the oscillator'),
            ('mfg-admissibility', 'admissibility inequalities of the mean-field game'),
            ('mfg-phi', 'best response to a constant barycenter'),
            ('mfg-fixed-point', 'fixed-point iteration of the best response'),
            ('mfg-equilibria', 'equilibria of the mean-field game'),
            ('mfg-spectrum', 'linear stability of an equilibrium'),
            ('mfg-supersolution', 'explicit negative supersolution candidate')):
        commands.add_parser(name, parents=[common], help=text)
    return parser


def load_config(file_path: str) -> Dict[str, Any]:
    """
    Reads a flat key=value file. Keys are option destinations (dashes allowed);
    '#' starts a comment.

    :raises ValueError: On a malformed line or an unknown key.
    """
    values: Dict[str, Any] = {}
    with open(file_path, 'r') as f:
        for number, line in enumerate(f, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            if '=' not in line:
                raise ValueError(f"{file_path}:{number}: expected key=value, got {line!r}.")
            key, raw = (part.strip() for part in line.split('=', 1))
            key = key.lstrip('-').replace('-', '_')
            if key == 'N':
                key = 'intervals'
            elif key == 'T':
                key = 'horizon'
            elif key == 'lambda':
                key = 'lambda_param'
            if key not in CONVERTERS:
                raise ValueError(f"{file_path}:{number}: unknown key {key!r}.")
            values[key] = CONVERTERS[key](raw)
    return values


def _merge_config(args: argparse.Namespace) -> None:
    if args.config is None:
        return
    for key, value in load_config(args.config).items():
        if getattr(args, key) is None:
            setattr(args, key, value)


def _output_dir(args: argparse.Namespace) -> str:
    out = args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT
    os.makedirs(out, exist_ok=True)
    return out


def _system(args: argparse.Namespace) -> SystemDef:
    if args.system is None:
        raise ValueError("Attribute SYSTEM is required for this command.")
    return build_system(args.system, a=args.a, b=args.b, x_bar=args.x_bar, y_bar=args.y_bar, dim=args.dim,
                        horizon=args.horizon, potential=args.potential, convention=args.convention)


def _game(args: argparse.Namespace) -> MeanFieldGame:
    return MeanFieldGame(**_kwargs(potential=args.potential, kappa=args.kappa, horizon=args.horizon,
                                   intervals=args.intervals, convention=args.convention, dim=args.dim, tol=args.tol))


def _certificates(system: SystemDef, args: argparse.Namespace) -> Dict[str, Any]:
    certificates = {}
    for which, bounds in ((Condition.CONDITION_I, system.alpha), (Condition.CONDITION_II, system.beta)):
        if bounds is None:
            certificates[which.value] = None
            continue
        certificates[which.value] = system.certify_condition(which, **_kwargs(intervals=args.intervals, seed=args.seed))
    return certificates


def _cmd_check(args: argparse.Namespace, out: str) -> int:
    system = _system(args)
    monotonicity = system.check_quasi_monotone(**_kwargs(samples=args.samples, reading=args.reading, seed=args.seed))
    certificates = _certificates(system, args)
    write_json_report({'system': system.name, 'monotonicity': monotonicity, 'conditions': certificates},
                      os.path.join(out, 'check.json'))
    states = ', '.join(f"condition {key} {'n/a' if cert is None else cert.verdict.value}"
                       for key, cert in certificates.items())
    print(f"check {system.name}: monotonicity {monotonicity.verdict.value}, {states}")
    return EXIT_OK


def _cmd_solve_minimal(args: argparse.Namespace, out: str) -> int:
    system = _system(args)
    opts = SolveOptions(**_kwargs(tol=args.tol, max_sweeps=args.max_sweeps, intervals=args.intervals,
                                  order=args.order, strict=bool(args.strict)))
    cert = initial = None
    for candidate in _certificates(system, argparse.Namespace(intervals=opts.intervals, seed=args.seed)).values():
        if candidate is not None and candidate.passed:
            cert = candidate
            break
    if cert is None:
        if system.supersolution is None:
            raise CertificationError(f"{system.name}: no certified or known supersolution to start from.")
        logger.warning(f"{system.name}: no condition certified, starting from the known supersolution")
        initial = system.supersolution(system.grid(opts.intervals))
    report = solve_minimal(system, opts, cert=cert, initial=initial)
    write_pair_csv(report.solution, os.path.join(out, 'minimal.csv'))
    write_json_report(report, os.path.join(out, 'solve-minimal.json'))
    print(f"solve-minimal {system.name}: {'converged' if report.converged else 'not converged'} "
          f"after {report.sweeps_used} sweeps, residual {report.final_residual:.3e}")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def _cmd_shoot(args: argparse.Namespace, out: str) -> int:
    system = _system(args)
    guesses = args.guesses or [0.0]
    if len(guesses) == 1:
        results = [shoot(system, guesses[0], **_kwargs(intervals=args.intervals, shoot_tol=args.tol))]
        results = [result for result in results if result.converged]
    else:
        results = multi_start(system, guesses, **_kwargs(intervals=args.intervals, shoot_tol=args.tol))
    for k, result in enumerate(results):
        write_pair_csv(result.solution, os.path.join(out, f'shoot_{k}.csv'))
    write_json_report({'system': system.name, 'solutions': results}, os.path.join(out, 'shoot.json'))
    print(f"shoot {system.name}: {len(results)} solution(s) from {len(guesses)} guess(es)")
    return EXIT_OK if results else EXIT_NOT_CONVERGED


def _cmd_demo_oscillator(args: argparse.Namespace, out: str) -> int:
    report = demo(**_kwargs(a=args.a, b=args.b, scale=args.scale, horizon=args.horizon, intervals=args.intervals,
                            tol=args.tol))
    write_pair_csv(report.solution, os.path.join(out, 'solution.csv'))
    write_pair_csv(report.supersolution, os.path.join(out, 'supersolution.csv'))
    write_json_report(report, os.path.join(out, 'demo-oscillator.json'))
    witness = 'none' if report.witness is None else f"{report.witness.component} at t={report.witness.time:.4f}"
    print(f"demo-oscillator ({report.a_star:g}, {report.b_star:g}): min x on [0, T] {report.min_x_horizon:.6f}, "
          f"on [0, pi] {report.min_x_half_period:.6f}, witness {witness}")
    return EXIT_OK


def _cmd_mfg_admissibility(args: argparse.Namespace, out: str) -> int:
    game = _game(args)
    report = game.admissibility()
    write_json_report(report, os.path.join(out, 'mfg-admissibility.json'))
    print(f"mfg-admissibility {game.potential.name}, T={game.horizon:g}: {report.verdict.value} "
          f"(smallest admissible T {report.horizon_threshold:.4f})")
    return EXIT_OK


def _constant_barycenter(game: MeanFieldGame, value: Optional[float], default: float) -> VecPath:
    return VecPath.constant(game.grid, default if value is None else value, game.dim)


def _cmd_mfg_phi(args: argparse.Namespace, out: str) -> int:
    game = _game(args)
    b = _constant_barycenter(game, args.b0, 0.0)
    x = game.phi(b)
    write_path_csv(x, os.path.join(out, 'phi.csv'), prefix='x')
    write_json_report({'game': repr(game), 'b0': b.values[0], 'x_end': x.end, 'sup_norm': x.sup_norm()},
                      os.path.join(out, 'mfg-phi.json'))
    print(f"mfg-phi: sup |Phi(b)| = {x.sup_norm():.6g}")
    return EXIT_OK


def _cmd_mfg_fixed_point(args: argparse.Namespace, out: str) -> int:
    game = _game(args)
    b0 = _constant_barycenter(game, args.b0, 0.01)
    trace = game.fixed_point_iterate(b0, **_kwargs(max_iters=args.max_iters, tol=args.tol))
    write_trace_csv(trace, os.path.join(out, 'trace.csv'))
    write_path_csv(trace.iterates[-1], os.path.join(out, 'limit.csv'), prefix='b')
    write_json_report(trace, os.path.join(out, 'mfg-fixed-point.json'))
    ratio = 'n/a' if trace.empirical_ratio is None else f"{trace.empirical_ratio:.4f}"
    print(f"mfg-fixed-point: {'converged' if trace.converged else 'not converged'} after "
          f"{len(trace.increments)} iterations, ratio {ratio}")
    return EXIT_OK if trace.converged else EXIT_NOT_CONVERGED


def _cmd_mfg_equilibria(args: argparse.Namespace, out: str) -> int:
    game = _game(args)
    found = game.equilibria(guesses=args.guesses)
    for k, pair in enumerate(found.equilibria):
        write_pair_csv(pair, os.path.join(out, f'equilibrium_{k}.csv'))
    if found.minimal is not None:
        write_pair_csv(found.minimal.solution, os.path.join(out, 'minimal.csv'))
    write_json_report(found, os.path.join(out, 'mfg-equilibria.json'))
    print(f"mfg-equilibria {game.convention.value}: {len(found.equilibria)} equilibria, "
          f"admissible {found.admissible}")
    return EXIT_OK if found.equilibria else EXIT_NOT_CONVERGED


def _cmd_mfg_spectrum(args: argparse.Namespace, out: str) -> int:
    game = _game(args)
    if args.equilibrium in (None, 'zero'):
        equilibrium, label = game.zero_equilibrium(), 'zero'
    else:
        nontrivial = [pair for pair in game.equilibria(guesses=args.guesses).equilibria if pair.sup_norm() > 1e-6]
        if not nontrivial:
            raise ConvergenceError("No nontrivial equilibrium found.")
        equilibrium, label = nontrivial[-1], 'nontrivial'
    report = game.spectrum(equilibrium, label=label)
    write_json_report(report, os.path.join(out, 'mfg-spectrum.json'))
    print(f"mfg-spectrum {label}: dominant {report.dominant_lambda_power:.6f}, bound {report.bound:.6f}, "
          f"stable {report.stable}")
    return EXIT_OK if report.power_converged else EXIT_NOT_CONVERGED


def _cmd_mfg_supersolution(args: argparse.Namespace, out: str) -> int:
    game = _game(args)
    report = game.candidate_supersolution(**_kwargs(theta=args.theta, lambda_param=args.lambda_param,
                                                    variant=args.variant))
    write_pair_csv(report.pair, os.path.join(out, 'candidate.csv'))
    write_json_report(report, os.path.join(out, 'mfg-supersolution.json'))
    print(f"mfg-supersolution {report.variant.value}: supersolution {report.certificate.verdict.value}, "
          f"continuous {report.continuity.continuous}")
    return EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace, str], int]] = {
    'check': _cmd_check,
    'solve-minimal': _cmd_solve_minimal,
    'shoot': _cmd_shoot,
    'demo-oscillator': _cmd_demo_oscillator,
    'mfg-admissibility': _cmd_mfg_admissibility,
    'mfg-phi': _cmd_mfg_phi,
    'mfg-fixed-point': _cmd_mfg_fixed_point,
    'mfg-equilibria': _cmd_mfg_equilibria,
    'mfg-spectrum': _cmd_mfg_spectrum,
    'mfg-supersolution': _cmd_mfg_supersolution,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """
    Runs one subcommand.

    :param argv: Arguments without the program name; defaults to ``sys.argv[1:]``.
    :return: The exit code.
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG

    try:
        _merge_config(args)
        logging.basicConfig(level=getattr(logging, args.log_level or 'WARNING'))
        out = _output_dir(args)
        return COMMANDS[args.command](args, out)
    except UnboundedBelowError as err:
        print(f"{args.command}: unbounded below: {err}", file=sys.stderr)
        return EXIT_UNBOUNDED
    except (ConvergenceError, InconsistencyError, BlowUpError) as err:
        print(f"{args.command}: {err}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (ValueError, TypeError, OSError) as err:
        print(f"{args.command}: invalid configuration: {err}", file=sys.stderr)
        return EXIT_CONFIG


def main() -> None:
    sys.exit(run())
