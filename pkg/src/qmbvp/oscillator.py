# -*- coding: utf-8 -*-
"""
The harmonic oscillator x' = y, y' = -x with x(0) = a, y(T) = b.

It is quasi-monotone, yet its supersolutions are not bounded below: the
solutions for boundary data scale*(a, b) are supersolutions of the (a, b)
problem and their amplitude grows without bound. Comparison with the
solution fails as a consequence.
"""
import logging
import math
from typing import Optional

import numpy as np

from ._enums import Verdict
from ._models import ComparisonWitness, OscillatorDemoReport
from ._validators import validate_positive_integer, validate_positive_numeric, validate_strictly_positive
from .ivp import FieldEval
from .paths import BoundaryData, Grid, PathPair, VecPath
from .shooting import shoot
from .system import SystemDef


logger = logging.getLogger(__name__)


def closed_form_solution(a: float, b: float, grid: Grid) -> PathPair:
    """
    x = a cos t + c sin t, y = -a sin t + c cos t with c = (b + a sin T) / cos T.

    At T = 2 pi this is r sin(theta + t), r cos(theta + t) with
    r = sqrt(a^2 + b^2) and theta = atan2(a, b).

    :raises ValueError: At a resonant horizon, cos T = 0.
    """
    horizon = grid.horizon
    if abs(math.cos(horizon)) < 1e-12:
        raise ValueError(f"Horizon {horizon} is resonant, cos T = 0.")
    c = (b + a * math.sin(horizon)) / math.cos(horizon)
    t = grid.nodes
    return PathPair(
        VecPath(grid, a * np.cos(t) + c * np.sin(t)),
        VecPath(grid, -a * np.sin(t) + c * np.cos(t))
    )


def oscillator_system(a: float = 3.0, b: float = 4.0, horizon: float = 2 * math.pi) -> SystemDef:
    """
    The oscillator as a registry system.

    Its default bounds are constants, which no bounded pair can satisfy since
    f = y and g = -x are unbounded. Its known supersolution is the solution
    for (a + 1, b + 1).
    """
    return SystemDef(
        m=1,
        n=1,
        f_eval=lambda t, x, y: y,
        g_eval=lambda t, x, y: -x,
        horizon=horizon,
        boundary=BoundaryData(a, b),
        name='oscillator',
        alpha=(FieldEval.scalar(lambda t, s: -1.0, 'alpha1=-1'), FieldEval.scalar(lambda t, s: 1.0, 'alpha2=1')),
        beta=(FieldEval.scalar(lambda t, tau: -1.0, 'beta1=-1'), FieldEval.scalar(lambda t, tau: 1.0, 'beta2=1')),
        supersolution=lambda grid: closed_form_solution(a + 1.0, b + 1.0, grid)
    )


def comparison_witness(solution: PathPair, supersolution: PathPair, margin: float = 1e-12) -> Optional[ComparisonWitness]:
    """
    First node (then component, x before y) where the supersolution lies
    below the solution by more than ``margin``.
    """
    for k, t in enumerate(solution.grid.nodes):
        for label, sol, sup in (('x', solution.x, supersolution.x), ('y', solution.y, supersolution.y)):
            gaps = sol.values[k] - sup.values[k]
            for i, gap in enumerate(gaps):
                if gap > margin:
                    return ComparisonWitness(k, f'{label}{i + 1}', float(t), float(gap))
    return None


def demo(a: float = 3.0,
         b: float = 4.0,
         scale: float = 1.0,
         horizon: float = 2 * math.pi,
         intervals: int = 4000,
         shoot_guess: float = 0.0,
         tol: float = 1e-5) -> OscillatorDemoReport:
    """
    Compares the (a, b) solution with the supersolution for scale*(a, b).

    :param a: x(0).
    :param b: y(T).
    :param scale: Factor of the supersolution boundary data, at least 1.
    :param horizon: The horizon T, non-resonant.
    :param intervals: Grid size.
    :param shoot_guess: y(0) guess of the shooting cross-check.
    :param tol: Tolerance of the supersolution certificate.
    :return: The demo report.
    :raises ValueError: If the scaled data does not dominate (a, b).
    """
    validate_strictly_positive(horizon, "HORIZON")
    validate_positive_integer(intervals, "INTERVALS", minimum=2)
    validate_positive_numeric(scale, "SCALE")
    a_star, b_star = scale * a, scale * b
    if scale < 1 or a_star < a or b_star < b:
        raise ValueError(f"Supersolution data ({a_star}, {b_star}) must dominate ({a}, {b}).")

    grid = Grid(horizon, intervals)
    system = oscillator_system(a, b, horizon)
    solution = closed_form_solution(a, b, grid)
    supersolution = closed_form_solution(a_star, b_star, grid)
    certificate = system.is_supersolution(supersolution, tol)

    c_star = (b_star + a_star * math.sin(horizon)) / math.cos(horizon)
    nodes = grid.nodes
    half = nodes <= min(math.pi, horizon) + 1e-12
    min_full = float(supersolution.x.values[:, 0].min())
    min_half = float(supersolution.x.values[half, 0].min())

    result = shoot(system, shoot_guess, intervals=intervals)
    shooting_error = result.solution.distance(solution) if result.converged else None
    witness = comparison_witness(solution, supersolution)
    if certificate.verdict is Verdict.FAIL:
        logger.warning(f"Scaled oscillator solution failed its supersolution check at tol {tol}")
    logger.info(f"Oscillator ({a}, {b}), scale {scale}: min x over [0, T] = {min_full:.6g}")

    return OscillatorDemoReport(
        a=a,
        b=b,
        a_star=a_star,
        b_star=b_star,
        horizon=horizon,
        radius=math.hypot(a_star, c_star),
        min_x_horizon=min_full,
        min_x_half_period=min_half,
        supersolution_certificate=certificate,
        witness=witness,
        shooting_error=shooting_error,
        solution=solution,
        supersolution=supersolution
    )
