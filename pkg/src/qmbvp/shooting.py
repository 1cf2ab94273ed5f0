# -*- coding: utf-8 -*-
"""
This module contains single shooting on the unknown y(0), used as an
independent oracle for the monotone solver and to find multiple solutions.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from ._exceptions import BlowUpError
from ._models import ShootResult
from ._validators import (
    validate_finite_vector,
    validate_open_unit_interval,
    validate_positive_integer,
    validate_positive_numeric,
    validate_strictly_positive
)
from .ivp import integrate_forward
from .paths import PathPair, VecPath
from .system import SystemDef


logger = logging.getLogger(__name__)

Guess = Union[float, np.ndarray]


def _as_guess(value: Guess, n: int) -> np.ndarray:
    if np.ndim(value) == 0:
        return np.full(n, float(validate_finite_vector(value, "Y0_GUESS")[0]))
    return validate_finite_vector(value, "Y0_GUESS", dim=n)


def shoot(system: SystemDef,
          y0_guess: Guess,
          intervals: int = 1000,
          shoot_tol: float = 1e-9,
          max_iter: int = 50,
          fd_step: float = 1e-6,
          min_damping: float = 1e-4) -> ShootResult:
    """
    Solves the boundary value problem by Newton's method on y0 -> y(T) - y_bar.

    The joint system is integrated forward from (x_bar, y0). The Jacobian is
    a forward finite difference with increment ``fd_step`` per component; a
    Newton step is halved until the terminal residual decreases, down to
    ``min_damping``.

    :param system: The system.
    :param y0_guess: Starting y(0); a scalar is broadcast.
    :param intervals: Grid size.
    :param shoot_tol: Target max norm of y(T) - y_bar.
    :param max_iter: Maximum number of Newton steps.
    :param fd_step: Finite-difference increment.
    :param min_damping: Smallest damping factor tried.
    :return: The result; ``solution`` is None and ``reason`` set when Newton failed.
    """
    guess = _as_guess(y0_guess, system.n)
    validate_strictly_positive(shoot_tol, "SHOOT_TOL")
    validate_positive_integer(max_iter, "MAX_ITER")
    validate_strictly_positive(fd_step, "FD_STEP")
    validate_open_unit_interval(min_damping, "MIN_DAMPING")

    grid = system.grid(intervals)
    field = system.joint_field
    m = system.m
    x_bar, y_bar = system.boundary.x_bar, system.boundary.y_bar

    def terminal(y0: np.ndarray) -> Tuple[np.ndarray, VecPath]:
        path = integrate_forward(field, np.concatenate((x_bar, y0)), grid)
        return path.end[m:] - y_bar, path

    def failed(y0: np.ndarray, iters: int, residual: float, reason: str) -> ShootResult:
        logger.debug(f"{system.name}: shooting from {guess.tolist()} failed after {iters} steps: {reason}")
        return ShootResult(None, y0, iters, residual, guess, reason)

    y0 = guess.copy()
    try:
        residual, path = terminal(y0)
    except BlowUpError as err:
        return failed(y0, 0, float('inf'), str(err))
    norm = float(np.max(np.abs(residual)))

    iters = 0
    while norm > shoot_tol:
        if iters >= max_iter:
            return failed(y0, iters, norm, "iteration limit reached")
        jacobian = np.empty((system.n, system.n))
        try:
            for j in range(system.n):
                bumped = y0.copy()
                bumped[j] += fd_step
                jacobian[:, j] = (terminal(bumped)[0] - residual) / fd_step
            delta = np.linalg.solve(jacobian, -residual)
        except BlowUpError as err:
            return failed(y0, iters, norm, str(err))
        except np.linalg.LinAlgError:
            return failed(y0, iters, norm, "singular Jacobian")

        damping = 1.0
        accepted = False
        while damping >= min_damping:
            trial = y0 + damping * delta
            try:
                trial_residual, trial_path = terminal(trial)
            except BlowUpError:
                damping /= 2.0
                continue
            trial_norm = float(np.max(np.abs(trial_residual)))
            if trial_norm < norm:
                y0, residual, path, norm = trial, trial_residual, trial_path, trial_norm
                accepted = True
                break
            damping /= 2.0
        iters += 1
        if not accepted:
            return failed(y0, iters, norm, "no decrease down to the minimal damping")
        logger.debug(f"{system.name}: Newton step {iters}, residual {norm:.3e}, damping {damping:g}")

    solution = PathPair(VecPath(grid, path.values[:, :m]), VecPath(grid, path.values[:, m:]))
    return ShootResult(solution, y0, iters, norm, guess)


def multi_start(system: SystemDef,
                guesses: Iterable[Guess],
                intervals: int = 1000,
                dedup_radius: float = 1e-4,
                shoot_tol: float = 1e-9,
                max_workers: Optional[int] = None) -> List[ShootResult]:
    """
    Shoots from every guess and keeps the distinct converged solutions.

    Two solutions closer than ``dedup_radius`` in sup-distance count as one;
    the first one found is kept. Failed starts are dropped.

    :param system: The system.
    :param guesses: Starting values of y(0).
    :param intervals: Grid size.
    :param dedup_radius: Sup-distance below which solutions coincide.
    :param shoot_tol: Terminal tolerance passed to :func:`shoot`.
    :param max_workers: Run the starts in a thread pool of this size.
    :return: Distinct solutions sorted by sup-norm.
    """
    guesses = list(guesses)
    if not guesses:
        raise ValueError("Variable GUESSES must not be empty.")
    validate_positive_numeric(dedup_radius, "DEDUP_RADIUS")

    def run(guess: Guess) -> ShootResult:
        return shoot(system, guess, intervals=intervals, shoot_tol=shoot_tol)

    if max_workers is not None:
        validate_positive_integer(max_workers, "MAX_WORKERS")
        with ThreadPoolExecutor(max_workers=max_workers) as executor:
            results = list(executor.map(run, guesses))
    else:
        results = [run(guess) for guess in guesses]

    distinct: List[ShootResult] = []
    for result in results:
        if not result.converged:
            continue
        if all(result.solution.distance(kept.solution) > dedup_radius for kept in distinct):
            distinct.append(result)
    distinct.sort(key=lambda result: result.solution.sup_norm())
    logger.info(f"{system.name}: {len(distinct)} distinct solutions from {len(guesses)} starts")
    return distinct
