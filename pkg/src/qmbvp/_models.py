# -*- coding: utf-8 -*-
"""
This module contains dataclasses for the reports returned by the solvers.

Paths are kept on the reports as attributes; the JSON export leaves them out
and writes them as CSV next to the report.
"""
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np

from ._enums import CandidateVariant, Condition, Convention, MonotonicityReading, SweepOrder, Verdict
from ._validators import validate_positive_integer, validate_strictly_positive
from .paths import PathPair, VecPath


@dataclass
class Residual:
    """
    Midpoint defects of a pair against a system.

    :param x_defects: Forward-difference slope minus f at each midpoint, shape (N, m).
    :param y_defects: Forward-difference slope minus g at each midpoint, shape (N, n).
    :param boundary_gap_x: x(0) - x_bar.
    :param boundary_gap_y: y(T) - y_bar.
    :param interior: Max norm of the midpoint defects.
    :param boundary: Max norm of the boundary gaps.
    """
    x_defects: np.ndarray
    y_defects: np.ndarray
    boundary_gap_x: np.ndarray
    boundary_gap_y: np.ndarray
    interior: float
    boundary: float

    @property
    def total(self) -> float:
        return max(self.interior, self.boundary)


@dataclass
class SupersolutionCertificate:
    """
    Verdict on the supersolution inequalities.

    ``worst_x_residual`` is the smallest value of slope(x) - f and
    ``worst_y_residual`` the smallest value of g - slope(y); both are negative
    where the inequality is violated. Locations are (midpoint index, component).

    :param verdict: PASS iff every boundary gap and worst residual is >= -tol.
    :param boundary_gap_x: x(0) - x_bar.
    :param boundary_gap_y: y(T) - y_bar.
    :param worst_x_residual: Smallest x-block margin.
    :param worst_x_location: Where it occurs.
    :param worst_y_residual: Smallest y-block margin.
    :param worst_y_location: Where it occurs.
    :param tol: The one-sided slack used.
    """
    verdict: Verdict
    boundary_gap_x: np.ndarray
    boundary_gap_y: np.ndarray
    worst_x_residual: float
    worst_x_location: Tuple[int, int]
    worst_y_residual: float
    worst_y_location: Tuple[int, int]
    tol: float

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


@dataclass
class Violation:
    """
    One sampled slope with the wrong sign.

    :param which: 'M1' for an f-row, 'M2' for a g-row.
    :param row: Index i of f_i or j of g_j.
    :param perturbed: The perturbed variable, e.g. 'x2' or 'y1'.
    :param point: The sample point (t, x..., y...).
    :param slope: The signed finite-difference slope.
    """
    which: str
    row: int
    perturbed: str
    point: List[float]
    slope: float


@dataclass
class MonotonicityReport:
    verdict: Verdict
    violations: List[Violation]
    reading: MonotonicityReading
    samples: int
    step: float


@dataclass
class ReducedFields:
    """
    Scalar reductions of a system on diagonal vectors.

    Each field is a callable ``(t, s, tau) -> float`` obtained by evaluating
    f or g at x = (s, ..., s), y = (tau, ..., tau) and taking the min or max
    over components.
    """
    f_min: Callable[[float, float, float], float]
    f_max: Callable[[float, float, float], float]
    g_min: Callable[[float, float, float], float]
    g_max: Callable[[float, float, float], float]


@dataclass
class ConditionCertificate:
    """
    Outcome of the bound construction for one existence condition.

    Under condition 'i' the gamma paths live in the x-variable and the eta
    paths in the y-variable; under condition 'ii' the roles are swapped.

    :param which: The condition certified.
    :param bound_fields: Names of the two bounding fields.
    :param gamma1_path: Lower bound path of the bounded block.
    :param gamma2_path: Upper path of the bounded block (supersolution block).
    :param eta1_path: Lower bound path of the other block.
    :param eta2_path: Supersolution path of the other block.
    :param m_star: Uniform lower bound min{min gamma1, min eta1}.
    :param verdict: PASS iff all four solves completed and the envelope holds.
    :param envelope_ok: Result of the sampled envelope inequality.
    :param envelope_excess: Largest sampled excess of the envelope inequality.
    :param failures: Human readable reasons of a FAIL verdict.
    :param instances_checked: Description of every Cauchy problem solved.
    """
    which: Condition
    bound_fields: Tuple[str, str]
    gamma1_path: Optional[VecPath]
    gamma2_path: Optional[VecPath]
    eta1_path: Optional[VecPath]
    eta2_path: Optional[VecPath]
    m_star: float
    verdict: Verdict
    envelope_ok: bool
    envelope_excess: float
    failures: List[str] = field(default_factory=list)
    instances_checked: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


@dataclass
class SolveOptions:
    """
    Options of the monotone solver.

    :param tol: Residual target.
    :param max_sweeps: Maximum number of sweeps.
    :param stall_tol: Sup-distance between iterates below which the solve stalls.
    :param intervals: Grid size used when the initial pair comes from a certificate.
    :param divergence_guard: The solve is abandoned once an iterate drops below -divergence_guard.
    :param monotone_slack: Relative slack of the per-sweep order check.
    :param strict: Raise on an order violation instead of recording it.
    :param order: Sweep order.
    """
    tol: float = 1e-6
    max_sweeps: int = 500
    stall_tol: float = 1e-12
    intervals: int = 1000
    divergence_guard: float = 1e8
    monotone_slack: float = 1e-10
    strict: bool = True
    order: SweepOrder = SweepOrder.X_THEN_Y

    def __post_init__(self) -> None:
        validate_strictly_positive(self.tol, "TOL")
        validate_positive_integer(self.max_sweeps, "MAX_SWEEPS")
        validate_strictly_positive(self.stall_tol, "STALL_TOL")
        validate_positive_integer(self.intervals, "INTERVALS", minimum=2)
        validate_strictly_positive(self.divergence_guard, "DIVERGENCE_GUARD")
        validate_strictly_positive(self.monotone_slack, "MONOTONE_SLACK")
        self.order = SweepOrder(self.order)


@dataclass
class MinimalSolutionReport:
    """
    Result of a monotone solve.

    :param solution: The last iterate.
    :param sweeps_used: Number of sweeps performed.
    :param residual_history: Residual of every iterate after its sweep.
    :param distance_history: Sup-distance between consecutive iterates.
    :param monotone_ok: Every sweep output stayed below its input.
    :param lower_bound_ok: Every iterate stayed above m_star - 1e-6.
    :param converged: The residual target was reached.
    :param stalled: The iterates stopped moving before reaching the target.
    :param initial_supersolution: The starting pair.
    :param m_star: Lower bound from the certificate, if one was given.
    """
    solution: PathPair
    sweeps_used: int
    residual_history: List[float]
    distance_history: List[float]
    monotone_ok: bool
    lower_bound_ok: bool
    converged: bool
    stalled: bool
    initial_supersolution: PathPair
    m_star: Optional[float] = None

    @property
    def final_residual(self) -> float:
        return self.residual_history[-1] if self.residual_history else float('nan')


@dataclass
class ShootResult:
    """
    Result of single shooting from one guess.

    :param solution: The trajectory pair, None when Newton failed.
    :param y0_found: The last y(0) iterate.
    :param newton_iters: Number of Newton steps taken.
    :param final_residual: Max norm of y(T) - y_bar at ``y0_found``.
    :param guess: The starting y(0).
    :param reason: Why Newton failed, None on success.
    """
    solution: Optional[PathPair]
    y0_found: np.ndarray
    newton_iters: int
    final_residual: float
    guess: np.ndarray
    reason: Optional[str] = None

    @property
    def converged(self) -> bool:
        return self.solution is not None


@dataclass
class InequalityCheck:
    name: str
    lhs: float
    rhs: float

    @property
    def passed(self) -> bool:
        return bool(self.lhs >= self.rhs)


@dataclass
class AdmissibilityReport:
    """
    Admissibility inequalities of a mean-field game.

    :param kappa_check: kappa against the Hessian bound.
    :param horizon_check: T^(2/3) against the threshold built from gamma_min, gamma_max.
    :param horizon_threshold: Smallest admissible horizon.
    """
    kappa_check: InequalityCheck
    horizon_check: InequalityCheck
    horizon_threshold: float

    @property
    def verdict(self) -> Verdict:
        return Verdict.of(self.kappa_check.passed and self.horizon_check.passed)


@dataclass
class IterationTrace:
    """
    Iterates of the fixed-point map.

    :param iterates: b_0, b_1, ... as paths.
    :param increments: Sup-distance between consecutive iterates.
    :param distances_to_limit: Sup-distance of every iterate to the last one.
    :param converged: An increment dropped to ``tol`` or below.
    :param empirical_ratio: Geometric mean of increment ratios over the latter half; None with fewer than three iterates.
    :param failure: The best-response failure that ended the run, if any.
    """
    iterates: List[VecPath]
    increments: List[float]
    distances_to_limit: List[float]
    converged: bool
    empirical_ratio: Optional[float]
    failure: Optional[str] = None


@dataclass
class SpectrumReport:
    """
    Linear stability of an equilibrium of the fixed-point map.

    :param label: Name of the equilibrium.
    :param convention: Sign convention of the game.
    :param analytic_lambdas: Eigenvalues from the constant-coefficient formula, None when not applicable.
    :param dominant_lambda_power: Dominant eigenvalue of the discretized linearization.
    :param power_iterations: Iterations used by the power method.
    :param power_converged: Whether the power method reached its tolerance.
    :param bound: 2 kappa / (2 kappa + gamma_min).
    :param bound_satisfied: Every computed eigenvalue lies in (0, bound).
    """
    label: str
    convention: Convention
    analytic_lambdas: Optional[List[float]]
    dominant_lambda_power: float
    power_iterations: int
    power_converged: bool
    bound: float
    bound_satisfied: bool

    @property
    def stable(self) -> bool:
        return bool(abs(self.dominant_lambda_power) < 1.0)


@dataclass
class EquilibriumSet:
    """
    Equilibria of a mean-field game.

    :param equilibria: Distinct equilibria as (state, costate) pairs, sorted by sup-norm.
    :param shooting_results: The shooting runs behind the distinct equilibria.
    :param minimal: Monotone solve on the transformed system, when available.
    :param minimal_distance: Sup-distance from the minimal solution to the nearest transformed equilibrium.
    :param admissible: Outcome of the admissibility check.
    """
    equilibria: List[PathPair]
    shooting_results: List[ShootResult]
    minimal: Optional[MinimalSolutionReport]
    minimal_distance: Optional[float]
    admissible: bool


@dataclass
class ContinuityCheck:
    time: float
    jump_x: float
    jump_q: float

    @property
    def continuous(self) -> bool:
        return bool(max(self.jump_x, self.jump_q) <= 1e-12)


@dataclass
class CandidateReport:
    """
    The explicit negative supersolution candidate of a mean-field game.

    :param pair: The candidate as (state, q = -costate).
    :param certificate: Its supersolution certificate against the transformed equilibrium system.
    :param continuity: Jumps of the two pieces at t = lambda T.
    :param variant: Which piecewise formula was used.
    :param theta: Scale parameter.
    :param lambda_param: Switching fraction of the horizon.
    :param slope: The slope vector h of the second piece.
    """
    pair: PathPair
    certificate: SupersolutionCertificate
    continuity: ContinuityCheck
    variant: CandidateVariant
    theta: float
    lambda_param: float
    slope: np.ndarray


@dataclass
class ComparisonWitness:
    node: int
    component: str
    time: float
    gap: float


@dataclass
class OscillatorDemoReport:
    """
    Closed-form oscillator solution next to one member of its supersolution family.

    :param a: x(0) of the solution.
    :param b: y(T) of the solution.
    :param a_star: x(0) of the supersolution.
    :param b_star: y(T) of the supersolution.
    :param radius: Amplitude of the supersolution x-path.
    :param min_x_horizon: Minimum of the supersolution x-path over [0, T].
    :param min_x_half_period: Minimum of the supersolution x-path over [0, pi].
    :param supersolution_certificate: Certificate of the supersolution against the (a, b) problem.
    :param witness: First node where the supersolution lies strictly below the solution.
    :param shooting_error: Max node error between shooting and the closed form, None when shooting failed.
    """
    a: float
    b: float
    a_star: float
    b_star: float
    horizon: float
    radius: float
    min_x_horizon: float
    min_x_half_period: float
    supersolution_certificate: SupersolutionCertificate
    witness: Optional[ComparisonWitness]
    shooting_error: Optional[float]
    solution: PathPair
    supersolution: PathPair
