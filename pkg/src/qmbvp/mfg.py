# -*- coding: utf-8 -*-
"""
This module contains the MeanFieldGame class.

A representative player steers x' = u from x(0) = 0 and pays
|u|^2 / 2 + V(x) + kappa |x - b|^2 along the way, b being the barycenter
path of the population. The best response to b solves a state-costate
boundary value problem; its x-path is Phi(b). Equilibria are fixed points of
Phi, i.e. solutions of the kappa-free equilibrium system.

The sign of the costate equation is a configuration, see :class:`Convention`:

    A: x'' =  DV(x) + 2 kappa (x - b)
    B: x'' = -DV(x) - 2 kappa (x - b)
"""
import logging
import math
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import splu

from ._enums import CandidateVariant, Condition, Convention, Verdict
from ._exceptions import ConvergenceError, PreconditionError, ShapeError
from ._models import (
    AdmissibilityReport,
    CandidateReport,
    ContinuityCheck,
    EquilibriumSet,
    InequalityCheck,
    IterationTrace,
    SolveOptions,
    SpectrumReport
)
from ._potentials import PotentialSpec
from ._registry import mfg_equilibrium, resolve_potential
from ._validators import (
    validate_enum_value,
    validate_open_unit_interval,
    validate_positive_integer,
    validate_strictly_positive
)
from .monotone_solver import initial_supersolution, solve_minimal
from .paths import BoundaryData, Grid, PathPair, VecPath, pointwise_min, sup_distance
from .shooting import multi_start, shoot
from .system import SystemDef


logger = logging.getLogger(__name__)

BarycenterPath = VecPath


def to_transformed(pair: PathPair) -> PathPair:
    """(x, p) -> (x, q) with q = -p."""
    return PathPair(pair.x, pair.y.scaled(-1.0))


class MeanFieldGame(object):
    """
    A mean-field game with a representative player.

    :param potential: A potential name ('sqrt', 'zero', 'coupled_sqrt') or a PotentialSpec.
    :param kappa: Weight of the attraction to the barycenter.
    :param horizon: The horizon T.
    :param intervals: Number of grid intervals N.
    :param convention: Sign convention, 'A' or 'B'.
    :param dim: State dimension; defaults to the potential's own.
    :param shoot_tol: Terminal tolerance of every shooting solve.
    :param tol: Residual tolerance for equilibria, at least the residual floor of the grid.
    """

    def __init__(self,
                 potential: Union[str, PotentialSpec] = 'sqrt',
                 kappa: float = 1.0,
                 horizon: float = 8.0,
                 intervals: int = 1000,
                 convention: Union[Convention, str] = Convention.B.value,
                 dim: Optional[int] = None,
                 shoot_tol: float = 1e-9,
                 tol: float = 1e-4) -> None:

        self._validate_inputs(kappa, horizon, intervals, convention, shoot_tol, tol)

        self.potential: PotentialSpec = resolve_potential(potential, dim)
        self.kappa: float = float(kappa)
        self.horizon: float = float(horizon)
        self.intervals: int = int(intervals)
        self.convention: Convention = Convention(convention)
        self.shoot_tol: float = shoot_tol
        self.tol: float = tol
        self.grid: Grid = Grid(self.horizon, self.intervals)

    @staticmethod
    def _validate_inputs(kappa: float,
                         horizon: float,
                         intervals: int,
                         convention: Union[Convention, str],
                         shoot_tol: float,
                         tol: float) -> None:
        validate_strictly_positive(kappa, "KAPPA")
        validate_strictly_positive(horizon, "HORIZON")
        validate_positive_integer(intervals, "INTERVALS", minimum=2)
        validate_enum_value(convention, Convention, "CONVENTION")
        validate_strictly_positive(shoot_tol, "SHOOT_TOL")
        validate_strictly_positive(tol, "TOL")

    @property
    def dim(self) -> int:
        return self.potential.dim

    @property
    def sign(self) -> float:
        return 1.0 if self.convention is Convention.A else -1.0

    def __repr__(self) -> str:
        return (f"MeanFieldGame(potential={self.potential.name!r}, kappa={self.kappa}, horizon={self.horizon}, "
                f"intervals={self.intervals}, convention={self.convention.value!r})")

    def equilibrium_system(self, transformed: bool = True) -> SystemDef:
        return mfg_equilibrium(self.potential, convention=self.convention, transformed=transformed, horizon=self.horizon)

    def zero_equilibrium(self) -> PathPair:
        zeros = VecPath.constant(self.grid, 0.0, self.dim)
        return PathPair(zeros, zeros)

    def pontryagin_system(self, b: BarycenterPath) -> SystemDef:
        """
        State-costate system of the best response to ``b``:
        x' = -p, p' = -s (DV(x) + 2 kappa (x - b(t))), s = +1 under A and -1 under B.
        """
        self._check_barycenter(b)
        gradient, kappa, sign = self.potential.gradient, self.kappa, self.sign
        return SystemDef(
            m=self.dim,
            n=self.dim,
            f_eval=lambda t, x, p: -p,
            g_eval=lambda t, x, p: -sign * (gradient(x) + 2.0 * kappa * (x - b.at(t))),
            horizon=self.horizon,
            boundary=BoundaryData(np.zeros(self.dim), np.zeros(self.dim)),
            name=f'pontryagin[{self.convention.value}]'
        )

    def _check_barycenter(self, b: BarycenterPath) -> None:
        if b.grid != self.grid:
            raise ShapeError(f"Barycenter lives on {b.grid}, the game on {self.grid}.")
        if b.dim != self.dim:
            raise ShapeError(f"Barycenter has dimension {b.dim}, the game {self.dim}.")

    def admissibility(self) -> AdmissibilityReport:
        """
        Checks kappa >= |D2V| and
        T^(2/3) >= max{gamma_max^2 / (8 gamma_min), (1/gamma_min + sqrt(1 + 1/gamma_min^2))^(3/2)}.
        """
        gamma_min, gamma_max = self.potential.gamma_min, self.potential.gamma_max
        if gamma_min > 0:
            threshold = max(gamma_max ** 2 / (8.0 * gamma_min),
                            (1.0 / gamma_min + math.sqrt(1.0 + 1.0 / gamma_min ** 2)) ** 1.5)
        else:
            threshold = math.inf
        report = AdmissibilityReport(
            kappa_check=InequalityCheck('kappa >= |D2V|', self.kappa, self.potential.hess_inf_norm),
            horizon_check=InequalityCheck('T^(2/3) >= threshold', self.horizon ** (2.0 / 3.0), threshold),
            horizon_threshold=threshold ** 1.5
        )
        logger.debug(f"{self!r}: admissibility {report.verdict.value}, horizon threshold {report.horizon_threshold:.4f}")
        return report

    def _best_response(self, b: BarycenterPath, costate_guess: Optional[np.ndarray] = None):
        guess = np.zeros(self.dim) if costate_guess is None else costate_guess
        result = shoot(self.pontryagin_system(b), guess, intervals=self.intervals, shoot_tol=self.shoot_tol)
        if not result.converged:
            raise ConvergenceError(f"Best response did not converge, terminal residual {result.final_residual:.3e}.",
                                   residual=result.final_residual)
        return result

    def phi(self, b: BarycenterPath, costate_guess: Optional[np.ndarray] = None) -> BarycenterPath:
        """
        The fixed-point map: x-path of the best response to the barycenter ``b``.

        :param b: Barycenter path on the game grid.
        :param costate_guess: Initial costate guess for shooting.
        :return: Phi(b).
        :raises ConvergenceError: If shooting fails.
        """
        return self._best_response(b, costate_guess).solution.x

    def fixed_point_iterate(self, b0: BarycenterPath, max_iters: int = 100, tol: float = 1e-6) -> IterationTrace:
        """
        Iterates b <- Phi(b) until consecutive iterates are within ``tol``.

        Each shooting solve starts from the costate found in the previous one.
        The empirical ratio is the geometric mean of the increment ratios over
        the latter half of the run. When Phi fails the iterates computed so
        far are returned unconverged, with the failing iterate named in
        ``failure``.
        """
        validate_positive_integer(max_iters, "MAX_ITERS")
        validate_strictly_positive(tol, "TOL")
        self._check_barycenter(b0)
        iterates: List[VecPath] = [b0]
        increments: List[float] = []
        converged = False
        failure = None
        guess = None
        for k in range(max_iters):
            try:
                result = self._best_response(iterates[-1], guess)
            except ConvergenceError as err:
                failure = f"Iterate {k + 1}: {err}"
                logger.warning(f"Fixed-point iteration abandoned. {failure}")
                break
            guess = result.y0_found
            nxt = result.solution.x
            increments.append(sup_distance(nxt, iterates[-1]))
            iterates.append(nxt)
            logger.debug(f"Fixed-point iterate {k + 1}: increment {increments[-1]:.3e}")
            if increments[-1] <= tol:
                converged = True
                break

        limit = iterates[-1]
        ratios = [later / earlier for earlier, later in zip(increments, increments[1:]) if earlier > 0 and later > 0]
        empirical_ratio = None
        if len(iterates) >= 3 and ratios:
            latter = np.array(ratios[len(ratios) // 2:])
            empirical_ratio = float(np.exp(np.mean(np.log(latter))))
        logger.info(f"Fixed-point iteration {'converged' if converged else 'stopped'} after {len(increments)} steps")
        return IterationTrace(
            iterates=iterates,
            increments=increments,
            distances_to_limit=[sup_distance(b, limit) for b in iterates],
            converged=converged,
            empirical_ratio=empirical_ratio,
            failure=failure
        )

    def equilibria(self, guesses: Optional[Sequence[Union[float, np.ndarray]]] = None,
                   max_workers: Optional[int] = None) -> EquilibriumSet:
        """
        Finds equilibria by multi-start shooting on the equilibrium system.

        Under convention B the transformed system (x, q = -p) is quasi-monotone,
        and the monotone solver is run from the pointwise minimum of the
        certified supersolution and the explicit candidate, which gives the
        minimal solution independently of shooting. Only when neither passes
        its certificate do the shooting equilibria seed the solve.

        :param guesses: Costate guesses p(0); defaults to 41 values in [-10, 10].
        :param max_workers: Thread pool size for the shooting starts.
        """
        admissible = self.admissibility().verdict is Verdict.PASS
        if not admissible:
            logger.warning(f"{self!r} fails the admissibility inequalities")
        if guesses is None:
            guesses = [value * np.ones(self.dim) for value in np.linspace(-10.0, 10.0, 41)]
        results = multi_start(self.equilibrium_system(transformed=False), guesses, intervals=self.intervals,
                              shoot_tol=self.shoot_tol, max_workers=max_workers)
        equilibria = [result.solution for result in results]

        minimal = minimal_distance = None
        if self.convention is Convention.B:
            transformed = self.equilibrium_system(transformed=True)
            cert = transformed.certify_condition(Condition.CONDITION_II, intervals=self.intervals)
            starts = []
            if cert.passed:
                starts.append(initial_supersolution(transformed, cert))
            candidate = self.candidate_supersolution()
            if candidate.certificate.passed:
                starts.append(candidate.pair)
            if not starts:
                logger.warning(f"{self!r}: no certified supersolution, starting from the shooting equilibria")
                starts = [to_transformed(pair) for pair in equilibria]
            if starts:
                start = starts[0]
                for pair in starts[1:]:
                    start = pointwise_min(start, pair)
                opts = SolveOptions(tol=self.tol, intervals=self.intervals, strict=False)
                minimal = solve_minimal(transformed, opts, cert=cert if cert.passed else None, initial=start)
                if equilibria:
                    minimal_distance = min(minimal.solution.distance(to_transformed(pair)) for pair in equilibria)

        logger.info(f"{self!r}: {len(equilibria)} equilibria")
        return EquilibriumSet(equilibria, results, minimal, minimal_distance, admissible)

    def candidate_supersolution(self,
                                theta: float = 0.05,
                                lambda_param: Optional[float] = None,
                                variant: Union[CandidateVariant, str] = CandidateVariant.SIGN_ADJUSTED) -> CandidateReport:
        """
        Builds the explicit piecewise candidate in the variables (x, q = -p).

        With s = lambda T, e = D2V(0)(1, ..., 1) and
        h = 2 lambda e / (1 - lambda) - 2 (1 + sqrt(theta)) / ((1 - lambda)^2 T^2):

            t <= s:  x = -theta t e,  q = -theta e       (sign-adjusted)
                     x =  theta t e,  q =  theta e       (as printed)
            t >  s:  x = -theta s e + theta h (t - s),  q(s+) = -theta e,  q' = -DV(x),

        where q on the second piece is integrated on the grid by the midpoint
        rule. The as-printed variant jumps in both x and q at t = s.

        :param theta: Scale, positive.
        :param lambda_param: Switching fraction in (0, 1); defaults to 1 - T^(-4/3).
        :param variant: Which first piece to use.
        :return: The candidate with its certificate against the transformed equilibrium system.
        """
        validate_strictly_positive(theta, "THETA")
        if lambda_param is None:
            lambda_param = 1.0 - self.horizon ** (-4.0 / 3.0)
        validate_open_unit_interval(lambda_param, "LAMBDA_PARAM")
        validate_enum_value(variant, CandidateVariant, "VARIANT")
        variant = CandidateVariant(variant)

        horizon, d = self.horizon, self.dim
        e = self.potential.e_vector
        slope = 2.0 * lambda_param * e / (1.0 - lambda_param) \
            - 2.0 * (1.0 + math.sqrt(theta)) / ((1.0 - lambda_param) ** 2 * horizon ** 2) * np.ones(d)
        switch = lambda_param * horizon
        first_sign = -1.0 if variant is CandidateVariant.SIGN_ADJUSTED else 1.0

        def second_piece(t: float) -> np.ndarray:
            return -theta * switch * e + theta * slope * (t - switch)

        nodes = self.grid.nodes
        eps = 1e-12 * horizon
        q_first = first_sign * theta * e
        q_switch = -theta * e
        x = np.empty((len(nodes), d))
        q = np.empty((len(nodes), d))
        for k, t in enumerate(nodes):
            x[k] = first_sign * theta * t * e if t <= switch + eps else second_piece(t)
        q[0] = q_first
        for k in range(len(nodes) - 1):
            t0, t1 = nodes[k], nodes[k + 1]
            if t1 <= switch + eps:
                q[k + 1] = q_first
                continue
            lo = max(t0, switch)
            base = q_switch if t0 <= switch + eps else q[k]
            q[k + 1] = base - (t1 - lo) * self.potential.gradient(second_piece(0.5 * (lo + t1)))

        pair = PathPair(VecPath(self.grid, x), VecPath(self.grid, q))
        continuity = ContinuityCheck(
            time=switch,
            jump_x=float(np.max(np.abs(first_sign * theta * switch * e - second_piece(switch)))),
            jump_q=float(np.max(np.abs(q_first - q_switch)))
        )
        certificate = self.equilibrium_system(transformed=True).is_supersolution(pair, tol=1e-8)
        logger.info(f"Candidate {variant.value} theta={theta:g}: supersolution {certificate.verdict.value}, "
                    f"jump {continuity.jump_x:.3g}")
        return CandidateReport(pair, certificate, continuity, variant, theta, lambda_param, slope)

    def _linearization(self, x_star: VecPath):
        """
        LU factors of the discretized linearized best response around x_star.

        Unknowns are dx at nodes 1..N; dx(0) = 0 and the costate condition
        dx'(T) = 0 is imposed with a ghost node.
        """
        n, d, h = self.intervals, self.dim, self.grid.step
        sign, kappa = self.sign, self.kappa
        rows, cols, vals = [], [], []
        identity = np.eye(d)
        for k in range(1, n + 1):
            r = (k - 1) * d
            block = -2.0 / h ** 2 * identity - sign * (2.0 * kappa * identity
                                                       + np.asarray(self.potential.hessian(x_star.values[k]),
                                                                    dtype=float).reshape(d, d))
            for i in range(d):
                for j in range(d):
                    if block[i, j] != 0.0:
                        rows.append(r + i)
                        cols.append(r + j)
                        vals.append(block[i, j])
                if k > 1:
                    rows.append(r + i)
                    cols.append(r - d + i)
                    vals.append((2.0 if k == n else 1.0) / h ** 2)
                if k < n:
                    rows.append(r + i)
                    cols.append(r + d + i)
                    vals.append(1.0 / h ** 2)
        matrix = sparse.csc_matrix((vals, (rows, cols)), shape=(n * d, n * d))
        return splu(matrix)

    def _power_iteration(self, x_star: VecPath, tol: float, max_iters: int) -> Tuple[float, int, bool]:
        lu = self._linearization(x_star)
        scale = -self.sign * 2.0 * self.kappa
        v = np.ones(self.intervals * self.dim)
        v /= np.linalg.norm(v)
        previous = math.nan
        value = 0.0
        for iteration in range(1, max_iters + 1):
            w = lu.solve(scale * v)
            value = float(v @ w)
            norm = float(np.linalg.norm(w))
            if norm == 0.0:
                return 0.0, iteration, True
            v = w / norm
            if abs(value - previous) <= tol * max(1.0, abs(value)):
                logger.debug(f"Power iteration converged to {value:.8f} after {iteration} iterations")
                return value, iteration, True
            previous = value
        logger.warning(f"Power iteration stopped at {value:.8f} after {max_iters} iterations")
        return value, max_iters, False

    def spectrum(self,
                 equilibrium: PathPair,
                 modes: int = 10,
                 label: Optional[str] = None,
                 power_tol: float = 1e-8,
                 max_power_iters: int = 10_000) -> SpectrumReport:
        """
        Eigenvalues of the linearized fixed-point map at an equilibrium.

        At the zero equilibrium with diagonal D2V(0) the linearization has
        constant coefficients; with mu_q = ((2q - 1) pi / (2T))^2 its
        eigenvalues are lambda = 2 kappa / (2 kappa - gamma_q), where
        gamma_q = -mu_q - V_ii(0) under A and mu_q - V_ii(0) under B.
        In every case the dominant eigenvalue of the discretized map is found
        by power iteration with a Rayleigh quotient.

        :param equilibrium: An equilibrium as (state, costate) on the game grid.
        :param modes: Number of analytic modes per component.
        :param label: Name used in the report.
        :raises PreconditionError: If the pair does not solve the equilibrium system within ``tol``.
        """
        validate_positive_integer(modes, "MODES")
        validate_strictly_positive(power_tol, "POWER_TOL")
        validate_positive_integer(max_power_iters, "MAX_POWER_ITERS")
        if equilibrium.grid != self.grid:
            raise ShapeError(f"Equilibrium lives on {equilibrium.grid}, the game on {self.grid}.")
        residual = self.equilibrium_system(transformed=False).residual(equilibrium).total
        if residual > self.tol:
            raise PreconditionError(f"Pair is not an equilibrium: residual {residual:.3e} exceeds {self.tol:g}.")

        x_star = equilibrium.x
        is_zero = x_star.sup_norm() <= 1e-10
        if label is None:
            label = 'zero' if is_zero else f'equilibrium(sup={x_star.sup_norm():.4g})'

        analytic = None
        if is_zero and self.potential.diagonal_at_origin:
            two_kappa = 2.0 * self.kappa
            analytic = []
            for v_ii in np.diag(self.potential.hessian_at_origin):
                for q in range(1, modes + 1):
                    mu = ((2 * q - 1) * math.pi / (2.0 * self.horizon)) ** 2
                    gamma = -mu - v_ii if self.convention is Convention.A else mu - v_ii
                    analytic.append(two_kappa / (two_kappa - gamma))
        else:
            logger.warning(f"Analytic spectrum skipped for {label}: coefficients are not constant")

        dominant, iterations, converged = self._power_iteration(x_star, power_tol, max_power_iters)
        bound = 2.0 * self.kappa / (2.0 * self.kappa + self.potential.gamma_min)
        values = (analytic or []) + [dominant]
        return SpectrumReport(
            label=label,
            convention=self.convention,
            analytic_lambdas=analytic,
            dominant_lambda_power=dominant,
            power_iterations=iterations,
            power_converged=converged,
            bound=bound,
            bound_satisfied=all(0.0 < value < bound for value in values)
        )
