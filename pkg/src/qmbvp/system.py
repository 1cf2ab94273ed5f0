# -*- coding: utf-8 -*-
"""
This module contains the SystemDef class, a two-point boundary value problem

    x' = f(t, x, y),  y' = g(t, x, y),  x(0) = x_bar,  y(T) = y_bar,

with its residual, supersolution and quasi-monotonicity checks, the scalar
reductions on diagonal vectors and the bound construction certifying that a
minimal solution exists.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ._enums import Anchor, Condition, MonotonicityReading, Verdict
from ._exceptions import BlowUpError, CertificationError, ShapeError
from ._models import (
    ConditionCertificate,
    MonotonicityReport,
    ReducedFields,
    Residual,
    SupersolutionCertificate,
    Violation
)
from ._sampling import sample_box
from ._validators import (
    validate_enum_value,
    validate_positive_integer,
    validate_positive_numeric,
    validate_strictly_positive
)
from .ivp import FieldEval, solve_scalar_cauchy
from .paths import BoundaryData, Grid, PathPair, VecPath


logger = logging.getLogger(__name__)

Evaluator = Callable[[float, np.ndarray, np.ndarray], Union[Sequence[float], np.ndarray]]
BoundPair = Tuple[FieldEval, FieldEval]
Box = Union[Tuple[float, float], Sequence[Tuple[float, float]]]


@dataclass(frozen=True)
class SystemDef:
    """
    A forward-backward system with its boundary data.

    :param m: Dimension of the forward block x.
    :param n: Dimension of the backward block y.
    :param f_eval: Evaluator (t, x, y) -> m-vector.
    :param g_eval: Evaluator (t, x, y) -> n-vector.
    :param horizon: The horizon T.
    :param boundary: x(0) and y(T).
    :param name: Registry label.
    :param alpha: Default bounds (alpha1, alpha2) for condition 'i', scalar fields in (t, s).
    :param beta: Default bounds (beta1, beta2) for condition 'ii', scalar fields in (t, tau).
    :param supersolution: Optional factory of a known supersolution on a grid.
    """
    m: int
    n: int
    f_eval: Evaluator
    g_eval: Evaluator
    horizon: float
    boundary: BoundaryData
    name: str = 'system'
    alpha: Optional[BoundPair] = None
    beta: Optional[BoundPair] = None
    supersolution: Optional[Callable[[Grid], PathPair]] = None

    def __post_init__(self) -> None:
        validate_positive_integer(self.m, "M")
        validate_positive_integer(self.n, "N")
        validate_strictly_positive(self.horizon, "HORIZON")
        if self.boundary.dims != (self.m, self.n):
            raise ShapeError(f"Boundary data has dimensions {self.boundary.dims}, system {self.name} expects {(self.m, self.n)}.")
        object.__setattr__(self, 'horizon', float(self.horizon))

    def f(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.asarray(self.f_eval(t, x, y), dtype=float).reshape(self.m)

    def g(self, t: float, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.asarray(self.g_eval(t, x, y), dtype=float).reshape(self.n)

    def grid(self, intervals: int) -> Grid:
        return Grid(self.horizon, intervals)

    @property
    def x_field(self) -> FieldEval:
        """f as a field in x with y frozen."""
        return FieldEval(self.m, self.n, self.m, lambda t, x, y: self.f(t, x, y), f'{self.name}:f')

    @property
    def y_field(self) -> FieldEval:
        """g as a field in y with x frozen."""
        return FieldEval(self.n, self.m, self.n, lambda t, y, x: self.g(t, x, y), f'{self.name}:g')

    @property
    def joint_field(self) -> FieldEval:
        """(f, g) as a field in the stacked state (x, y)."""
        m = self.m

        def evaluate(t: float, z: np.ndarray, frozen: Optional[np.ndarray]) -> np.ndarray:
            x, y = z[:m], z[m:]
            return np.concatenate((self.f(t, x, y), self.g(t, x, y)))

        return FieldEval(self.m + self.n, 0, self.m + self.n, evaluate, self.name)

    def check_pair(self, pair: PathPair) -> None:
        if pair.dims != (self.m, self.n):
            raise ShapeError(f"Pair has dimensions {pair.dims}, system {self.name} expects {(self.m, self.n)}.")
        if not math.isclose(pair.grid.horizon, self.horizon, rel_tol=1e-12, abs_tol=1e-12):
            raise ShapeError(f"Pair horizon {pair.grid.horizon} differs from system horizon {self.horizon}.")

    def residual(self, pair: PathPair) -> Residual:
        """
        Computes the midpoint defects of ``pair``.

        On every interval the forward-difference slope is compared with the
        field evaluated at the interval midpoint of the interpolated pair.

        :param pair: The pair to check.
        :return: The residual record.
        :raises ShapeError: If the pair does not fit the system.
        """
        self.check_pair(pair)
        mids = pair.grid.midpoints
        x_mid = pair.x.midpoint_values()
        y_mid = pair.y.midpoint_values()
        f_mid = np.empty_like(x_mid)
        g_mid = np.empty_like(y_mid)
        for k, t in enumerate(mids):
            f_mid[k] = self.f(t, x_mid[k], y_mid[k])
            g_mid[k] = self.g(t, x_mid[k], y_mid[k])

        x_defects = pair.x.slopes() - f_mid
        y_defects = pair.y.slopes() - g_mid
        gap_x = pair.x.start - self.boundary.x_bar
        gap_y = pair.y.end - self.boundary.y_bar
        interior = float(max(np.max(np.abs(x_defects)), np.max(np.abs(y_defects))))
        boundary = float(max(np.max(np.abs(gap_x)), np.max(np.abs(gap_y))))
        return Residual(x_defects, y_defects, gap_x, gap_y, interior, boundary)

    def is_supersolution(self, pair: PathPair, tol: float = 1e-6) -> SupersolutionCertificate:
        """
        Checks x(0) >= x_bar, y(T) >= y_bar, x' >= f and y' <= g, each up to ``tol``.

        :param pair: The candidate.
        :param tol: One-sided slack, non-negative.
        :return: The certificate with the worst margins and their locations.
        """
        validate_positive_numeric(tol, "TOL")
        res = self.residual(pair)
        x_margin = res.x_defects
        y_margin = -res.y_defects
        x_loc = np.unravel_index(int(np.argmin(x_margin)), x_margin.shape)
        y_loc = np.unravel_index(int(np.argmin(y_margin)), y_margin.shape)
        worst_x = float(x_margin[x_loc])
        worst_y = float(y_margin[y_loc])
        passed = (bool(np.all(res.boundary_gap_x >= -tol)) and bool(np.all(res.boundary_gap_y >= -tol))
                  and worst_x >= -tol and worst_y >= -tol)
        return SupersolutionCertificate(
            verdict=Verdict.of(passed),
            boundary_gap_x=res.boundary_gap_x,
            boundary_gap_y=res.boundary_gap_y,
            worst_x_residual=worst_x,
            worst_x_location=(int(x_loc[0]), int(x_loc[1])),
            worst_y_residual=worst_y,
            worst_y_location=(int(y_loc[0]), int(y_loc[1])),
            tol=tol
        )

    def _box_bounds(self, box: Box) -> Tuple[np.ndarray, np.ndarray]:
        bounds = np.asarray(box, dtype=float)
        if bounds.shape == (2,):
            bounds = np.tile(bounds, (self.m + self.n, 1))
        if bounds.shape != (self.m + self.n, 2):
            raise ShapeError(f"Box must be one (low, high) pair or {self.m + self.n} of them.")
        if not np.all(np.isfinite(bounds)):
            raise ValueError("Box bounds must be finite.")
        return bounds[:, 0], bounds[:, 1]

    def check_quasi_monotone(self,
                             box: Box = (-10.0, 10.0),
                             samples: int = 1000,
                             step: float = 1e-6,
                             reading: Union[MonotonicityReading, str] = MonotonicityReading.ALL_Y,
                             slope_tol: float = 1e-9,
                             seed: Optional[int] = None) -> MonotonicityReport:
        """
        Samples the sign pattern of the finite-difference slopes of f and g.

        f_i must not decrease in x_k (k != i) and in y_j (every j, or j != i
        under the off-diagonal reading); g_j must not increase in x_i (every i)
        and in y_k (k != j).

        :param box: Box for (x, y); t ranges over [0, T].
        :param samples: Number of Halton points.
        :param step: Finite-difference increment.
        :param reading: Which y-indices f_i is required to be monotone in.
        :param slope_tol: Slopes within this of zero are accepted.
        :param seed: Optional seed selecting a scrambled sequence.
        :return: The report listing every violation found.
        """
        validate_positive_integer(samples, "SAMPLES")
        validate_strictly_positive(step, "STEP")
        validate_enum_value(reading, MonotonicityReading, "READING")
        reading = MonotonicityReading(reading)
        low, high = self._box_bounds(box)
        points = sample_box(np.concatenate(([0.0], low)), np.concatenate(([self.horizon], high)), samples, seed)

        m, n = self.m, self.n
        violations: List[Violation] = []
        for point in points:
            t, x, y = float(point[0]), point[1:1 + m], point[1 + m:]
            f0, g0 = self.f(t, x, y), self.g(t, x, y)
            for k in range(m + n):
                bumped = point[1:].copy()
                bumped[k] += step
                xb, yb = bumped[:m], bumped[m:]
                df = (self.f(t, xb, yb) - f0) / step
                dg = (self.g(t, xb, yb) - g0) / step
                perturbed = f'x{k + 1}' if k < m else f'y{k - m + 1}'
                for i in range(m):
                    if k < m and i == k:
                        continue
                    if k >= m and reading is MonotonicityReading.OFF_DIAGONAL and i == k - m:
                        continue
                    if df[i] < -slope_tol:
                        violations.append(Violation('M1', i + 1, perturbed, point.tolist(), float(df[i])))
                for j in range(n):
                    if k >= m and j == k - m:
                        continue
                    if dg[j] > slope_tol:
                        violations.append(Violation('M2', j + 1, perturbed, point.tolist(), float(dg[j])))

        logger.debug(f"{self.name}: {len(violations)} monotonicity violations in {samples} samples")
        return MonotonicityReport(Verdict.of(not violations), violations, reading, samples, step)

    def reduce_extremes(self) -> ReducedFields:
        """
        Returns f_min, f_max, g_min, g_max on the diagonal vectors x = s(1..1), y = tau(1..1).
        """
        ones_m, ones_n = np.ones(self.m), np.ones(self.n)

        def f_at(t: float, s: float, tau: float) -> np.ndarray:
            return self.f(t, s * ones_m, tau * ones_n)

        def g_at(t: float, s: float, tau: float) -> np.ndarray:
            return self.g(t, s * ones_m, tau * ones_n)

        return ReducedFields(
            f_min=lambda t, s, tau: float(np.min(f_at(t, s, tau))),
            f_max=lambda t, s, tau: float(np.max(f_at(t, s, tau))),
            g_min=lambda t, s, tau: float(np.min(g_at(t, s, tau))),
            g_max=lambda t, s, tau: float(np.max(g_at(t, s, tau)))
        )

    def _envelope_excess(self,
                         which: Condition,
                         bounds: BoundPair,
                         box: Tuple[float, float],
                         samples: int,
                         seed: Optional[int]) -> float:
        lower, upper = bounds
        low, high = float(box[0]), float(box[1])
        points = sample_box([0.0, low, low], [self.horizon, high, high], samples, seed)
        ones_m, ones_n = np.ones(self.m), np.ones(self.n)
        excess = -math.inf
        for t, s, tau in points:
            if which is Condition.CONDITION_I:
                values = self.f(t, s * ones_m, tau * ones_n)
                arg = s
            else:
                values = self.g(t, s * ones_m, tau * ones_n)
                arg = tau
            lo = float(lower(t, np.array([arg]))[0])
            hi = float(upper(t, np.array([arg]))[0])
            excess = max(excess, lo - float(np.min(values)), float(np.max(values)) - hi)
        return excess

    def certify_condition(self,
                          which: Union[Condition, str],
                          bounds: Optional[BoundPair] = None,
                          intervals: int = 1000,
                          box: Tuple[float, float] = (-10.0, 10.0),
                          samples: int = 10_000,
                          seed: Optional[int] = None,
                          slope_tol: float = 1e-9) -> ConditionCertificate:
        """
        Builds the bound paths of an existence condition and checks its envelope.

        Condition 'i' bounds f between alpha1(t, s) and alpha2(t, s) and solves

            gamma1' = alpha1(t, gamma1),              gamma1(0) = min x_bar,
            gamma2' = alpha2(t, gamma2),              gamma2(0) = max x_bar,
            eta1'   = g_max(t, min gamma1, eta1),     eta1(T)   = min y_bar,
            eta2'   = g_min(t, max gamma2, eta2),     eta2(T)   = max y_bar.

        Condition 'ii' bounds g between beta1(t, tau) and beta2(t, tau) and
        mirrors the construction: gamma1, gamma2 solve tau' = beta2, beta1
        backward from min y_bar, max y_bar, and eta1, eta2 solve
        s' = f_min(t, s, min gamma1), f_max(t, s, max gamma2) forward from
        min x_bar, max x_bar.

        The verdict passes iff all four solves stay finite and the sampled
        envelope inequality holds.

        :param which: 'i' or 'ii'.
        :param bounds: The bounding pair; defaults to the system's own.
        :param intervals: Grid size of the scalar solves.
        :param box: Range of s and tau in the envelope samples.
        :param samples: Number of envelope samples.
        :param seed: Optional seed selecting a scrambled sequence.
        :param slope_tol: Accepted envelope excess.
        :return: The certificate.
        :raises CertificationError: If no bounds are given and the system has none.
        """
        validate_enum_value(which, Condition, "WHICH")
        which = Condition(which)
        if bounds is None:
            bounds = self.alpha if which is Condition.CONDITION_I else self.beta
        if bounds is None:
            raise CertificationError(f"System {self.name} has no default bounds for condition {which.value}.")
        grid = self.grid(intervals)
        reduced = self.reduce_extremes()
        lower, upper = bounds

        envelope_excess = self._envelope_excess(which, bounds, box, samples, seed)
        envelope_ok = envelope_excess <= slope_tol
        failures: List[str] = []
        instances: List[str] = []
        if not envelope_ok:
            failures.append(f"envelope inequality violated by {envelope_excess:.3g}")

        def solve(label: str, field: FieldEval, value: float, anchor: Anchor) -> Optional[VecPath]:
            instances.append(f"{label}: {field.name} from {value!r} at t={'0' if anchor is Anchor.START else 'T'}")
            try:
                return solve_scalar_cauchy(field, value, anchor, grid)
            except BlowUpError as err:
                failures.append(f"{label}: {err}")
                return None

        x_bar, y_bar = self.boundary.x_bar, self.boundary.y_bar
        if which is Condition.CONDITION_I:
            first_lo, first_hi, first_anchor = float(x_bar.min()), float(x_bar.max()), Anchor.START
            second_lo, second_hi, second_anchor = float(y_bar.min()), float(y_bar.max()), Anchor.END
            gamma1 = solve('gamma1', lower, first_lo, first_anchor)
            gamma2 = solve('gamma2', upper, first_hi, first_anchor)
        else:
            first_lo, first_hi, first_anchor = float(y_bar.min()), float(y_bar.max()), Anchor.END
            second_lo, second_hi, second_anchor = float(x_bar.min()), float(x_bar.max()), Anchor.START
            gamma1 = solve('gamma1', upper, first_lo, first_anchor)
            gamma2 = solve('gamma2', lower, first_hi, first_anchor)

        eta1 = eta2 = None
        if gamma1 is not None and gamma2 is not None:
            gamma_min = float(gamma1.values.min())
            gamma_max = float(gamma2.values.max())
            if which is Condition.CONDITION_I:
                field1 = FieldEval.scalar(lambda t, tau: reduced.g_max(t, gamma_min, tau), 'g_max(t, gamma_min, .)')
                field2 = FieldEval.scalar(lambda t, tau: reduced.g_min(t, gamma_max, tau), 'g_min(t, gamma_max, .)')
            else:
                field1 = FieldEval.scalar(lambda t, s: reduced.f_min(t, s, gamma_min), 'f_min(t, ., gamma_min)')
                field2 = FieldEval.scalar(lambda t, s: reduced.f_max(t, s, gamma_max), 'f_max(t, ., gamma_max)')
            eta1 = solve('eta1', field1, second_lo, second_anchor)
            eta2 = solve('eta2', field2, second_hi, second_anchor)

        if gamma1 is not None and eta1 is not None:
            m_star = min(float(gamma1.values.min()), float(eta1.values.min()))
        else:
            m_star = math.nan

        verdict = Verdict.of(not failures)
        logger.info(f"{self.name}: condition {which.value} {verdict.value}, m_star={m_star:.6g}")
        return ConditionCertificate(
            which=which,
            bound_fields=(lower.name, upper.name),
            gamma1_path=gamma1,
            gamma2_path=gamma2,
            eta1_path=eta1,
            eta2_path=eta2,
            m_star=m_star,
            verdict=verdict,
            envelope_ok=envelope_ok,
            envelope_excess=envelope_excess,
            failures=failures,
            instances_checked=instances
        )


def reduce_pair(pair: PathPair) -> PathPair:
    """
    Nodewise minimum over the components of each block.

    :return: A pair of scalar paths on the same grid.
    """
    return PathPair(
        VecPath(pair.grid, pair.x.values.min(axis=1)),
        VecPath(pair.grid, pair.y.values.min(axis=1))
    )


def reduced_system(system: SystemDef) -> SystemDef:
    """
    The scalar system x' = f_min(t, x, y), y' = g_max(t, x, y) with boundary
    (min x_bar, min y_bar), which the output of :func:`reduce_pair` satisfies
    as a supersolution whenever the input did.
    """
    reduced = system.reduce_extremes()
    return SystemDef(
        m=1,
        n=1,
        f_eval=lambda t, x, y: [reduced.f_min(t, float(x[0]), float(y[0]))],
        g_eval=lambda t, x, y: [reduced.g_max(t, float(x[0]), float(y[0]))],
        horizon=system.horizon,
        boundary=BoundaryData(system.boundary.x_bar.min(), system.boundary.y_bar.min()),
        name=f'{system.name}:reduced'
    )
