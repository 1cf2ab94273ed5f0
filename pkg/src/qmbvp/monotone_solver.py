# -*- coding: utf-8 -*-
"""
This module contains the monotone solver: starting from a supersolution,
every sweep relaxes one block against the other one frozen, producing a
smaller supersolution, and the decreasing sequence converges to the
minimal solution.
"""
import logging
from typing import Optional, Union

import numpy as np

from ._enums import Condition, SweepOrder
from ._exceptions import BlowUpError, CertificationError, InconsistencyError, UnboundedBelowError
from ._models import ConditionCertificate, MinimalSolutionReport, SolveOptions
from ._validators import validate_enum_value
from .ivp import integrate_backward, integrate_forward
from .paths import PathPair, VecPath
from .system import SystemDef


logger = logging.getLogger(__name__)

LOWER_BOUND_SLACK = 1e-6


def initial_supersolution(system: SystemDef, cert: ConditionCertificate) -> PathPair:
    """
    The supersolution built from the bound paths of a passing certificate.

    Condition 'i' puts gamma2 in every x-component and eta2 in every
    y-component; condition 'ii' puts eta2 in x and gamma2 in y.

    :raises CertificationError: If the certificate did not pass.
    """
    if not cert.passed:
        raise CertificationError(f"Condition {cert.which.value} failed on {system.name}: {'; '.join(cert.failures)}")
    if cert.which is Condition.CONDITION_I:
        x_block, y_block = cert.gamma2_path, cert.eta2_path
    else:
        x_block, y_block = cert.eta2_path, cert.gamma2_path
    grid = x_block.grid
    return PathPair(
        VecPath(grid, np.tile(x_block.values, (1, system.m))),
        VecPath(grid, np.tile(y_block.values, (1, system.n)))
    )


def sweep(system: SystemDef, pair: PathPair, order: Union[SweepOrder, str] = SweepOrder.X_THEN_Y) -> PathPair:
    """
    One relaxation step.

    x-then-y solves x' = f(t, x, y) from x_bar with y frozen, then
    y' = g(t, x', y) backward from y_bar with the new x frozen. y-then-x does
    the two solves in the opposite order.

    :param system: The system.
    :param pair: A supersolution; this is not re-checked.
    :param order: Which block is relaxed first.
    :return: The relaxed pair.
    :raises BlowUpError: If either solve leaves the finite range.
    """
    validate_enum_value(order, SweepOrder, "ORDER")
    system.check_pair(pair)
    grid = pair.grid
    x_bar, y_bar = system.boundary.x_bar, system.boundary.y_bar
    if SweepOrder(order) is SweepOrder.X_THEN_Y:
        x_new = integrate_forward(system.x_field, x_bar, grid, frozen=pair.y)
        y_new = integrate_backward(system.y_field, y_bar, grid, frozen=x_new)
    else:
        y_new = integrate_backward(system.y_field, y_bar, grid, frozen=pair.x)
        x_new = integrate_forward(system.x_field, x_bar, grid, frozen=y_new)
    return PathPair(x_new, y_new)


def _order_excess(new: VecPath, old: VecPath, slack: float) -> np.ndarray:
    return new.values - old.values - slack * (1.0 + np.abs(old.values))


def solve_minimal(system: SystemDef,
                  opts: Optional[SolveOptions] = None,
                  cert: Optional[ConditionCertificate] = None,
                  initial: Optional[PathPair] = None) -> MinimalSolutionReport:
    """
    Sweeps from a supersolution until the residual reaches ``opts.tol``.

    The start is ``initial`` when given, else the supersolution built from
    ``cert``. A passing certificate also supplies the lower bound m_star that
    every iterate must respect. The loop stops on success, after
    ``opts.max_sweeps`` sweeps, or when consecutive iterates are closer than
    ``opts.stall_tol`` with the residual still above target.

    :param system: The system.
    :param opts: Solver options.
    :param cert: A condition certificate.
    :param initial: An explicit starting supersolution.
    :return: The solve report.
    :raises UnboundedBelowError: If an iterate drops below the divergence guard or a sweep blows up downward.
    :raises BlowUpError: If a sweep blows up upward.
    :raises InconsistencyError: In strict mode, if a sweep increases an iterate or crosses m_star.
    """
    opts = opts or SolveOptions()
    if initial is None:
        if cert is None:
            raise ValueError("solve_minimal needs a certificate or an initial supersolution.")
        initial = initial_supersolution(system, cert)
    system.check_pair(initial)
    m_star = cert.m_star if cert is not None and cert.passed else None

    current = initial
    residual_history, distance_history = [], []
    monotone_ok = lower_bound_ok = True
    converged = stalled = False
    sweeps_used = 0

    while sweeps_used < opts.max_sweeps:
        try:
            new = sweep(system, current, opts.order)
        except BlowUpError as err:
            if not err.downward:
                raise
            raise UnboundedBelowError(f"{system.name}: sweep {sweeps_used + 1} diverged: {err}") from err
        sweeps_used += 1

        low = float(min(new.x.values.min(), new.y.values.min()))
        if low < -opts.divergence_guard:
            raise UnboundedBelowError(f"{system.name}: iterate {sweeps_used} reached {low:.3g}, below -{opts.divergence_guard:g}")

        for label, new_path, old_path in (('x', new.x, current.x), ('y', new.y, current.y)):
            excess = _order_excess(new_path, old_path, opts.monotone_slack)
            if np.max(excess) > 0:
                node = int(np.unravel_index(int(np.argmax(excess)), excess.shape)[0])
                message = f"{system.name}: sweep {sweeps_used} increased {label} at node {node} by {np.max(excess):.3g}"
                if opts.strict:
                    raise InconsistencyError(message, node)
                monotone_ok = False
                logger.warning(message)

        if m_star is not None and low < m_star - LOWER_BOUND_SLACK:
            node = int(np.argmin(np.minimum(new.x.values.min(axis=1), new.y.values.min(axis=1))))
            message = f"{system.name}: iterate {sweeps_used} dropped to {low:.6g}, below m_star {m_star:.6g} at node {node}"
            if opts.strict:
                raise InconsistencyError(message, node)
            lower_bound_ok = False
            logger.warning(message)

        residual = system.residual(new).total
        distance = new.distance(current)
        residual_history.append(residual)
        distance_history.append(distance)
        logger.debug(f"{system.name}: sweep {sweeps_used}, residual {residual:.3e}, step {distance:.3e}")
        current = new

        if residual <= opts.tol:
            converged = True
            break
        if distance < opts.stall_tol:
            stalled = True
            break

    logger.info(f"{system.name}: monotone solve {'converged' if converged else 'stopped'} after {sweeps_used} sweeps, "
                f"residual {residual_history[-1]:.3e}")
    return MinimalSolutionReport(
        solution=current,
        sweeps_used=sweeps_used,
        residual_history=residual_history,
        distance_history=distance_history,
        monotone_ok=monotone_ok,
        lower_bound_ok=lower_bound_ok,
        converged=converged,
        stalled=stalled,
        initial_supersolution=initial,
        m_star=m_star
    )
