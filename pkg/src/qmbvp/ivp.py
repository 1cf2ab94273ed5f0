# -*- coding: utf-8 -*-
"""
This module contains the fixed-step RK4 integrators used by every solver.

A field is evaluated as ``field(t, state, frozen)`` where ``frozen`` is the
value at time ``t`` of an optional frozen path. RK4 stage times of a uniform
grid are nodes and interval midpoints, so the linear interpolant of the frozen
path is read off exactly there.
"""
import logging
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from ._enums import Anchor
from ._exceptions import BlowUpError, ShapeError
from ._validators import validate_enum_value, validate_finite_vector, validate_strictly_positive
from .paths import Grid, VecPath


logger = logging.getLogger(__name__)

DEFAULT_BLOWUP_THRESHOLD = 1e12

Evaluator = Callable[[float, np.ndarray, Optional[np.ndarray]], np.ndarray]


@dataclass(frozen=True)
class FieldEval:
    """
    A vector field with an optional frozen argument.

    :param dim_state: Dimension of the integrated state.
    :param dim_frozen: Dimension of the frozen path value (0 if none).
    :param dim_out: Dimension of the returned vector.
    :param func: Evaluator ``(t, state, frozen) -> vector``.
    :param name: Label used in log lines and blow-up messages.
    """
    dim_state: int
    dim_frozen: int
    dim_out: int
    func: Evaluator
    name: str = 'field'

    def __call__(self, t: float, state: np.ndarray, frozen: Optional[np.ndarray] = None) -> np.ndarray:
        return np.asarray(self.func(t, state, frozen), dtype=float).reshape(self.dim_out)

    @classmethod
    def scalar(cls, func: Callable[[float, float], float], name: str = 'scalar') -> 'FieldEval':
        """
        Wraps a scalar right-hand side ``func(t, s)`` of a Cauchy problem.
        """
        return cls(1, 0, 1, lambda t, state, frozen: func(t, float(state[0])), name)


def _heading_down(state: np.ndarray, previous: np.ndarray) -> bool:
    """Sign of the largest component, read off the last finite state."""
    last = state if np.all(np.isfinite(state)) else previous
    return bool(last[int(np.argmax(np.abs(last)))] < 0.0)


def _integrate(field: FieldEval,
               start: np.ndarray,
               grid: Grid,
               frozen: Optional[VecPath],
               blowup_threshold: float,
               reverse: bool) -> VecPath:
    if field.dim_out != field.dim_state:
        raise ShapeError(f"Field {field.name} maps dimension {field.dim_state} to {field.dim_out}.")
    state = validate_finite_vector(start, "INITIAL_VALUE", dim=field.dim_state)
    validate_strictly_positive(blowup_threshold, "BLOWUP_THRESHOLD")

    if frozen is not None:
        if frozen.grid != grid:
            raise ShapeError("Frozen path must live on the integration grid.")
        if frozen.dim != field.dim_frozen:
            raise ShapeError(f"Frozen path has dimension {frozen.dim}, field {field.name} expects {field.dim_frozen}.")
        frozen_nodes = frozen.values
        frozen_mids = frozen.midpoint_values()
    else:
        frozen_nodes = frozen_mids = None

    nodes = grid.nodes
    mids = grid.midpoints
    n = grid.intervals
    h = grid.step
    values = np.empty((n + 1, field.dim_state))

    if reverse:
        values[n] = state
        steps = ((k, k - 1, -h) for k in range(n, 0, -1))
    else:
        values[0] = state
        steps = ((k, k + 1, h) for k in range(n))

    with np.errstate(over='ignore', invalid='ignore'):
        for k, k_next, dt in steps:
            mid = min(k, k_next)
            z_here = frozen_nodes[k] if frozen_nodes is not None else None
            z_mid = frozen_mids[mid] if frozen_mids is not None else None
            z_next = frozen_nodes[k_next] if frozen_nodes is not None else None

            k1 = field(nodes[k], state, z_here)
            k2 = field(mids[mid], state + 0.5 * dt * k1, z_mid)
            k3 = field(mids[mid], state + 0.5 * dt * k2, z_mid)
            k4 = field(nodes[k_next], state + dt * k3, z_next)
            state = state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

            norm = float(np.max(np.abs(state)))
            if not np.isfinite(norm) or norm > blowup_threshold:
                downward = _heading_down(state, values[k])
                logger.debug(f"{field.name}: blow-up at node {k_next} (t={nodes[k_next]:.6g}), "
                             f"norm {norm:.3g}, {'downward' if downward else 'upward'}")
                raise BlowUpError(k_next, float(nodes[k_next]), norm, field.name, downward=downward)
            values[k_next] = state

    return VecPath(grid, values)


def integrate_forward(field: FieldEval,
                      x0: Union[float, np.ndarray],
                      grid: Grid,
                      frozen: Optional[VecPath] = None,
                      blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD) -> VecPath:
    """
    Solves x' = field(t, x, frozen(t)), x(0) = x0 with classical RK4.

    :param field: The right-hand side.
    :param x0: Initial value; node 0 of the output equals it exactly.
    :param grid: The integration grid.
    :param frozen: Optional path evaluated along the way.
    :param blowup_threshold: Max-norm above which the solve is abandoned.
    :return: The solution path.
    :raises BlowUpError: On overflow or when the threshold is exceeded.
    """
    return _integrate(field, x0, grid, frozen, blowup_threshold, reverse=False)


def integrate_backward(field: FieldEval,
                       yT: Union[float, np.ndarray],
                       grid: Grid,
                       frozen: Optional[VecPath] = None,
                       blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD) -> VecPath:
    """
    Solves y' = field(t, y, frozen(t)), y(T) = yT, integrating from T down to 0.

    Node N of the output equals ``yT`` exactly.
    """
    return _integrate(field, yT, grid, frozen, blowup_threshold, reverse=True)


def solve_scalar_cauchy(field: FieldEval,
                        value: float,
                        anchored_at: Union[Anchor, str],
                        grid: Grid,
                        blowup_threshold: float = DEFAULT_BLOWUP_THRESHOLD) -> VecPath:
    """
    Solves a scalar Cauchy problem anchored at t = 0 or t = T.

    A :class:`BlowUpError` means the solution does not exist on the whole
    horizon, at least numerically.
    """
    validate_enum_value(anchored_at, Anchor, "ANCHORED_AT")
    if field.dim_state != 1:
        raise ShapeError(f"Field {field.name} is not scalar.")
    if Anchor(anchored_at) is Anchor.START:
        return integrate_forward(field, value, grid, blowup_threshold=blowup_threshold)
    return integrate_backward(field, value, grid, blowup_threshold=blowup_threshold)
