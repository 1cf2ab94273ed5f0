# -*- coding: utf-8 -*-
"""
This module contains time grids, discretized vector paths and their
componentwise partial order.

Paths are piecewise linear between the nodes of a uniform grid. Every object
here is immutable once built; the value arrays are flagged read-only.
"""
import csv
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from ._exceptions import ShapeError
from ._validators import (
    validate_finite_vector,
    validate_positive_integer,
    validate_positive_numeric,
    validate_strictly_positive
)


@dataclass(frozen=True)
class Grid:
    """
    Uniform time grid t_k = kT/N on [0, T].

    :param horizon: The horizon T.
    :param intervals: The number of intervals N (at least 2).
    """
    horizon: float
    intervals: int

    def __post_init__(self) -> None:
        validate_strictly_positive(self.horizon, "HORIZON")
        validate_positive_integer(self.intervals, "INTERVALS", minimum=2)
        object.__setattr__(self, 'horizon', float(self.horizon))
        object.__setattr__(self, 'intervals', int(self.intervals))

    @cached_property
    def nodes(self) -> np.ndarray:
        nodes = np.linspace(0.0, self.horizon, self.intervals + 1)
        nodes.flags.writeable = False
        return nodes

    @cached_property
    def midpoints(self) -> np.ndarray:
        midpoints = 0.5 * (self.nodes[:-1] + self.nodes[1:])
        midpoints.flags.writeable = False
        return midpoints

    @property
    def step(self) -> float:
        return self.horizon / self.intervals

    def __len__(self) -> int:
        return self.intervals + 1


@dataclass(frozen=True, eq=False)
class VecPath:
    """
    A d-dimensional path sampled at the nodes of a grid.

    :param grid: The time grid.
    :param values: Array of shape (N+1, d), or (N+1,) for a scalar path.
    """
    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=float)
        if values.ndim == 1:
            values = values[:, np.newaxis]
        if values.ndim != 2 or values.shape[0] != len(self.grid):
            raise ShapeError(f"Path values must have shape ({len(self.grid)}, d), got {np.shape(self.values)}.")
        if values.shape[1] < 1:
            raise ShapeError("Path dimension must be at least 1.")
        if not np.all(np.isfinite(values)):
            raise ValueError("Path values must be finite.")
        values.flags.writeable = False
        object.__setattr__(self, 'values', values)

    @classmethod
    def constant(cls, grid: Grid, value: Union[float, Sequence[float]], dim: Optional[int] = None) -> 'VecPath':
        vector = validate_finite_vector(value, "VALUE")
        if dim is not None and vector.shape[0] == 1:
            vector = np.repeat(vector, dim)
        return cls(grid, np.tile(vector, (len(grid), 1)))

    @classmethod
    def from_function(cls, grid: Grid, func: Callable[[float], Union[float, Sequence[float]]]) -> 'VecPath':
        return cls(grid, np.array([np.atleast_1d(func(t)) for t in grid.nodes], dtype=float))

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    @property
    def start(self) -> np.ndarray:
        return self.values[0]

    @property
    def end(self) -> np.ndarray:
        return self.values[-1]

    def at(self, t: float) -> np.ndarray:
        """
        Evaluates the piecewise-linear interpolant at time ``t``.

        :param t: A time in [0, T]; values outside are clamped to the end nodes.
        :return: The d-vector of interpolated values.
        """
        n = self.grid.intervals
        r = min(max(t / self.grid.step, 0.0), float(n))
        k = min(int(r), n - 1)
        w = r - k
        return (1.0 - w) * self.values[k] + w * self.values[k + 1]

    def midpoint_values(self) -> np.ndarray:
        """Values of the interpolant at the interval midpoints, shape (N, d)."""
        return 0.5 * (self.values[:-1] + self.values[1:])

    def slopes(self) -> np.ndarray:
        """Forward-difference slopes on each interval, shape (N, d)."""
        return np.diff(self.values, axis=0) / self.grid.step

    def component(self, i: int) -> 'VecPath':
        return VecPath(self.grid, self.values[:, i])

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def shifted(self, offset: Union[float, np.ndarray]) -> 'VecPath':
        return VecPath(self.grid, self.values + offset)

    def scaled(self, factor: float) -> 'VecPath':
        return VecPath(self.grid, factor * self.values)


@dataclass(frozen=True, eq=False)
class PathPair:
    """
    The pair (x, y) of an x-path in R^m and a y-path in R^n on a shared grid.
    """
    x: VecPath
    y: VecPath

    def __post_init__(self) -> None:
        if self.x.grid != self.y.grid:
            raise ShapeError("The x and y paths of a pair must share their grid.")

    @property
    def grid(self) -> Grid:
        return self.x.grid

    @property
    def dims(self) -> Tuple[int, int]:
        return self.x.dim, self.y.dim

    def sup_norm(self) -> float:
        return max(self.x.sup_norm(), self.y.sup_norm())

    def distance(self, other: 'PathPair') -> float:
        """Sup-distance over both blocks."""
        return max(sup_distance(self.x, other.x), sup_distance(self.y, other.y))

    def at_node(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        return self.x.values[k], self.y.values[k]


@dataclass(frozen=True, eq=False)
class BoundaryData:
    """
    Boundary data of a TPBVP: x(0) = x_bar, y(T) = y_bar.
    """
    x_bar: np.ndarray
    y_bar: np.ndarray

    def __post_init__(self) -> None:
        x_bar = validate_finite_vector(self.x_bar, "X_BAR")
        y_bar = validate_finite_vector(self.y_bar, "Y_BAR")
        x_bar.flags.writeable = False
        y_bar.flags.writeable = False
        object.__setattr__(self, 'x_bar', x_bar)
        object.__setattr__(self, 'y_bar', y_bar)

    @property
    def dims(self) -> Tuple[int, int]:
        return self.x_bar.shape[0], self.y_bar.shape[0]


def _check_compatible(u: VecPath, v: VecPath) -> None:
    if u.grid != v.grid:
        raise ShapeError(f"Paths live on different grids: {u.grid} vs {v.grid}.")
    if u.dim != v.dim:
        raise ShapeError(f"Paths have different dimensions: {u.dim} vs {v.dim}.")


def leq_path(u: VecPath, v: VecPath, slack: float = 0.0) -> bool:
    """
    Componentwise order u ⪯ v at every node, up to ``slack``.

    :param u: The path expected to be smaller.
    :param v: The path expected to be larger.
    :param slack: Non-negative tolerance added to ``v``.
    :return: True iff u_i(t_k) <= v_i(t_k) + slack for every i and k.
    """
    validate_positive_numeric(slack, "SLACK")
    _check_compatible(u, v)
    return bool(np.all(u.values <= v.values + slack))


def worst_order_violation(u: VecPath, v: VecPath) -> Tuple[float, int, int]:
    """
    Largest excess of ``u`` over ``v``.

    :return: (max of u - v, node, component); the excess is <= 0 when u ⪯ v.
    """
    _check_compatible(u, v)
    excess = u.values - v.values
    node, component = np.unravel_index(int(np.argmax(excess)), excess.shape)
    return float(excess[node, component]), int(node), int(component)


def pointwise_min(a: PathPair, b: PathPair) -> PathPair:
    """
    Nodewise, componentwise minimum of two pairs on the same grid.
    """
    _check_compatible(a.x, b.x)
    _check_compatible(a.y, b.y)
    return PathPair(
        VecPath(a.grid, np.minimum(a.x.values, b.x.values)),
        VecPath(a.grid, np.minimum(a.y.values, b.y.values))
    )


def sup_distance(u: VecPath, v: VecPath) -> float:
    """
    Max over nodes and components of |u - v|.
    """
    _check_compatible(u, v)
    return float(np.max(np.abs(u.values - v.values)))


def pair_header(m: int, n: int) -> List[str]:
    return ['t'] + [f'x{i + 1}' for i in range(m)] + [f'y{j + 1}' for j in range(n)]


def write_pair_csv(pair: PathPair, file_path: str) -> None:
    """
    Writes a pair as CSV with header ``t,x1,...,xm,y1,...,yn``.

    Floats are written with ``repr`` so reading them back is exact.
    """
    m, n = pair.dims
    with open(file_path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(pair_header(m, n))
        for k, t in enumerate(pair.grid.nodes):
            row = [t, *pair.x.values[k], *pair.y.values[k]]
            writer.writerow([repr(float(value)) for value in row])


def read_pair_csv(file_path: str) -> PathPair:
    """
    Reads a pair written by :func:`write_pair_csv`.
    """
    with open(file_path, newline='') as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = np.array([[float(value) for value in row] for row in reader])
    m = sum(1 for name in header if name.startswith('x'))
    n = sum(1 for name in header if name.startswith('y'))
    if header != pair_header(m, n):
        raise ShapeError(f"Unexpected CSV header: {','.join(header)}")
    times = rows[:, 0]
    grid = Grid(times[-1], len(times) - 1)
    if not np.allclose(times, grid.nodes, rtol=0.0, atol=1e-12 * max(1.0, grid.horizon)):
        raise ShapeError("CSV times do not form a uniform grid starting at 0.")
    return PathPair(VecPath(grid, rows[:, 1:1 + m]), VecPath(grid, rows[:, 1 + m:]))


def write_path_csv(path: VecPath, file_path: str, prefix: str = 'v') -> None:
    """Writes a single path with header ``t,<prefix>1,...``."""
    with open(file_path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['t'] + [f'{prefix}{i + 1}' for i in range(path.dim)])
        for k, t in enumerate(path.grid.nodes):
            writer.writerow([repr(float(value)) for value in (t, *path.values[k])])
