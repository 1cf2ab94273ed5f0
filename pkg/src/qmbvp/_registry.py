# -*- coding: utf-8 -*-
"""
This module contains the built-in systems selectable by name.

Every factory takes keyword arguments only and returns a SystemDef carrying
its default bounds for the existence conditions.
"""
import inspect
from typing import Any, Callable, Dict, Optional, Union

import numpy as np

from ._enums import Convention
from ._exceptions import ShapeError
from ._potentials import POTENTIALS, PotentialSpec
from ._validators import validate_boolean, validate_enum_value, validate_finite_vector, validate_positive_integer
from .ivp import FieldEval
from .oscillator import oscillator_system
from .paths import BoundaryData
from .system import SystemDef

Vector = Union[float, np.ndarray]
HamiltonianDerivative = Callable[[np.ndarray, np.ndarray], np.ndarray]


def _constant(value: float, name: str) -> FieldEval:
    return FieldEval.scalar(lambda t, s: value, name)


def _broadcast(value: Vector, name: str, dim: Optional[int]) -> np.ndarray:
    vector = validate_finite_vector(value, name)
    if dim is None:
        return vector
    validate_positive_integer(dim, "DIM")
    if vector.shape[0] == 1:
        return np.repeat(vector, dim)
    if vector.shape[0] != dim:
        raise ShapeError(f"Variable {name} has {vector.shape[0]} entries, DIM is {dim}.")
    return vector


def bounded_coupled(x_bar: Vector = 0.5, y_bar: Vector = 1.0, dim: Optional[int] = None, horizon: float = 1.0) -> SystemDef:
    """
    f_i = tanh(y_i) - x_i, g_j = -tanh(x_j) - y_j.

    Bounds: alpha = (-1 - s, 1 - s), beta = (-1 - tau, 1 - tau).
    """
    if dim is None:
        dim = max(np.size(x_bar), np.size(y_bar))
    x_bar = _broadcast(x_bar, "X_BAR", dim)
    y_bar = _broadcast(y_bar, "Y_BAR", dim)
    return SystemDef(
        m=x_bar.shape[0],
        n=y_bar.shape[0],
        f_eval=lambda t, x, y: np.tanh(y) - x,
        g_eval=lambda t, x, y: -np.tanh(x) - y,
        horizon=horizon,
        boundary=BoundaryData(x_bar, y_bar),
        name='bounded_coupled',
        alpha=(FieldEval.scalar(lambda t, s: -1.0 - s, 'alpha1=-1-s'), FieldEval.scalar(lambda t, s: 1.0 - s, 'alpha2=1-s')),
        beta=(FieldEval.scalar(lambda t, tau: -1.0 - tau, 'beta1=-1-tau'),
              FieldEval.scalar(lambda t, tau: 1.0 - tau, 'beta2=1-tau'))
    )


def hamiltonian(dim: int = 1,
                x_bar: Vector = 0.5,
                y_bar: Vector = 1.0,
                horizon: float = 1.0,
                dh_dx: Optional[HamiltonianDerivative] = None,
                dh_dp: Optional[HamiltonianDerivative] = None) -> SystemDef:
    """
    x' = D_p H(x, p), p' = -D_x H(x, p).

    The default H = sum sqrt(1 + p_i^2) + sqrt(1 + x_i^2) has bounded
    derivatives, so both conditions hold with constant bounds -1 and 1.
    Caller supplied derivatives come without default bounds.
    """
    validate_positive_integer(dim, "DIM")
    custom = dh_dx is not None or dh_dp is not None
    if dh_dx is None:
        dh_dx = lambda x, p: x / np.sqrt(1.0 + x ** 2)
    if dh_dp is None:
        dh_dp = lambda x, p: p / np.sqrt(1.0 + p ** 2)
    unit = (_constant(-1.0, 'bound=-1'), _constant(1.0, 'bound=1'))
    return SystemDef(
        m=dim,
        n=dim,
        f_eval=lambda t, x, p: dh_dp(x, p),
        g_eval=lambda t, x, p: -np.asarray(dh_dx(x, p)),
        horizon=horizon,
        boundary=BoundaryData(_broadcast(x_bar, "X_BAR", dim), _broadcast(y_bar, "Y_BAR", dim)),
        name='hamiltonian',
        alpha=None if custom else unit,
        beta=None if custom else unit
    )


def zero(m: int = 1, n: int = 1, x_bar: Vector = 0.0, y_bar: Vector = 0.0, horizon: float = 1.0) -> SystemDef:
    """x' = 0, y' = 0."""
    validate_positive_integer(m, "M")
    validate_positive_integer(n, "N")
    zeros = (_constant(0.0, 'zero'), _constant(0.0, 'zero'))
    return SystemDef(
        m=m,
        n=n,
        f_eval=lambda t, x, y: np.zeros(m),
        g_eval=lambda t, x, y: np.zeros(n),
        horizon=horizon,
        boundary=BoundaryData(_broadcast(x_bar, "X_BAR", m), _broadcast(y_bar, "Y_BAR", n)),
        name='zero',
        alpha=zeros,
        beta=zeros
    )


def resolve_potential(potential: Union[str, PotentialSpec], dim: Optional[int] = None) -> PotentialSpec:
    if isinstance(potential, PotentialSpec):
        if dim is not None and dim != potential.dim:
            raise ShapeError(f"Potential {potential.name} has dimension {potential.dim}, DIM is {dim}.")
        return potential
    if potential not in POTENTIALS:
        raise ValueError(f"Attribute POTENTIAL must be set to one of the following: {', '.join(POTENTIALS)}.")
    factory = POTENTIALS[potential]
    return factory() if dim is None else factory(dim)


def mfg_equilibrium(potential: Union[str, PotentialSpec] = 'sqrt',
                    dim: Optional[int] = None,
                    convention: Union[Convention, str] = Convention.B,
                    transformed: bool = True,
                    horizon: float = 8.0) -> SystemDef:
    """
    Equilibrium system of the mean-field game, x(0) = 0 and costate(T) = 0.

    Raw variables (x, p): x' = -p, p' = -DV(x) (convention A) or DV(x) (B).
    Transformed variables (x, q = -p): x' = q, q' = DV(x) (A) or -DV(x) (B).
    The g-block is bounded by the gradient bound, which gives the default
    bounds for condition 'ii'.
    """
    validate_enum_value(convention, Convention, "CONVENTION")
    validate_boolean(transformed, "TRANSFORMED")
    spec = resolve_potential(potential, dim)
    sign = 1.0 if Convention(convention) is Convention.A else -1.0
    d = spec.dim
    if transformed:
        f_eval = lambda t, x, q: q
        g_eval = lambda t, x, q: sign * spec.gradient(x)
    else:
        f_eval = lambda t, x, p: -p
        g_eval = lambda t, x, p: -sign * spec.gradient(x)
    bound = spec.grad_inf_norm
    return SystemDef(
        m=d,
        n=d,
        f_eval=f_eval,
        g_eval=g_eval,
        horizon=horizon,
        boundary=BoundaryData(np.zeros(d), np.zeros(d)),
        name=f"mfg_equilibrium[{spec.name},{Convention(convention).value},{'q' if transformed else 'p'}]",
        beta=(_constant(-bound, f'beta1=-{bound:g}'), _constant(bound, f'beta2={bound:g}'))
    )


SYSTEMS: Dict[str, Callable[..., SystemDef]] = {
    'oscillator': oscillator_system,
    'bounded_coupled': bounded_coupled,
    'hamiltonian': hamiltonian,
    'zero': zero,
    'mfg_equilibrium': mfg_equilibrium,
}


def build_system(name: str, **params: Any) -> SystemDef:
    """
    Builds a registry system, passing on the parameters its factory accepts.

    Parameters set to None are left at the factory default.
    """
    if name not in SYSTEMS:
        raise ValueError(f"Attribute SYSTEM must be set to one of the following: {', '.join(SYSTEMS)}.")
    factory = SYSTEMS[name]
    accepted = inspect.signature(factory).parameters
    kwargs = {key: value for key, value in params.items() if key in accepted and value is not None}
    return factory(**kwargs)
