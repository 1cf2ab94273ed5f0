# -*- coding: utf-8 -*-
"""
This module contains the interaction potentials V of the mean-field game.
"""
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from ._sampling import sample_box
from ._validators import validate_positive_integer, validate_positive_numeric


@dataclass(frozen=True)
class PotentialSpec:
    """
    A potential with its derivatives.

    :param name: Registry label.
    :param dim: State dimension d.
    :param value: V(x).
    :param gradient: DV(x), a d-vector.
    :param hessian: D2V(x), a d x d matrix.
    :param hess_inf_norm: Supplied bound of the max row sum of |D2V|.
    :param grad_inf_norm: Supplied bound of max |DV_i|.
    """
    name: str
    dim: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    hessian: Callable[[np.ndarray], np.ndarray]
    hess_inf_norm: float
    grad_inf_norm: float

    def __post_init__(self) -> None:
        validate_positive_integer(self.dim, "DIM")
        validate_positive_numeric(self.hess_inf_norm, "HESS_INF_NORM")
        validate_positive_numeric(self.grad_inf_norm, "GRAD_INF_NORM")

    @property
    def hessian_at_origin(self) -> np.ndarray:
        return np.asarray(self.hessian(np.zeros(self.dim)), dtype=float).reshape(self.dim, self.dim)

    @property
    def gamma_min(self) -> float:
        return float(self.hessian_at_origin.sum(axis=1).min())

    @property
    def gamma_max(self) -> float:
        return float(self.hessian_at_origin.sum(axis=1).max())

    @property
    def e_vector(self) -> np.ndarray:
        """D2V(0) applied to (1, ..., 1)."""
        return self.hessian_at_origin @ np.ones(self.dim)

    @property
    def diagonal_at_origin(self) -> bool:
        hess = self.hessian_at_origin
        return bool(np.all(hess == np.diag(np.diag(hess))))

    def validate(self, samples: int = 1000, radius: float = 10.0, seed: Optional[int] = None) -> None:
        """
        Spot-checks DV(0) = 0, nonnegative Hessian entries and the supplied bounds.

        :raises ValueError: On the first failed check.
        """
        grad0 = np.asarray(self.gradient(np.zeros(self.dim)), dtype=float)
        if np.max(np.abs(grad0)) > 1e-12:
            raise ValueError(f"Potential {self.name} has DV(0) = {grad0.tolist()}, expected 0.")
        points = sample_box(-radius * np.ones(self.dim), radius * np.ones(self.dim), samples, seed)
        for x in points:
            hess = np.asarray(self.hessian(x), dtype=float).reshape(self.dim, self.dim)
            if np.min(hess) < -1e-12:
                raise ValueError(f"Potential {self.name} has a negative Hessian entry at {x.tolist()}.")
            if np.max(np.abs(hess).sum(axis=1)) > self.hess_inf_norm + 1e-12:
                raise ValueError(f"Potential {self.name} exceeds its Hessian bound at {x.tolist()}.")
            if np.max(np.abs(self.gradient(x))) > self.grad_inf_norm + 1e-12:
                raise ValueError(f"Potential {self.name} exceeds its gradient bound at {x.tolist()}.")


def sqrt_potential(dim: int = 1) -> PotentialSpec:
    """V(x) = sum sqrt(1 + x_i^2) - 1, a softening potential."""
    validate_positive_integer(dim, "DIM")
    return PotentialSpec(
        name='sqrt',
        dim=dim,
        value=lambda x: float(np.sum(np.sqrt(1.0 + x ** 2) - 1.0)),
        gradient=lambda x: x / np.sqrt(1.0 + x ** 2),
        hessian=lambda x: np.diag((1.0 + x ** 2) ** -1.5),
        hess_inf_norm=1.0,
        grad_inf_norm=1.0
    )


def zero_potential(dim: int = 1) -> PotentialSpec:
    validate_positive_integer(dim, "DIM")
    return PotentialSpec(
        name='zero',
        dim=dim,
        value=lambda x: 0.0,
        gradient=lambda x: np.zeros(dim),
        hessian=lambda x: np.zeros((dim, dim)),
        hess_inf_norm=0.0,
        grad_inf_norm=0.0
    )


def coupled_sqrt_potential(dim: int = 2) -> PotentialSpec:
    """
    The separable sqrt potential plus sqrt(1 + (x_1 + x_2)^2) - 1, whose
    Hessian is not diagonal. Only defined for d = 2.
    """
    if dim != 2:
        raise ValueError("Potential coupled_sqrt is only defined for DIM = 2.")

    def gradient(x: np.ndarray) -> np.ndarray:
        u = x[0] + x[1]
        return x / np.sqrt(1.0 + x ** 2) + u / np.sqrt(1.0 + u ** 2)

    def hessian(x: np.ndarray) -> np.ndarray:
        u = x[0] + x[1]
        return np.diag((1.0 + x ** 2) ** -1.5) + (1.0 + u ** 2) ** -1.5 * np.ones((2, 2))

    return PotentialSpec(
        name='coupled_sqrt',
        dim=2,
        value=lambda x: float(np.sum(np.sqrt(1.0 + x ** 2) - 1.0) + np.sqrt(1.0 + (x[0] + x[1]) ** 2) - 1.0),
        gradient=gradient,
        hessian=hessian,
        hess_inf_norm=3.0,
        grad_inf_norm=2.0
    )


POTENTIALS: Dict[str, Callable[[int], PotentialSpec]] = {
    'sqrt': sqrt_potential,
    'zero': zero_potential,
    'coupled_sqrt': coupled_sqrt_potential,
}
