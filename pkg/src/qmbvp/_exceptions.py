# -*- coding: utf-8 -*-
"""
This module contains the exception hierarchy raised by the solvers.
"""
from typing import Optional


class QMBVPError(Exception):
    """Base class of every error raised by qmbvp."""


class ShapeError(QMBVPError, ValueError):
    """Paths or vectors with incompatible grids or dimensions."""


class BlowUpError(QMBVPError, ArithmeticError):
    """
    An integration left the finite range.

    :param node: Index of the first node whose state was not acceptable.
    :param time: Time of that node.
    :param norm: Max-norm of the offending state (``inf`` or ``nan`` on overflow).
    :param downward: The largest component was heading to minus infinity.
    """

    def __init__(self, node: int, time: float, norm: float, problem: Optional[str] = None,
                 downward: bool = False) -> None:
        self.node = node
        self.time = time
        self.norm = norm
        self.problem = problem
        self.downward = downward
        label = f" in {problem}" if problem else ""
        direction = "downward " if downward else ""
        super().__init__(f"Blow-up{label} {direction}at node {node} (t={time:.6g}), state norm {norm:.3g}")


class UnboundedBelowError(QMBVPError, ArithmeticError):
    """The decreasing sequence of supersolutions is not bounded below."""


class InconsistencyError(QMBVPError, RuntimeError):
    """A property guaranteed by the theory failed numerically."""

    def __init__(self, message: str, node: Optional[int] = None) -> None:
        self.node = node
        super().__init__(message)


class ConvergenceError(QMBVPError, RuntimeError):
    """An iterative solve stopped without reaching its tolerance."""

    def __init__(self, message: str, residual: float = float('nan')) -> None:
        self.residual = residual
        super().__init__(message)


class CertificationError(QMBVPError, ValueError):
    """A failed certificate was used where a passing one is required."""


class PreconditionError(QMBVPError, ValueError):
    """An operation was called on data violating its precondition."""
