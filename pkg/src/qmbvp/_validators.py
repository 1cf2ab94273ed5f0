# -*- coding: utf-8 -*-
"""
This module contains validator functions for solver inputs.
"""
import math
from enum import Enum
from numbers import Real
from typing import Any, Optional, Type

import numpy as np


def validate_positive_numeric(value: Any, name: str) -> None:
    """
    Validate that a value is a non-negative finite number.

    :param value: The value to validate.
    :param name: The name of the variable being validated.
    """
    if isinstance(value, bool) or not isinstance(value, Real):
        raise TypeError(f"Variable {name} can only be of type integer or float, both non-negative.")
    if not math.isfinite(value) or value < 0:
        raise ValueError(f"Variable {name} can only be non-negative and finite.")

def validate_strictly_positive(value: Any, name: str) -> None:
    """
    Validate that a value is a finite number greater than zero.

    :param value: The value to validate.
    :param name: The name of the variable being validated.
    """
    validate_positive_numeric(value, name)
    if value == 0:
        raise ValueError(f"Variable {name} must be greater than 0.")

def validate_positive_integer(value: Any, name: str, minimum: int = 1) -> None:
    """
    Validate that a value is an integer not below ``minimum``.

    :param value: The value to validate.
    :param name: The name of the variable being validated.
    :param minimum: The smallest accepted value.
    """
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"Variable {name} can only be of type integer.")
    if value < minimum:
        raise ValueError(f"Variable {name} can only be integers greater or equal to {minimum}.")

def validate_open_unit_interval(value: Any, name: str) -> None:
    """
    Validate that a value lies strictly between 0 and 1.

    :param value: The value to validate.
    :param name: The name of the variable being validated.
    """
    validate_positive_numeric(value, name)
    if not 0 < value < 1:
        raise ValueError(f"Variable {name} must lie strictly between 0 and 1.")

def validate_boolean(value: Any, name: str) -> None:
    """
    Validate that a value is a boolean.

    :param value: The value to validate.
    :param name: The name of the variable being validated.
    """
    if not isinstance(value, bool):
        raise TypeError(f"Variable {name} can only be of type boolean (either True or False)")

def validate_finite_vector(value: Any, name: str, dim: Optional[int] = None) -> np.ndarray:
    """
    Validate that a value converts to a finite 1-d float vector and return it.

    :param value: A scalar or a sequence of numbers.
    :param name: The name of the variable being validated.
    :param dim: The required length, if any.
    :return: The value as a float ``ndarray``.
    """
    try:
        vector = np.atleast_1d(np.asarray(value, dtype=float))
    except (TypeError, ValueError):
        raise TypeError(f"Variable {name} must be a number or a sequence of numbers.")
    if vector.ndim != 1:
        raise ValueError(f"Variable {name} must be one-dimensional.")
    if dim is not None and vector.shape[0] != dim:
        raise ValueError(f"Variable {name} must have {dim} entries, got {vector.shape[0]}.")
    if not np.all(np.isfinite(vector)):
        raise ValueError(f"Variable {name} must have finite entries.")
    return vector

def validate_enum_value(value: Any, enum_cls: Type[Enum], name: str) -> None:
    """
    Validate that a value is a member or a member value of ``enum_cls``.

    :param value: The value to validate.
    :param enum_cls: The Enum class listing the accepted values.
    :param name: The name of the variable being validated.
    """
    if isinstance(value, enum_cls):
        return
    if not isinstance(value, str):
        raise TypeError(f"Attribute {name} must be of type string")
    try:
        enum_cls(value)
    except ValueError:
        valid_values = [item.value for item in enum_cls]
        raise ValueError(f"Attribute {name} must be set to one of the following: {', '.join(valid_values)}.")
