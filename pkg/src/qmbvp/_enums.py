# -*- coding: utf-8 -*-
"""
This module contains Enum classes shared by the solver modules.
"""
from enum import Enum

class Verdict(Enum):
    PASS = 'pass'
    FAIL = 'fail'

    @classmethod
    def of(cls, passed: bool) -> 'Verdict':
        return cls.PASS if passed else cls.FAIL

class Anchor(Enum):
    START = 'start'
    END = 'end'

class Condition(Enum):
    CONDITION_I = 'i'
    CONDITION_II = 'ii'

class MonotonicityReading(Enum):
    ALL_Y = 'all-y'
    OFF_DIAGONAL = 'off-diagonal'

class SweepOrder(Enum):
    X_THEN_Y = 'x-then-y'
    Y_THEN_X = 'y-then-x'

class Convention(Enum):
    A = 'A'
    B = 'B'

class CandidateVariant(Enum):
    AS_PRINTED = 'as-printed'
    SIGN_ADJUSTED = 'sign-adjusted'
