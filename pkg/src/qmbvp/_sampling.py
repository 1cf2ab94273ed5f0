# -*- coding: utf-8 -*-
"""
Deterministic low-discrepancy sample points for the sampled checks.
"""
from typing import Optional, Sequence

import numpy as np
from scipy.stats import qmc

from ._validators import validate_positive_integer


def sample_box(lower: Sequence[float], upper: Sequence[float], samples: int, seed: Optional[int] = None) -> np.ndarray:
    """
    Draws Halton points in the box [lower, upper].

    Without a seed the sequence is unscrambled, so the points depend on the
    box and the count only. A seed selects a scrambled sequence.

    :return: Array of shape (samples, len(lower)).
    """
    validate_positive_integer(samples, "SAMPLES")
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    if lower.shape != upper.shape or np.any(upper < lower):
        raise ValueError("Box bounds must have equal length and satisfy lower <= upper.")
    sampler = qmc.Halton(d=lower.shape[0], scramble=seed is not None, seed=seed)
    unit = sampler.random(samples)
    return lower + unit * (upper - lower)
