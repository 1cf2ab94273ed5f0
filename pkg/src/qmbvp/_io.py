# -*- coding: utf-8 -*-
"""
This module contains the JSON and CSV writers of solver reports.
"""
import csv
import dataclasses
import json
import math
import os
from enum import Enum
from typing import Any

import numpy as np

from ._models import IterationTrace
from .paths import Grid, PathPair, VecPath


class ReportEncoder(json.JSONEncoder):
    def default(self, obj: Any) -> Any:
        if isinstance(obj, Enum):
            return obj.value
        if isinstance(obj, np.ndarray):
            return obj.tolist()
        if isinstance(obj, np.generic):
            return obj.item()
        return super().default(obj)


def _skipped(value: Any) -> bool:
    return isinstance(value, (VecPath, PathPair, Grid)) or callable(value) and not isinstance(value, Enum)


def _clean_float(value: float) -> Any:
    if math.isfinite(value):
        return value
    return str(value)


def to_jsonable(obj: Any) -> Any:
    """
    Converts a report into JSON-ready values.

    Paths, grids and callables are dropped; properties such as ``passed`` or
    ``total`` are not exported.
    """
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name))
                for f in dataclasses.fields(obj) if not _skipped(getattr(obj, f.name))}
    if isinstance(obj, dict):
        return {str(key): to_jsonable(value) for key, value in obj.items() if not _skipped(value)}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(value) for value in obj if not _skipped(value)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(value) for value in obj.tolist()]
    if isinstance(obj, np.generic):
        obj = obj.item()
    if isinstance(obj, float):
        return _clean_float(obj)
    return obj


def write_json_report(report: Any, file_path: str) -> None:
    directory = os.path.dirname(file_path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(file_path, 'w') as f:
        json.dump(to_jsonable(report), f, indent=2, cls=ReportEncoder)
        f.write('\n')


def write_trace_csv(trace: IterationTrace, file_path: str) -> None:
    """One row per iterate: index, increment from the previous iterate and distance to the last."""
    with open(file_path, 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['iterate', 'increment', 'distance_to_limit'])
        for k, distance in enumerate(trace.distances_to_limit):
            increment = trace.increments[k - 1] if k > 0 else ''
            writer.writerow([k, repr(increment) if k > 0 else increment, repr(distance)])
