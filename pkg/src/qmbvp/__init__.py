from ._enums import Anchor, CandidateVariant, Condition, Convention, MonotonicityReading, SweepOrder, Verdict
from ._exceptions import (
    BlowUpError,
    CertificationError,
    ConvergenceError,
    InconsistencyError,
    PreconditionError,
    QMBVPError,
    ShapeError,
    UnboundedBelowError
)
from ._models import SolveOptions
from ._registry import SYSTEMS, build_system
from .ivp import FieldEval, integrate_backward, integrate_forward, solve_scalar_cauchy
from .mfg import MeanFieldGame
from .monotone_solver import initial_supersolution, solve_minimal, sweep
from .paths import BoundaryData, Grid, PathPair, VecPath, leq_path, pointwise_min, sup_distance
from .shooting import multi_start, shoot
from .system import SystemDef, reduce_pair, reduced_system
