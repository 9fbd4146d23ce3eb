"""
momentkit: Hausdorff moment sequences, their generating functions
F(z) = int_0^1 dmu(t) / (1 - t z), polylogarithms, and numerical scans of
the inequalities these functions satisfy on the slit plane C minus [1, inf).
"""

from .errors import (
    DegeneratePoint,
    EvaluationError,
    HypothesisGateFailure,
    InsufficientPrecision,
    MomentkitError,
    QuadratureError,
    SlitViolation,
)
from .measures import DensitySpec, Measure, read_measure, write_measure
from .moments import (
    CMReport,
    MomentSequence,
    forward_difference,
    is_completely_monotone,
    moments_of,
    read_sequence,
    write_sequence,
)
from .polylog import g_alpha, li
from .proofcore import ProofPoint, counterexample_value, extreme_range_scan, two_atom_function
from .reports import Axis, GridSpec, VerificationReport
from .special import gamma_fn
from .stieltjes import (
    HadamardProduct,
    SlitPoint,
    StieltjesFunction,
    evaluate,
    hadamard,
    hadamard_eval,
    quotient_taylor,
    series_eval,
    taylor,
)

__version__ = "0.1.0"
