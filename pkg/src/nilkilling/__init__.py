"""Left-invariant Killing 2-tensors on 2-step nilpotent metric Lie algebras."""

__version__ = "0.1.0"

from ._scalar import BACKEND as SCALAR_BACKEND
from .classify import classify, construct_double
from .derivations import extend_skew, skew_derivations
from .killing import is_killing, killing_space, killing_two_forms, parallel_space
from .liealg import MetricLieAlgebra, from_brackets, ideal_decomposition, is_nonsingular, validate
from .oracle import OracleSpan, crosscheck, decomposable_membership

__all__ = [
    "MetricLieAlgebra",
    "SCALAR_BACKEND",
    "classify",
    "construct_double",
    "crosscheck",
    "decomposable_membership",
    "extend_skew",
    "from_brackets",
    "ideal_decomposition",
    "is_killing",
    "is_nonsingular",
    "killing_space",
    "killing_two_forms",
    "OracleSpan",
    "parallel_space",
    "skew_derivations",
    "validate",
]
