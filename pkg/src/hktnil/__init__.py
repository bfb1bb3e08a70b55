"""Exact computations for HKT structures on nilpotent Lie algebras."""

from .errors import ConsistencyError, HktError, InvalidLieAlgebra, NotHKT, PreconditionError
from .exactlin import AltForm, Matrix, Subspace
from .liealg import MetricLieAlgebra

__all__ = [
    "AltForm",
    "ConsistencyError",
    "HktError",
    "InvalidLieAlgebra",
    "Matrix",
    "MetricLieAlgebra",
    "NotHKT",
    "PreconditionError",
    "Subspace",
]
