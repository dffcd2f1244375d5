"""Simulation toolkit for the four dual topological phases (AB, AC, DAB, HMW)
and the hydrogen Stark-quench and ammonia Ramsey experiments that measure the
He-McKellar-Wilkens phase.

All quantities are Gaussian CGS unless a ``Units`` object says otherwise.
"""

from topophase.constants import PhysicalConstants, default_constants
from topophase.errors import (
    NonIntegerWindingError,
    NonMonotonicTimeError,
    NonParallelDipoleWarning,
    NotClosedError,
    OnAxisError,
    StepSizeUnderflowError,
    TooFastError,
    TopophaseError,
    ValidityWarning,
    WrongKindError,
)

__version__ = "0.1.0"

__all__ = [
    "PhysicalConstants",
    "default_constants",
    "NonIntegerWindingError",
    "NonMonotonicTimeError",
    "NonParallelDipoleWarning",
    "NotClosedError",
    "OnAxisError",
    "StepSizeUnderflowError",
    "TooFastError",
    "TopophaseError",
    "ValidityWarning",
    "WrongKindError",
]
