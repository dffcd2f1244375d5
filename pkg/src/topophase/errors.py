"""Exception and warning classes shared across modules."""


class TopophaseError(Exception):
    """Base class for domain errors raised by the package."""


class OnAxisError(TopophaseError):
    """A field point or path sample sits on (or within rho_min of) a line source."""


class WrongKindError(TopophaseError):
    """Operation not defined for this kind of source."""


class TooFastError(TopophaseError):
    """Speed outside the first-order boost regime (|v| >= 0.1 c)."""


class NonMonotonicTimeError(TopophaseError):
    pass


class NotClosedError(TopophaseError):
    pass


class NonIntegerWindingError(TopophaseError):
    pass


class StepSizeUnderflowError(TopophaseError):
    """The fixed-step integrator could not reach the requested tolerance."""


class NonParallelDipoleWarning(UserWarning):
    pass


class ValidityWarning(UserWarning):
    """Parameters fall outside the perturbative quench-rate regime."""
