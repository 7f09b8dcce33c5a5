"""Exception hierarchy shared by all catphase modules."""


class CatPhaseError(Exception):
    """Base class for every error raised by catphase."""


class InvalidArgumentError(CatPhaseError, ValueError):
    """An argument violates a precondition (bad range, mismatched sizes)."""


class DomainError(CatPhaseError, ValueError):
    """A quantity is undefined for the given parameters (e.g. no overlap zero at alpha=0)."""


class PhaseRangeError(CatPhaseError, ValueError):
    """A phase lies outside the small-signal validity range of the linearized model."""


class TruncationError(CatPhaseError, ArithmeticError):
    """The Fock-space cutoff is too small to hold a state within tolerance."""


class BracketingError(CatPhaseError, ArithmeticError):
    """No sign change of the stationarity condition could be located."""
