"""Exception hierarchy for spinotto."""


class SpinOttoError(Exception):
    """Base class for all library errors."""


class ParameterError(SpinOttoError, ValueError):
    """An input violates a documented precondition."""


class UnorderedSpectrumError(SpinOttoError):
    """A spectrum below its level-crossing threshold was used where label order must equal energy order."""


class MismatchedSpectraError(SpinOttoError):
    """Hot and cold spectra do not describe the same working medium."""


class AbsoluteContinuityError(SpinOttoError, ValueError):
    """x_k > 0 where y_k == 0 in a relative entropy."""


class LengthMismatchError(SpinOttoError, ValueError):
    pass


class NormalizationError(SpinOttoError, ValueError):
    pass


class DimensionError(SpinOttoError, ValueError):
    """Distribution length does not match the medium's level count."""


class DomainError(SpinOttoError, ValueError):
    """Parameters lie outside the regime where a formula is defined (e.g. B2/T2 < B1/T1)."""


class NoBracketError(SpinOttoError):
    """A threshold predicate never fails inside the search interval."""


class ModeError(SpinOttoError):
    """The cycle does not operate as an engine."""


class SingularityError(SpinOttoError, ZeroDivisionError):
    pass


class ConvergenceError(SpinOttoError):
    """Dense eigensolver output failed its residual or orthonormality checks."""
