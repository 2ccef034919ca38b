"""Exception hierarchy."""


class ToeplitzBallError(Exception):
    """Base class for all errors raised by this package."""


class DivisionFailure(ToeplitzBallError):
    """Exact polynomial division left a remainder.

    Raised by the (1-|z|^2)^k division inside the p_m form of the operator D.
    A failure there is a counterexample to the operator identity, so it is
    surfaced instead of truncated.
    """

    def __init__(self, message, remainder=None):
        super().__init__(message)
        self.remainder = remainder


class NotHolomorphic(ToeplitzBallError, ValueError):
    pass


class NotPluriharmonic(ToeplitzBallError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PoleAtPoint(ToeplitzBallError, ZeroDivisionError):
    """A reciprocal sub-expression vanishes at the evaluation point."""


class UnknownKernel(ToeplitzBallError, KeyError):
    pass


class NonIntegrable(ToeplitzBallError, ValueError):
    pass


class GuardBandViolation(ToeplitzBallError):
    """A composition or comparison needs columns that were never built."""


class PreconditionViolation(ToeplitzBallError, ValueError):
    pass


class UnsupportedPoles(ToeplitzBallError, ValueError):
    pass


class ImproperFunction(ToeplitzBallError, ValueError):
    pass


class DegreeTooLarge(ToeplitzBallError, ValueError):
    pass


class NotRepresentable(ToeplitzBallError, ValueError):
    def __init__(self, message, violation=None):
        super().__init__(message)
        self.violation = violation
