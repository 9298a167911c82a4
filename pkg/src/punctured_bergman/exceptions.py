"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class TruncationFailure(ArithmeticError):
    """A series could not be certified to the requested tolerance.

    Raised when the term cap is reached before the tail bound meets the
    relative tolerance. Callers usually respond by switching method.
    """


class PrecisionLoss(TruncationFailure):
    """Cancellation makes the requested relative tolerance unreachable."""


class AccuracyCap(ValueError):
    """Input exceeds the range where a quadrature oracle is trustworthy."""


class FitDegenerate(ArithmeticError):
    """Not enough usable data points for a least-squares fit."""


class BumpNotSeparated(RuntimeError):
    """No interior maximum was found in a bump bracket."""


class InvalidStabilizer(ValueError):
    """A stabilizer angle set is not closed under inversion."""
