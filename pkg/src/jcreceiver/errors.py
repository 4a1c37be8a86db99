"""Exception types raised by :mod:`jcreceiver`."""


class DomainError(ValueError):
    """An input lies outside the range the library supports."""


class ImpossibleOutcomeError(ValueError):
    """A measurement outcome has (numerically) zero probability.

    No normalizable post-measurement state exists for it.
    """

    def __init__(self, probability, message=None):
        self.probability = float(probability)
        super().__init__(message or f"outcome probability {self.probability:.3e} is below 1e-14")


class EvaluationError(ArithmeticError):
    """An objective function returned a non-finite value."""

    def __init__(self, x, value):
        self.x = float(x)
        self.value = value
        super().__init__(f"objective is not finite at x={self.x!r}: {value!r}")


class UnsupportedConfigurationError(ValueError):
    """The requested combination of parameters has no defined model."""
