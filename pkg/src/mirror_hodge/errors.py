"""Exception hierarchy.

Parameter errors are user-facing (bad rank, non-coprime degree, ...).
``InvariantViolation`` and its subclasses mean an internal self-check failed;
they indicate a bug, never a bad input.
"""


class MirrorError(Exception):
    pass


class ParameterError(MirrorError, ValueError):
    pass


class IncompatibleRingError(ParameterError):
    """Cyclotomic elements over different primes were combined."""


class EnumerationCapError(ParameterError):
    pass


class OpenConjectureError(MirrorError):
    """The requested quantity is not determined by known results."""


class InvariantViolation(MirrorError, ArithmeticError):
    pass


class InexactDivisionError(InvariantViolation):
    def __init__(self, exponent, coefficient, divisor):
        self.exponent = exponent
        self.coefficient = coefficient
        self.divisor = divisor
        super().__init__(
            f"coefficient {coefficient} of u^{exponent[0]} v^{exponent[1]} "
            f"is not divisible by {divisor}"
        )


class NonRationalError(InvariantViolation):
    pass
