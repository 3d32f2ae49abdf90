"""Exception hierarchy shared by all ketsim modules."""


class KetsimError(Exception):
    """Base class for all errors raised by ketsim."""

    @property
    def kind(self) -> str:
        return type(self).__name__


class InvalidInput(KetsimError):
    """An argument violates a documented precondition."""


class DimensionMismatch(KetsimError):
    """Operands have incompatible dimensions or qubit counts."""


class CapacityExceeded(KetsimError):
    """A result would exceed the configured qubit or dense-matrix cap."""


class PromiseViolated(KetsimError):
    """A function handed to Deutsch-Jozsa is neither constant nor balanced."""


class NotUnitary(KetsimError):
    """A matrix required to be unitary fails the unitarity check."""


class NumericalFailure(KetsimError):
    """A numerical routine failed to converge or lost too much accuracy."""


class ParseError(InvalidInput):
    """A text input (circuit, table, matrix, distribution) failed to parse.

    Carries the 1-based line number the failure was detected on.
    """

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
