"""Exception hierarchy shared by every normgate module."""


class NormgateError(Exception):
    """Base class for all errors raised by normgate."""


class InvalidInputError(NormgateError, ValueError):
    """Non-finite entries, wrong shapes or otherwise malformed arguments."""


class BracketError(NormgateError, ValueError):
    """A bracket is empty or the function does not change sign across it."""


class DomainError(NormgateError, ValueError):
    """A function was evaluated outside the range where it is defined."""


class PreconditionError(NormgateError, ValueError):
    """A mathematical hypothesis required by an operation does not hold."""


class InvalidSpecError(NormgateError, ValueError):
    """A spectrum description is inconsistent or cannot be parsed."""


class ConsistencyError(NormgateError, RuntimeError):
    """An internal check that should be impossible to fail has failed."""


class ReproductionError(NormgateError, RuntimeError):
    """A reproduced reference value did not match."""
