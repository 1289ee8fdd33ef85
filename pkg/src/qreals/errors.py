"""Exception hierarchy shared by every module in the package."""


class QError(Exception):
    """Base class for all errors raised by ``qreals``."""


class QDomainError(QError, ValueError):
    """An argument lies outside the domain of the operation."""


class QOverflowError(QError, OverflowError):
    """A result cannot be represented in double precision."""


class ParamMismatchError(QError, ValueError):
    """Operands belong to deformed fields with different ``q``."""


class NoWitnessError(QError, RuntimeError):
    """A search for a counterexample or witness found nothing."""


class DegenerateFitError(QError, ValueError):
    """A regression has no usable spread in its data."""


class QZeroDivisionError(QError, ZeroDivisionError):
    """Division by the additive identity ``0_q``."""
