"""Deformed reals R_q built from the composition law of the Tsallis entropy."""

from .core import (
    Ordering,
    QParam,
    QReal,
    exp_cap,
    log_cap,
    neg,
    ominus,
    oplus,
    oslash,
    otimes,
    q_abs,
    q_compare,
    q_dist,
    tau,
    tau_inv,
)
from .errors import (
    DegenerateFitError,
    NoWitnessError,
    ParamMismatchError,
    QDomainError,
    QError,
    QOverflowError,
    QZeroDivisionError,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateFitError",
    "NoWitnessError",
    "Ordering",
    "ParamMismatchError",
    "QDomainError",
    "QError",
    "QOverflowError",
    "QParam",
    "QReal",
    "QZeroDivisionError",
    "exp_cap",
    "log_cap",
    "neg",
    "ominus",
    "oplus",
    "oslash",
    "otimes",
    "q_abs",
    "q_compare",
    "q_dist",
    "tau",
    "tau_inv",
]
