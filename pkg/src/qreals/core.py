"""Floating-point model of the deformed reals R_q.

The deformation map ``tau`` sends x to ((2 - q)**x - 1) / (1 - q) and is a
field isomorphism onto R_q once addition and multiplication are transported
along it.  Every element is a :class:`QReal` holding its R_q value; the
pre-image under ``tau`` travels with it so that operations stay accurate
even where the value itself has rounded onto the additive singularity
-1/(1 - q).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Union

import numpy as np

from .errors import (
    ParamMismatchError,
    QDomainError,
    QOverflowError,
    QZeroDivisionError,
)

# Largest argument accepted by exp/expm1 in double precision.
_EXP_LIMIT = math.log(np.finfo(float).max)

DEFAULT_ATOL = 1e-12


@dataclass(frozen=True, slots=True)
class QParam:
    """Deformation parameter ``q`` in [0, 1] with base ``s = 2 - q``."""

    q: float

    def __post_init__(self) -> None:
        q = self.q
        if isinstance(q, bool) or not isinstance(q, Real):
            raise TypeError(f"q must be a real number, got {type(q).__name__}")
        q = float(q)
        if not math.isfinite(q) or not 0.0 <= q <= 1.0:
            raise QDomainError(f"q must lie in [0, 1], got {q!r}")
        object.__setattr__(self, "q", q)

    @property
    def s(self) -> float:
        return 2.0 - self.q

    @property
    def u(self) -> float:
        """The deformation ``1 - q``; zero for ordinary arithmetic."""
        return 1.0 - self.q

    @property
    def log_base(self) -> float:
        """``ln(2 - q)`` evaluated as ``log1p(1 - q)``."""
        return math.log1p(self.u)

    @property
    def is_classical(self) -> bool:
        return self.q == 1.0

    @property
    def singularity(self) -> float:
        """Lower boundary -1/(1 - q) of the value range; -inf at q = 1."""
        return -math.inf if self.is_classical else -1.0 / self.u


ParamLike = Union[QParam, float, int, Fraction]


def as_param(p: ParamLike) -> QParam:
    return p if isinstance(p, QParam) else QParam(p)


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


@dataclass(frozen=True, slots=True)
class QReal:
    """An element of R_q.

    ``value`` is the R_q representative.  ``preimage`` is ``tau^-1(value)``;
    when omitted it is recovered from ``value``, which must then lie strictly
    above the singularity.  Equality and hashing use ``(param, value)`` only.
    """

    param: QParam
    value: float
    preimage: float = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        value = float(self.value)
        if not math.isfinite(value):
            raise QDomainError(f"R_q elements must be finite, got {value!r}")
        object.__setattr__(self, "value", value)
        if self.preimage is None:
            object.__setattr__(self, "preimage", _value_to_preimage(self.param, value))
        else:
            x = float(self.preimage)
            if not math.isfinite(x):
                raise QDomainError(f"pre-image must be finite, got {x!r}")
            object.__setattr__(self, "preimage", x)

    def __add__(self, other):
        return oplus(self, other) if isinstance(other, QReal) else NotImplemented

    def __sub__(self, other):
        return ominus(self, other) if isinstance(other, QReal) else NotImplemented

    def __mul__(self, other):
        return otimes(self, other) if isinstance(other, QReal) else NotImplemented

    def __truediv__(self, other):
        return oslash(self, other) if isinstance(other, QReal) else NotImplemented

    def __neg__(self):
        return neg(self)

    def __abs__(self):
        return q_abs(self)

    def __lt__(self, other):
        if not isinstance(other, QReal):
            return NotImplemented
        return q_compare(self, other) is Ordering.LESS

    def __le__(self, other):
        if not isinstance(other, QReal):
            return NotImplemented
        return q_compare(self, other) is not Ordering.GREATER

    def __gt__(self, other):
        if not isinstance(other, QReal):
            return NotImplemented
        return q_compare(self, other) is Ordering.GREATER

    def __ge__(self, other):
        if not isinstance(other, QReal):
            return NotImplemented
        return q_compare(self, other) is not Ordering.LESS

    def __float__(self) -> float:
        return self.value


def _value_to_preimage(p: QParam, y: float) -> float:
    if p.is_classical:
        return y
    arg = p.u * y
    if not arg > -1.0:
        raise QDomainError(
            f"{y!r} is not an element of R_q for q={p.q}: "
            f"values must exceed {p.singularity!r}"
        )
    return math.log1p(arg) / p.log_base


def _preimage_to_value(p: QParam, x: float) -> float:
    if p.is_classical:
        return x
    t = x * p.log_base
    if t > _EXP_LIMIT:
        raise QOverflowError(f"tau({x!r}) overflows double precision for q={p.q}")
    value = math.expm1(t) / p.u
    if not math.isfinite(value):
        raise QOverflowError(f"tau({x!r}) overflows double precision for q={p.q}")
    return value


def tau(p: ParamLike, x: float) -> QReal:
    """Map an ordinary real into R_q."""
    p = as_param(p)
    x = float(x)
    if not math.isfinite(x):
        raise QDomainError(f"tau needs a finite argument, got {x!r}")
    return QReal(p, _preimage_to_value(p, x), x)


def tau_inv(p: ParamLike, y: QReal | float) -> float:
    """Pre-image of an R_q element.  Accepts a :class:`QReal` or a raw value."""
    p = as_param(p)
    if isinstance(y, QReal):
        _check_param(p, y.param)
        return y.preimage
    y = float(y)
    if not math.isfinite(y):
        raise QDomainError(f"tau_inv needs a finite argument, got {y!r}")
    return _value_to_preimage(p, y)


def tau_array(p: ParamLike, x) -> np.ndarray:
    """Vectorised values of ``tau`` (no overflow checking beyond inf)."""
    p = as_param(p)
    x = np.asarray(x, dtype=float)
    if p.is_classical:
        return x.copy()
    return np.expm1(x * p.log_base) / p.u


def tau_inv_array(p: ParamLike, y) -> np.ndarray:
    p = as_param(p)
    y = np.asarray(y, dtype=float)
    if p.is_classical:
        return y.copy()
    return np.log1p(p.u * y) / p.log_base


def _check_param(a: QParam, b: QParam) -> QParam:
    if a != b:
        raise ParamMismatchError(f"operands carry different q: {a.q!r} and {b.q!r}")
    return a


def _common(a: QReal, b: QReal) -> QParam:
    return _check_param(a.param, b.param)


def generalized_sum(q: ParamLike, x: float, y: float) -> float:
    """The composition rule x + y + (1 - q) x y on plain numbers."""
    p = as_param(q)
    return x + y + p.u * (x * y)


def oplus(a: QReal, b: QReal) -> QReal:
    """Generalised addition a + b + (1 - q) a b."""
    p = _common(a, b)
    x = a.preimage + b.preimage
    if a.value >= 0.0 and b.value >= 0.0:
        # no cancellation possible: the polynomial form is the more accurate one
        value = a.value + b.value + p.u * (a.value * b.value)
        if not math.isfinite(value):
            raise QOverflowError(f"{a.value!r} (+) {b.value!r} overflows double precision")
        return QReal(p, value, x)
    return tau(p, x)


def neg(a: QReal) -> QReal:
    """Opposite element, -a / (1 + (1 - q) a)."""
    return tau(a.param, -a.preimage)


def ominus(a: QReal, b: QReal) -> QReal:
    p = _common(a, b)
    return tau(p, a.preimage - b.preimage)


def otimes(a: QReal, b: QReal) -> QReal:
    """Generalised multiplication, distributive over :func:`oplus`."""
    p = _common(a, b)
    return tau(p, a.preimage * b.preimage)


def oslash(a: QReal, b: QReal) -> QReal:
    p = _common(a, b)
    if b.preimage == 0.0:
        raise QZeroDivisionError("division by 0_q")
    return tau(p, a.preimage / b.preimage)


def q_dist(a: QReal, b: QReal) -> QReal:
    """q-distance |a (-) b|_q = tau(|x - y|)."""
    p = _common(a, b)
    return tau(p, abs(a.preimage - b.preimage))


def q_abs(a: QReal) -> QReal:
    return tau(a.param, abs(a.preimage))


def q_compare(a: QReal, b: QReal) -> Ordering:
    _common(a, b)
    x, y = a.preimage, b.preimage
    if x < y:
        return Ordering.LESS
    if x > y:
        return Ordering.GREATER
    return Ordering.EQUAL


def exp_cap(a: QReal) -> QReal:
    """EXP_q(x_q) = tau(exp x)."""
    x = a.preimage
    if x > _EXP_LIMIT:
        raise QOverflowError(f"exp({x!r}) overflows double precision")
    return tau(a.param, math.exp(x))


def log_cap(a: QReal) -> QReal:
    """LOG_q(x_q) = tau(ln x); defined on the positive cone of R_q."""
    x = a.preimage
    if not x > 0.0:
        raise QDomainError(f"LOG_q needs a positive element, got value {a.value!r}")
    return tau(a.param, math.log(x))


def zero(p: ParamLike) -> QReal:
    return QReal(as_param(p), 0.0, 0.0)


def one(p: ParamLike) -> QReal:
    return QReal(as_param(p), 1.0, 1.0)


def deviation(a: float, b: float, rtol: float, atol: float = DEFAULT_ATOL) -> float:
    """Relative deviation with an absolute floor, scaled so that ``<= rtol`` passes.

    Equivalent to testing ``|a - b| <= max(rtol * max(|a|, |b|), atol)``.
    """
    scale = max(abs(a), abs(b), atol / rtol)
    return abs(a - b) / scale


def close(a: float, b: float, rtol: float, atol: float = DEFAULT_ATOL) -> bool:
    return deviation(a, b, rtol, atol) <= rtol
