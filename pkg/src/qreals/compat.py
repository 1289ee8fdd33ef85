"""Earlier deformed products: the q-logarithm, the Borges product, and the Lobao product.

The Borges product makes the q-logarithm additive but is not distributive
over the generalised sum.  The Lobao product is distributive and agrees
numerically with :func:`qreals.core.otimes`; :func:`equivalence_scan`
measures that agreement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal

import numpy as np

from .core import (
    ParamLike,
    QParam,
    _EXP_LIMIT,
    as_param,
    deviation,
    generalized_sum,
    otimes,
    tau,
)
from .errors import NoWitnessError, QDomainError, QOverflowError

Variant = Literal["corrected", "printed"]


def ln_q(p: ParamLike, x: float) -> float:
    """q-logarithm (x**(1-q) - 1) / (1 - q); natural log at q = 1."""
    p = as_param(p)
    if not x > 0:
        raise QDomainError(f"ln_q is defined for x > 0, got {x!r}")
    if p.is_classical:
        return math.log(x)
    return math.expm1(p.u * math.log(x)) / p.u


def _checked_exp(t: float) -> float:
    if t > _EXP_LIMIT:
        raise QOverflowError("result overflows double precision")
    return math.exp(t)


def borges_otimes(p: ParamLike, x: float, y: float, variant: Variant = "corrected") -> float:
    """Borges product.

    ``corrected`` is (x**(1-q) + y**(1-q) - 1)**(1/(1-q)), under which
    ln_q(x * y) = ln_q x + ln_q y.  ``printed`` drops the -1 and is kept to
    demonstrate the constant defect 1/(1-q) it introduces.
    """
    p = as_param(p)
    if not (x > 0 and y > 0):
        raise QDomainError(f"Borges product needs positive arguments, got ({x!r}, {y!r})")
    if variant == "corrected":
        if p.is_classical:
            return x * y
        shifted = math.expm1(p.u * math.log(x)) + math.expm1(p.u * math.log(y))
        if not shifted > -1.0:
            raise QDomainError(
                f"x**(1-q) + y**(1-q) - 1 must be positive for ({x!r}, {y!r}) at q={p.q}"
            )
        if abs(shifted) >= 0.5:
            try:
                return (1.0 + shifted) ** (1.0 / p.u)
            except OverflowError:
                raise QOverflowError("Borges product overflows double precision") from None
        return _checked_exp(math.log1p(shifted) / p.u)
    if variant == "printed":
        if p.is_classical:
            raise QDomainError("the printed Borges form diverges at q = 1")
        base = x ** p.u + y ** p.u
        return _checked_exp(math.log(base) / p.u)
    raise ValueError(f"unknown variant {variant!r}")


def lobao_diamond(p: ParamLike, x: float, y: float) -> float:
    """Distributive product ((2-q)**(log(1+(1-q)x) log(1+(1-q)y) / log(2-q)**2) - 1)/(1-q)."""
    p = as_param(p)
    if p.is_classical:
        return x * y
    u, L = p.u, p.log_base
    if not (u * x > -1.0 and u * y > -1.0):
        raise QDomainError(f"({x!r}, {y!r}) is not a pair of R_q elements for q={p.q}")
    t = math.log1p(u * x) * math.log1p(u * y) / L
    if t > _EXP_LIMIT:
        raise QOverflowError("Lobao product overflows double precision")
    value = math.expm1(t) / u
    if not math.isfinite(value):
        raise QOverflowError("Lobao product overflows double precision")
    return value


@dataclass(frozen=True)
class EquivalenceReport:
    q_values: tuple[float, ...]
    max_deviation: tuple[float, ...]
    overall_max: float
    witness: tuple[float, float, float]
    samples: int
    seed: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.overall_max <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "q_values": list(self.q_values),
            "max_deviation": list(self.max_deviation),
            "overall_max": self.overall_max,
            "witness": list(self.witness),
            "samples": self.samples,
            "seed": self.seed,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def equivalence_scan(
    q_grid: Iterable[float],
    samples: int,
    seed: int,
    domain: tuple[float, float] = (-5.0, 5.0),
    tolerance: float = 1e-10,
) -> EquivalenceReport:
    """Compare the Lobao product with tau-conjugated multiplication on random pairs.

    Pre-images are drawn uniformly from ``domain``.  The Lobao side works on
    the R_q values alone; the conjugated side uses the pre-images.
    """
    rng = np.random.default_rng(seed)
    qs, maxima = [], []
    overall, witness = 0.0, (math.nan, math.nan, math.nan)
    for qv in q_grid:
        p = QParam(qv)
        pre = rng.uniform(domain[0], domain[1], size=(samples, 2))
        worst = 0.0
        for x, y in pre:
            a, b = tau(p, x), tau(p, y)
            dev = deviation(lobao_diamond(p, a.value, b.value), otimes(a, b).value, tolerance)
            if dev > worst:
                worst = dev
                if dev > overall:
                    overall, witness = dev, (p.q, float(x), float(y))
        qs.append(p.q)
        maxima.append(worst)
    return EquivalenceReport(tuple(qs), tuple(maxima), overall, witness, samples, seed, tolerance)


def integer_equivalence(p: ParamLike, n_max: int = 20, tolerance: float = 1e-10) -> float:
    """Max deviation of lobao_diamond(n_q, m_q) from (nm)_q over 1 <= n, m <= n_max."""
    p = as_param(p)
    worst = 0.0
    for n in range(1, n_max + 1):
        nq = tau(p, n).value
        for m in range(1, n_max + 1):
            dev = deviation(lobao_diamond(p, nq, tau(p, m).value), tau(p, n * m).value, tolerance)
            worst = max(worst, dev)
    return worst


def distributivity_defect(
    p: ParamLike, product: Callable[[QParam, float, float], float], x: float, y: float, z: float
) -> float:
    """Relative defect |x*(y+z) - (x*y + x*z)| / |x*(y+z)| with + the generalised sum."""
    p = as_param(p)
    lhs = product(p, x, generalized_sum(p, y, z))
    rhs = generalized_sum(p, product(p, x, y), product(p, x, z))
    return abs(lhs - rhs) / abs(lhs)


@dataclass(frozen=True)
class DistributivityWitness:
    x: float
    y: float
    z: float
    defect: float
    variant: str = field(default="corrected")


def _candidates() -> Iterable[tuple[float, float, float]]:
    yield 4.0, 9.0, 16.0
    for scale in range(1, 60):
        v = 2.0 ** scale
        yield v, v, v
        yield 4.0 * v, 9.0 * v, 16.0 * v


def non_distributivity_witness(
    p: ParamLike, variant: Variant = "corrected", threshold: float = 1e-3
) -> DistributivityWitness:
    """A triple on which the Borges product fails to distribute over the generalised sum."""
    p = as_param(p)
    if p.is_classical:
        raise NoWitnessError("ordinary multiplication distributes over addition")

    def product(pp, a, b):
        return borges_otimes(pp, a, b, variant)

    for x, y, z in _candidates():
        try:
            defect = distributivity_defect(p, product, x, y, z)
        except (QOverflowError, OverflowError):
            break
        if defect > threshold:
            return DistributivityWitness(x, y, z, defect, variant)
    raise NoWitnessError(f"no triple with defect above {threshold} found for q={p.q}")
