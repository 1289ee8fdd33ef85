"""Discrete Tsallis entropy and its composition law for independent systems."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Sequence

from .core import ParamLike, as_param, generalized_sum
from .errors import QDomainError

NORMALIZATION_TOL = 1e-12


@dataclass(frozen=True)
class DiscreteDist:
    """Finite probability vector.  Construction validates but never renormalizes."""

    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        probs = tuple(float(v) for v in self.probabilities)
        if not probs:
            raise QDomainError("a distribution needs at least one outcome")
        for v in probs:
            if not math.isfinite(v) or v < 0.0:
                raise QDomainError(f"probabilities must be finite and non-negative, got {v!r}")
        total = math.fsum(probs)
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise QDomainError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "probabilities", probs)

    def __len__(self) -> int:
        return len(self.probabilities)

    def __iter__(self):
        return iter(self.probabilities)

    @classmethod
    def uniform(cls, w: int) -> "DiscreteDist":
        if w < 1:
            raise QDomainError(f"uniform distribution needs w >= 1, got {w}")
        return cls((1.0 / w,) * w)

    @classmethod
    def parse(cls, text: str) -> "DiscreteDist":
        """Read ``"0.2,0.8"`` or a JSON array such as ``"[0.2, 0.8]"``."""
        text = text.strip()
        try:
            if text.startswith("["):
                values = json.loads(text)
                if not isinstance(values, list):
                    raise ValueError("expected a JSON array")
            else:
                values = [float(t) for t in text.split(",") if t.strip()]
            return cls(tuple(float(v) for v in values))
        except (TypeError, ValueError) as exc:
            if isinstance(exc, QDomainError):
                raise
            raise QDomainError(f"cannot parse distribution {text!r}: {exc}") from None


def tsallis_entropy(p: ParamLike, d: DiscreteDist | Sequence[float]) -> float:
    """S_q = (1 - sum p_i**q) / (q - 1) with k = 1; the Shannon value at q = 1.

    Evaluated as sum p_i ln_q(1/p_i), which equals the defining form for a
    normalized distribution and stays accurate as q approaches 1.
    Zero-probability outcomes contribute nothing for every q in [0, 1].
    """
    p = as_param(p)
    if not isinstance(d, DiscreteDist):
        d = DiscreteDist(tuple(d))
    u = p.u
    terms = []
    for pi in d.probabilities:
        if pi == 0.0:
            continue
        log_inv = -math.log(pi)
        if u == 0.0:
            terms.append(pi * log_inv)
        elif u * log_inv < 700.0:
            terms.append(pi * math.expm1(u * log_inv) / u)
        else:
            # tiny p_i: p * ln_q(1/p) = (p**q - p) / (1 - q) without overflow
            terms.append((pi ** p.q - pi) / u)
    return math.fsum(terms)


def product_dist(a: DiscreteDist, b: DiscreteDist) -> DiscreteDist:
    """Joint distribution of two independent systems, row-major flattening."""
    return DiscreteDist(tuple(x * y for x in a.probabilities for y in b.probabilities))


@dataclass(frozen=True)
class Composition:
    s_a: float
    s_b: float
    s_joint: float
    predicted: float
    defect: float

    def to_dict(self) -> dict:
        return {
            "entropy_a": self.s_a,
            "entropy_b": self.s_b,
            "entropy_joint": self.s_joint,
            "composition_rhs": self.predicted,
            "defect": self.defect,
        }


def compose(p: ParamLike, a: DiscreteDist, b: DiscreteDist) -> Composition:
    p = as_param(p)
    sa, sb = tsallis_entropy(p, a), tsallis_entropy(p, b)
    joint = tsallis_entropy(p, product_dist(a, b))
    predicted = generalized_sum(p, sa, sb)
    return Composition(sa, sb, joint, predicted, abs(joint - predicted))


def composition_check(p: ParamLike, a: DiscreteDist, b: DiscreteDist) -> float:
    """|S_q(A+B) - (S_q(A) + S_q(B) + (1-q) S_q(A) S_q(B))| for independent A, B."""
    return compose(p, a, b).defect


def random_dist(rng, max_outcomes: int = 8, zero_fraction: float = 0.0) -> DiscreteDist:
    """Dirichlet-distributed probabilities; optionally zero out some outcomes."""
    w = int(rng.integers(1, max_outcomes + 1))
    raw = rng.dirichlet([1.0] * w)
    if zero_fraction > 0.0 and w > 1:
        mask = rng.random(w) < zero_fraction
        mask[int(rng.integers(w))] = False
        raw = raw * ~mask
    raw = raw / raw.sum()
    return DiscreteDist(tuple(float(v) for v in raw))

