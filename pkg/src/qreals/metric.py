"""Metric and measure experiments on the deformation map.

``tau`` is not Lipschitz, and its behaviour under the quasisymmetry test
depends on the target metric.  Measured with the q-distance it is weakly
1-quasisymmetric.  Measured with |tau(x) - tau(y)| the distortion ratio is
unbounded.  The pullback of Lebesgue measure along ``tau`` has doubling
ratio s**r + s**-r, which is independent of the centre but grows with r.
Box counting under the snowflake metric |x - y|**eps scales dimension by
1/eps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .core import ParamLike, as_param, tau, tau_array
from .errors import DegenerateFitError, NoWitnessError, QDomainError

Target = Literal["euclidean", "q-distance"]
TARGETS = ("euclidean", "q-distance")
MAX_CANTOR_DEPTH = 14


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise QDomainError(f"interval endpoints must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise QDomainError(f"interval needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


@dataclass(frozen=True)
class QSReport:
    convention: str
    max_ratio: float
    witness: tuple[float, float, float]
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "convention": self.convention,
            "max_ratio": self.max_ratio,
            "witness": list(self.witness),
            "samples": self.samples,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class BoxCountReport:
    epsilon: float
    scales: tuple[float, ...]
    counts: tuple[int, ...]
    dimension: float
    residual: float

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "scales": list(self.scales),
            "counts": list(self.counts),
            "dimension": self.dimension,
            "residual": self.residual,
        }


def tau_increment(p: ParamLike, a, b):
    """tau(b) - tau(a) without cancellation: s**a * expm1((b - a) ln s) / (1 - q)."""
    p = as_param(p)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if p.is_classical:
        out = b - a
    else:
        L = p.log_base
        out = np.exp(a * L) * np.expm1((b - a) * L) / p.u
    return out if out.ndim else float(out)


def distance_distortion(p: ParamLike, x: float, y: float) -> tuple[float, float]:
    """(|x - y|, tau(|x - y|)): the Euclidean distance and its q-distance image."""
    d = abs(x - y)
    return d, tau(p, d).value


def lipschitz_witness(p: ParamLike, C: float) -> float:
    """A distance d with tau(d) / d > C.

    tau(d)/d is increasing and unbounded for q < 1, so the smallest such
    distance is bracketed by doubling and refined by bisection.
    """
    p = as_param(p)
    if C <= 0:
        raise QDomainError(f"C must be positive, got {C!r}")
    if p.is_classical:
        raise NoWitnessError("the identity map is 1-Lipschitz")

    def g(d: float) -> float:
        return tau(p, d).value / d

    hi = 1.0
    while not g(hi) > C:
        hi *= 2.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if g(mid) > C:
            hi = mid
        else:
            lo = mid
    return hi


def euclidean_ratio(p: ParamLike, x: float, y: float, z: float) -> float:
    """|tau(x) - tau(y)| / |tau(x) - tau(z)|."""
    return abs(tau_increment(p, x, y)) / abs(tau_increment(p, x, z))


def q_distance_ratio(p: ParamLike, x: float, y: float, z: float) -> float:
    """tau(|x - y|) / tau(|x - z|)."""
    return tau(p, abs(x - y)).value / tau(p, abs(x - z)).value


def extremal_triple(p: ParamLike, C: float) -> tuple[float, float, float]:
    """The triple (0, d, -d) whose Euclidean-target ratio is s**d = 2C."""
    p = as_param(p)
    if p.is_classical:
        raise NoWitnessError("the identity map is weakly 1-quasisymmetric")
    d = math.log(2.0 * C) / p.log_base
    return 0.0, d, -d


def _normalize_target(target: str) -> str:
    target = {"qdist": "q-distance"}.get(target, target)
    if target not in TARGETS:
        raise QDomainError(f"unknown target metric {target!r}")
    return target


def sample_triples(domain: Interval, samples: int, seed: int) -> np.ndarray:
    """Uniform triples with |x - y| <= |x - z| enforced by swapping y and z."""
    if samples < 1:
        raise QDomainError(f"samples must be at least 1, got {samples}")
    rng = np.random.default_rng(seed)
    t = rng.uniform(domain.lo, domain.hi, size=(samples, 3))
    swap = np.abs(t[:, 0] - t[:, 1]) > np.abs(t[:, 0] - t[:, 2])
    t[swap, 1], t[swap, 2] = t[swap, 2], t[swap, 1].copy()
    return t


def weak_qs_scan(
    p: ParamLike, domain: Interval, samples: int, seed: int, target: str = "q-distance"
) -> QSReport:
    """Largest image-distance ratio over random triples with |x - y| <= |x - z|."""
    p = as_param(p)
    target = _normalize_target(target)
    t = sample_triples(domain, samples, seed)
    x, y, z = t[:, 0], t[:, 1], t[:, 2]
    keep = x != z
    x, y, z = x[keep], y[keep], z[keep]
    if target == "q-distance":
        ratio = tau_array(p, np.abs(x - y)) / tau_array(p, np.abs(x - z))
    else:
        ratio = np.abs(tau_increment(p, x, y)) / np.abs(tau_increment(p, x, z))
    if ratio.size == 0:
        return QSReport(target, 0.0, (math.nan,) * 3, samples, seed)
    k = int(np.argmax(ratio))
    witness = (float(x[k]), float(y[k]), float(z[k]))
    return QSReport(target, float(ratio[k]), witness, samples, seed)


def eta_estimate(
    p: ParamLike, domain: Interval, grid: int, t_max: float | None = None
) -> list[tuple[float, float]]:
    """Empirical distortion function from all triples of an evenly spaced grid.

    Each row is (t, eta) where eta is the largest Euclidean-target image
    ratio over triples whose pre-image ratio |x - y| / |x - z| is at most t.
    """
    p = as_param(p)
    if not 3 <= grid <= 150:
        raise QDomainError(f"grid must be between 3 and 150 points, got {grid}")
    pts = np.linspace(domain.lo, domain.hi, grid)
    i, j, k = (a.ravel() for a in np.meshgrid(*(np.arange(grid),) * 3, indexing="ij"))
    keep = i != k
    i, j, k = i[keep], j[keep], k[keep]
    num, den = np.abs(i - j), np.abs(i - k)
    g = np.gcd(num, den)
    num, den = num // g, den // g
    ratio = np.abs(tau_increment(p, pts[i], pts[j])) / np.abs(tau_increment(p, pts[i], pts[k]))
    keys, inverse = np.unique(num * grid + den, return_inverse=True)
    best = np.full(keys.size, -np.inf)
    np.maximum.at(best, inverse, ratio)
    t = (keys // grid) / (keys % grid)
    order = np.argsort(t, kind="stable")
    t, best = t[order], np.maximum.accumulate(best[order])
    if t_max is not None:
        sel = t <= t_max
        t, best = t[sel], best[sel]
    return [(float(a), float(b)) for a, b in zip(t, best)]


def pullback_measure(p: ParamLike, interval: Interval) -> float:
    """Measure tau(hi) - tau(lo) of the interval under the pullback of Lebesgue measure."""
    return float(tau_increment(p, interval.lo, interval.hi))


def doubling_ratio(p: ParamLike, x: float, r: float) -> float:
    """mu(B_2r(x)) / mu(B_r(x)) for the pullback measure."""
    if not r > 0:
        raise QDomainError(f"radius must be positive, got {r!r}")
    big = pullback_measure(p, Interval(x - 2 * r, x + 2 * r))
    small = pullback_measure(p, Interval(x - r, x + r))
    return big / small


def doubling_ratio_closed(p: ParamLike, r: float) -> float:
    """s**r + s**-r, the centre-free value of :func:`doubling_ratio`."""
    p = as_param(p)
    return 2.0 * math.cosh(r * p.log_base)


def cantor_points(depth: int) -> np.ndarray:
    """Left endpoints of the 2**depth middle-thirds intervals at level ``depth``."""
    if not 1 <= depth <= MAX_CANTOR_DEPTH:
        raise QDomainError(f"depth must be between 1 and {MAX_CANTOR_DEPTH}, got {depth}")
    ks = np.zeros(1, dtype=np.int64)
    for _ in range(depth):
        ks = np.concatenate([3 * ks, 3 * ks + 2])
    return np.sort(ks) / float(3 ** depth)


def default_scales(points: np.ndarray, epsilon: float) -> tuple[float, ...]:
    """Dyadic snowflake scales 2**-k whose Euclidean boxes stay above the finest gap."""
    if points.size < 2:
        kmax = 10
    else:
        gap = float(np.min(np.diff(points)))
        kmax = max(4, int(math.floor(epsilon * math.log2(1.0 / gap))))
    return tuple(2.0 ** -k for k in range(1, kmax + 1))


def box_counts(points: np.ndarray, sizes: Sequence[float]) -> list[int]:
    """Occupied boxes of each Euclidean size on a grid anchored at the leftmost point."""
    shifted = points - points[0]
    return [int(np.unique(np.floor(shifted / s)).size) for s in sizes]


def snowflake_dimension(
    points, epsilon: float, scales: Sequence[float] | None = None
) -> BoxCountReport:
    """Box-counting dimension of ``points`` under the metric |x - y|**epsilon.

    A box of snowflake diameter delta is a Euclidean box of size
    delta**(1/epsilon).  The dimension is the least-squares slope of
    log N against log(1/delta).
    """
    pts = np.unique(np.asarray(points, dtype=float).ravel())
    if pts.size == 0:
        raise QDomainError("box counting needs at least one point")
    if not np.all(np.isfinite(pts)):
        raise QDomainError("points must be finite")
    if not 0.0 < epsilon <= 1.0:
        raise QDomainError(f"epsilon must lie in (0, 1], got {epsilon!r}")
    scales = default_scales(pts, epsilon) if scales is None else tuple(float(s) for s in scales)
    if len(scales) < 2:
        raise DegenerateFitError("at least two scales are needed for a fit")
    if any(s <= 0 for s in scales) or any(b >= a for a, b in zip(scales, scales[1:])):
        raise QDomainError("scales must be positive and strictly decreasing")
    counts = box_counts(pts, [s ** (1.0 / epsilon) for s in scales])
    if len(set(counts)) == 1:
        if pts.size == 1:
            return BoxCountReport(epsilon, scales, tuple(counts), 0.0, 0.0)
        raise DegenerateFitError(f"every scale gives {counts[0]} boxes; nothing to fit")
    x = np.log(1.0 / np.asarray(scales))
    y = np.log(np.asarray(counts, dtype=float))
    slope, intercept = np.polyfit(x, y, 1)
    residual = float(np.sqrt(np.mean((y - (slope * x + intercept)) ** 2)))
    return BoxCountReport(epsilon, scales, tuple(counts), float(slope), residual)
