"""Invariant suites run by ``qreals verify``.

Each suite returns a :class:`SuiteResult` made of named checks, with the
worst deviation observed and, on failure, the sample that produced it.
Randomised suites draw from ``numpy.random.default_rng(seed)`` only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from . import compat, core, entropy, metric, qint
from .core import QParam, QReal, deviation, tau
from .errors import NoWitnessError

SUITES = (
    "field",
    "homomorphism",
    "qint-exact",
    "erratum",
    "lobao",
    "borges",
    "entropy",
    "qs",
    "doubling",
    "snowflake",
)

MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class RunConfig:
    q: Fraction
    seed: int = 0
    samples: int = 1000
    tolerance: float | None = None
    output_format: str = "json"
    out: str | None = None

    def __post_init__(self) -> None:
        q = qint.as_fraction(self.q)
        if not 0 <= q <= 1:
            raise ValueError(f"q must lie in [0, 1], got {q}")
        object.__setattr__(self, "q", q)
        if not 0 <= self.seed <= MAX_SEED:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.samples < 1:
            raise ValueError(f"samples must be at least 1, got {self.samples}")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {self.tolerance}")
        if self.output_format not in ("json", "csv"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @property
    def param(self) -> QParam:
        return QParam(float(self.q))

    def tol(self, default: float) -> float:
        return default if self.tolerance is None else self.tolerance


@dataclass
class Check:
    name: str
    passed: bool
    max_deviation: float | None = None
    tolerance: float | None = None
    witness: object = None
    detail: str = ""

    def __post_init__(self) -> None:
        # numpy comparisons yield numpy bools, which json cannot encode
        self.passed = bool(self.passed)
        if self.max_deviation is not None:
            self.max_deviation = float(self.max_deviation)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "max_deviation": self.max_deviation,
            "tolerance": self.tolerance,
            "witness": None if self.passed else _jsonable(self.witness),
            "detail": self.detail,
        }


@dataclass
class SuiteResult:
    suite: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _jsonable(obj):
    if isinstance(obj, (tuple, list)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    return obj


def max_deviation_check(name: str, cases: Iterable, rtol: float) -> Check:
    """Worst :func:`core.deviation` over ``(witness, actual, expected)`` cases."""
    worst, witness = 0.0, None
    for w, actual, expected in cases:
        dev = deviation(actual, expected, rtol)
        if dev > worst or witness is None:
            worst, witness = dev, w
    return Check(name, worst <= rtol, worst, rtol, witness)


def exact_check(name: str, cases: Iterable) -> Check:
    """All ``(witness, actual, expected)`` cases must be equal exactly."""
    count = 0
    for w, actual, expected in cases:
        count += 1
        if actual != expected:
            return Check(name, False, None, 0.0, (w, actual, expected),
                         f"mismatch after {count} cases")
    return Check(name, True, 0.0, 0.0, detail=f"{count} cases")


def _preimages(rng, n: int, k: int, lo: float, hi: float) -> np.ndarray:
    return rng.uniform(lo, hi, size=(n, k))


def _from_value(p: QParam, x: float) -> QReal:
    """Element rebuilt from its value alone, so the pre-image is recovered numerically."""
    return QReal(p, tau(p, x).value)


def field_suite(cfg: RunConfig, q_values: Iterable[float] | None = None) -> SuiteResult:
    """Field axioms under the generalised operations, on seeded triples in [-10, 10]."""
    rtol = cfg.tol(1e-9)
    rng = np.random.default_rng(cfg.seed)
    result = SuiteResult("field")
    for qv in q_values if q_values is not None else [float(cfg.q)]:
        p = QParam(qv)
        tag = f"[q={p.q:g}]"
        triples = [tuple(_from_value(p, x) for x in row)
                   for row in _preimages(rng, cfg.samples, 3, -10.0, 10.0)]

        def cases(fn):
            for a, b, c in triples:
                lhs, rhs = fn(a, b, c)
                yield (a.value, b.value, c.value), lhs.value, rhs.value

        result.checks += [
            max_deviation_check(f"oplus associative {tag}", cases(
                lambda a, b, c: ((a + b) + c, a + (b + c))), rtol),
            max_deviation_check(f"oplus commutative {tag}", cases(
                lambda a, b, c: (a + b, b + a)), rtol),
            max_deviation_check(f"otimes associative {tag}", cases(
                lambda a, b, c: ((a * b) * c, a * (b * c))), rtol),
            max_deviation_check(f"otimes commutative {tag}", cases(
                lambda a, b, c: (a * b, b * a)), rtol),
            max_deviation_check(f"distributive {tag}", cases(
                lambda a, b, c: (a * (b + c), (a * b) + (a * c))), rtol),
            max_deviation_check(f"identities {tag}", cases(
                lambda a, b, c: (a + core.zero(p), a)), rtol),
            max_deviation_check(f"unit {tag}", cases(
                lambda a, b, c: (a * core.one(p), a)), rtol),
        ]
        involution = []
        for a, _, _ in triples:
            v = a.value
            once = -v / (1.0 + p.u * v)
            involution.append((v, -once / (1.0 + p.u * once), v))
        result.checks.append(max_deviation_check(f"neg involution {tag}", involution, 1e-12))

        round_trip_worst, rt_witness = 0.0, None
        for x in rng.uniform(-20.0, 20.0, size=cfg.samples).tolist():
            err = abs(core.tau_inv(p, tau(p, x).value) - x) / max(1.0, abs(x))
            if err > round_trip_worst or rt_witness is None:
                round_trip_worst, rt_witness = err, x
        result.checks.append(Check(f"round trip {tag}", round_trip_worst <= 1e-10,
                                   round_trip_worst, 1e-10, rt_witness))

        bad = None
        for a, b, _ in triples:
            order = core.q_compare(a, b)
            by_value = (a.value > b.value) - (a.value < b.value)
            by_pre = (a.preimage > b.preimage) - (a.preimage < b.preimage)
            if not int(order) == by_value == by_pre:
                bad = (a.value, b.value)
                break
        result.checks.append(Check(f"order agrees {tag}", bad is None, witness=bad))
    return result


def homomorphism_suite(cfg: RunConfig) -> SuiteResult:
    """The pre-image operations against the closed formulas on R_q values."""
    rtol = cfg.tol(1e-10)
    p = cfg.param
    u = p.u
    rng = np.random.default_rng(cfg.seed)
    pairs = _preimages(rng, cfg.samples, 2, -10.0, 10.0)
    vals = [(x, y, tau(p, x).value, tau(p, y).value) for x, y in pairs]
    result = SuiteResult("homomorphism")
    result.checks += [
        max_deviation_check("tau(x+y) = x_q + y_q + (1-q) x_q y_q", (
            ((x, y), tau(p, x + y).value, core.generalized_sum(p, a, b))
            for x, y, a, b in vals), rtol),
        max_deviation_check("tau(x-y) = (x_q - y_q) / (1 + (1-q) y_q)", (
            ((x, y), tau(p, x - y).value, (a - b) / (1.0 + u * b))
            for x, y, a, b in vals), rtol),
        max_deviation_check("tau(-x) = -x_q / (1 + (1-q) x_q)", (
            (x, tau(p, -x).value, -a / (1.0 + u * a)) for x, y, a, b in vals), rtol),
        max_deviation_check("tau(x*y) = otimes(x_q, y_q)", (
            ((x, y), tau(p, x * y).value, core.otimes(QReal(p, a), QReal(p, b)).value)
            for x, y, a, b in vals), rtol),
        max_deviation_check("tau(x*y) = lobao(x_q, y_q)", (
            ((x, y), tau(p, x * y).value, compat.lobao_diamond(p, a, b))
            for x, y, a, b in vals), rtol),
    ]
    return result


def qint_exact_suite(cfg: RunConfig, q_values: Iterable | None = None) -> SuiteResult:
    """Exact rational identities of the q-integers at each q."""
    result = SuiteResult("qint-exact")
    for q in q_values if q_values is not None else [cfg.q]:
        q = qint.as_fraction(q)
        tag = f"[q={q}]"
        closed = {n: qint.q_integer_closed(n, q) for n in range(-30, 901)}
        result.checks += [
            exact_check(f"recursion = closed form, n <= 40 {tag}", (
                (n, qint.q_integer_recursive(n, q), closed[n]) for n in range(1, 41))),
            exact_check(f"(n+m)_q = n_q (+) m_q, n, m <= 30 {tag}", (
                ((n, m), closed[n + m], qint.exact_oplus(closed[n], closed[m], q))
                for n in range(31) for m in range(31))),
            exact_check(f"formal product = (nm)_q, 2 <= n, m <= 30 {tag}", (
                ((n, m), qint.nu_inv(qint.formal_otimes(n, m), q), closed[n * m])
                for n in range(2, 31) for m in range(2, 31))),
            exact_check(f"formal product symmetric {tag}", (
                ((n, m), qint.formal_otimes(n, m), qint.formal_otimes(m, n))
                for n in range(2, 11) for m in range(2, 11))),
            exact_check(f"distributive on Z_q {tag}", (
                ((n, m, k),
                 qint.nu_inv(qint.formal_otimes(n, m + k), q),
                 qint.exact_oplus(qint.nu_inv(qint.formal_otimes(n, m), q),
                                  qint.nu_inv(qint.formal_otimes(n, k), q), q))
                for n in range(2, 9) for m in range(2, 9) for k in range(2, 9))),
            exact_check(f"opposite = (-n)_q and cancels {tag}", _opposite_cases(q, closed)),
            exact_check(f"characteristic zero, n <= 100 {tag}", _char_zero_cases(q)),
            exact_check(f"nu evaluates to n_q {tag}", (
                (n, qint.nu_inv(qint.nu(n), q), closed[n]) for n in range(1, 41))),
        ]
    return result


def _opposite_cases(q: Fraction, closed: dict):
    for n in range(31):
        opp = qint.q_opposite(n, q)
        yield n, opp, closed[-n]
        yield n, qint.exact_oplus(closed[n], opp, q), Fraction(0)


def _char_zero_cases(q: Fraction):
    acc = Fraction(0)
    for n in range(1, 101):
        acc = qint.exact_oplus(acc, Fraction(1), q)
        yield n, acc, qint.q_integer_closed(n, q)
        yield n, acc == 0, False


def erratum_suite(cfg: RunConfig) -> SuiteResult:
    """Passes only when the corrected forms agree and the printed closed form is caught."""
    rep = qint.erratum_report(cfg.q, 40)
    result = SuiteResult("erratum")
    result.checks.append(Check("corrected second-order recursion matches", rep.corrected_matches,
                               detail="n_q = (3-q)(n-1)_q - (2-q)(n-2)_q"))
    result.checks.append(Check(
        "corrected discriminant and roots", rep.discriminant == (1 - cfg.q) ** 2
        and set(rep.roots) == {2 - cfg.q, Fraction(1)},
        witness=[str(rep.discriminant), [str(r) for r in rep.roots]],
        detail=f"discriminant {rep.discriminant}, roots {rep.roots[0]}, {rep.roots[1]}"))
    result.checks.append(Check("corrected closed form matches", rep.closed_form_matches))
    row3 = rep.printed_rows[2]
    result.checks.append(Check(
        "printed closed form detected as divergent", rep.printed_divergent,
        witness=[row3.n, row3.printed, float(row3.true)],
        detail=(f"first divergence at n={rep.printed_first_divergence}; "
                f"n=3 printed {row3.printed!r} vs true {float(row3.true)!r}")))
    result.checks.append(Check(
        "plus-sign recursion detected as divergent",
        rep.printed_sign_first_divergence is not None,
        detail=f"first divergence at n={rep.printed_sign_first_divergence}"))
    return result


def lobao_suite(cfg: RunConfig) -> SuiteResult:
    p = cfg.param
    rtol = cfg.tol(1e-10)
    result = SuiteResult("lobao")
    scan = compat.equivalence_scan([p.q], cfg.samples, cfg.seed, tolerance=rtol)
    result.checks.append(Check("lobao = conjugated product (random)", scan.passed,
                               scan.overall_max, rtol, scan.witness))
    worst = compat.integer_equivalence(p, 20, rtol)
    result.checks.append(Check("lobao(n_q, m_q) = (nm)_q, n, m <= 20", worst <= rtol, worst, rtol))
    rng = np.random.default_rng([cfg.seed, 1])
    dist_tol = cfg.tol(1e-9)
    triples = _preimages(rng, cfg.samples, 3, -5.0, 5.0)
    worst, witness = 0.0, None
    for row in triples:
        x, y, z = (tau(p, v).value for v in row)
        lhs = compat.lobao_diamond(p, x, compat_sum(p, y, z))
        rhs = compat_sum(p, compat.lobao_diamond(p, x, y), compat.lobao_diamond(p, x, z))
        dev = deviation(lhs, rhs, dist_tol)
        if dev > worst or witness is None:
            worst, witness = dev, tuple(float(v) for v in row)
    result.checks.append(Check("lobao distributive", worst <= dist_tol, worst, dist_tol, witness))
    return result


def compat_sum(p: QParam, x: float, y: float) -> float:
    """Generalised sum of two R_q values through their pre-images."""
    return core.oplus(QReal(p, x), QReal(p, y)).value


def borges_suite(cfg: RunConfig) -> SuiteResult:
    p = cfg.param
    rtol = cfg.tol(1e-12)
    rng = np.random.default_rng([cfg.seed, 2])
    pairs = [(tau(p, a).value, tau(p, b).value)
             for a, b in _preimages(rng, cfg.samples, 2, 1e-3, 5.0)]
    # corrected product needs x**(1-q) + y**(1-q) > 1
    pairs = [(x, y) for x, y in pairs if p.is_classical or x ** p.u + y ** p.u > 1.0 + 1e-9]
    result = SuiteResult("borges")
    result.checks.append(max_deviation_check("ln_q additive under corrected product", (
        ((x, y), compat.ln_q(p, compat.borges_otimes(p, x, y)),
         compat.ln_q(p, x) + compat.ln_q(p, y)) for x, y in pairs), rtol))
    if p.is_classical:
        result.checks.append(Check("printed product defect is 1/(1-q)", True,
                                   detail="not applicable at q = 1"))
        try:
            compat.non_distributivity_witness(p)
            result.checks.append(Check("no distributivity defect at q = 1", False))
        except NoWitnessError:
            result.checks.append(Check("no distributivity defect at q = 1", True))
        return result
    result.checks.append(max_deviation_check("printed product defect is 1/(1-q)", (
        ((x, y), compat.ln_q(p, compat.borges_otimes(p, x, y, "printed"))
         - compat.ln_q(p, x) - compat.ln_q(p, y), 1.0 / p.u) for x, y in pairs), rtol))
    for variant in ("corrected", "printed"):
        try:
            w = compat.non_distributivity_witness(p, variant)
            result.checks.append(Check(f"borges ({variant}) not distributive", w.defect > 1e-3,
                                       w.defect, 1e-3, (w.x, w.y, w.z)))
            lob = compat.distributivity_defect(p, compat.lobao_diamond, w.x, w.y, w.z)
            result.checks.append(Check(f"lobao distributive on the {variant} witness",
                                       lob <= 1e-10, lob, 1e-10, (w.x, w.y, w.z)))
        except NoWitnessError as exc:
            result.checks.append(Check(f"borges ({variant}) not distributive", False,
                                       detail=str(exc)))
    return result


def entropy_suite(cfg: RunConfig, q_values: Iterable[float] | None = None) -> SuiteResult:
    result = SuiteResult("entropy")
    rng = np.random.default_rng([cfg.seed, 3])
    atol = cfg.tol(1e-12)
    for qv in q_values if q_values is not None else [float(cfg.q)]:
        p = QParam(qv)
        tag = f"[q={p.q:g}]"
        pairs = [(entropy.random_dist(rng, 8, zero_fraction=0.2),
                  entropy.random_dist(rng, 8, zero_fraction=0.2)) for _ in range(cfg.samples)]
        comps = [entropy.compose(p, a, b) for a, b in pairs]
        worst = max(c.defect for c in comps)
        k = max(range(len(comps)), key=lambda i: comps[i].defect)
        result.checks.append(Check(f"composition law {tag}", worst <= atol, worst, atol,
                                   [list(pairs[k][0]), list(pairs[k][1])]))
        sup = [(i, c.s_joint - (c.s_a + c.s_b)) for i, c in enumerate(comps)]
        bad = [i for i, gap in sup if gap < -atol]
        result.checks.append(Check(f"superadditive {tag}", not bad,
                                   witness=None if not bad else list(pairs[bad[0]][0])))
        neg_or_big = []
        for a, _ in pairs:
            s = entropy.tsallis_entropy(p, a)
            s_max = entropy.tsallis_entropy(p, entropy.DiscreteDist.uniform(len(a)))
            if s < -atol or s > s_max + atol:
                neg_or_big.append(list(a))
        result.checks.append(Check(f"0 <= S_q <= S_q(uniform) {tag}", not neg_or_big,
                                   witness=neg_or_big[:1] or None))
        result.checks.append(max_deviation_check(f"S_q(uniform W) = ln_q W {tag}", (
            (w, entropy.tsallis_entropy(p, entropy.DiscreteDist.uniform(w)),
             compat.ln_q(p, float(w))) for w in range(1, 65)), 1e-12))
        coin = entropy.DiscreteDist((0.5, 0.5))
        c = entropy.compose(p, coin, coin)
        result.checks.append(max_deviation_check(f"two fair coins {tag}", [
            ("S(A)", c.s_a, compat.ln_q(p, 2.0)),
            ("S(A+B)", c.s_joint, compat.ln_q(p, 4.0)),
        ], 1e-12))
    return result


def qs_suite(cfg: RunConfig) -> SuiteResult:
    p = cfg.param
    result = SuiteResult("qs")
    domain = metric.Interval(-10.0, 10.0)
    rep = metric.weak_qs_scan(p, domain, cfg.samples, cfg.seed, "q-distance")
    bound = 1.0 + 1e-12
    result.checks.append(Check("q-distance target weakly 1-quasisymmetric",
                               rep.max_ratio <= bound, rep.max_ratio, bound, rep.witness))
    if p.is_classical:
        rep = metric.weak_qs_scan(p, domain, cfg.samples, cfg.seed, "euclidean")
        result.checks.append(Check("euclidean target identity ratio <= 1",
                                   rep.max_ratio <= bound, rep.max_ratio, bound, rep.witness))
    else:
        for C in (10.0, 100.0, 1000.0):
            triple = metric.extremal_triple(p, C)
            ratio = metric.euclidean_ratio(p, *triple)
            result.checks.append(Check(f"euclidean target ratio exceeds {C:g}", ratio > C,
                                       ratio, C, triple,
                                       detail=f"triple (0, d, -d) with d = {triple[1]!r}"))
            d = metric.lipschitz_witness(p, C)
            g = tau(p, d).value / d
            result.checks.append(Check(f"not {C:g}-Lipschitz", g > C, g, C, d))
    rng = np.random.default_rng([cfg.seed, 4])
    bad, worst = None, 0.0
    for lo, hi, t in zip(*rng.uniform(-10.0, 10.0, size=(2, cfg.samples)),
                         rng.uniform(0.0, 1.0, size=cfg.samples)):
        a, c = min(lo, hi), max(lo, hi)
        b = a + t * (c - a)
        qa, qb, qc = tau(p, a), tau(p, b), tau(p, c)
        whole = core.q_dist(qa, qc).value
        parts = core.q_dist(qa, qb).value + core.q_dist(qb, qc).value
        gap = (parts - whole) / max(whole, 1e-12)
        if gap > worst:
            worst = gap
        if gap > 1e-12 and bad is None:
            bad = (float(a), float(b), float(c))
    result.checks.append(Check("q-distance reverse triangle inequality", bad is None,
                               worst, 1e-12, bad))
    return result


def doubling_suite(cfg: RunConfig) -> SuiteResult:
    p = cfg.param
    rtol = cfg.tol(1e-9)
    radii = np.linspace(0.05, 5.0, 100)
    centers = np.linspace(-5.0, 5.0, 11)
    result = SuiteResult("doubling")
    result.checks.append(max_deviation_check("centre independence", (
        ((float(x), float(r)), metric.doubling_ratio(p, x, r), metric.doubling_ratio(p, 0.0, r))
        for r in radii for x in centers), rtol))
    result.checks.append(max_deviation_check("closed form s^r + s^-r vs brute force", (
        ((float(x), float(r)), brute_force_doubling(p, x, r), metric.doubling_ratio_closed(p, r))
        for r in radii for x in centers), rtol))
    ratios = [metric.doubling_ratio(p, 0.0, r) for r in radii]
    if p.is_classical:
        ok = all(abs(v - 2.0) <= 1e-12 for v in ratios)
        result.checks.append(Check("Lebesgue doubling constant 2", ok, max(ratios), 2.0))
    else:
        ok = all(b > a for a, b in zip(ratios, ratios[1:]))
        result.checks.append(Check("doubling ratio strictly increasing in r", ok,
                                   detail=f"sup over r <= 5 is {ratios[-1]!r}"))
    rng = np.random.default_rng([cfg.seed, 5])
    pts = np.sort(rng.uniform(-5.0, 5.0, size=(cfg.samples, 3)), axis=1)
    result.checks.append(max_deviation_check("measure additive", (
        (tuple(map(float, (a, b, c))),
         metric.pullback_measure(p, metric.Interval(a, b))
         + metric.pullback_measure(p, metric.Interval(b, c)),
         metric.pullback_measure(p, metric.Interval(a, c)))
        for a, b, c in pts if a < b < c), 1e-12))
    return result


def brute_force_doubling(p: QParam, x: float, r: float) -> float:
    """Doubling ratio from the plain power form of tau, with no rewriting."""
    if p.is_classical:
        return 4.0 * r / (2.0 * r)
    s, u = p.s, p.u

    def f(t):
        return (s ** t - 1.0) / u

    return (f(x + 2 * r) - f(x - 2 * r)) / (f(x + r) - f(x - r))


LN2_LN3 = math.log(2.0) / math.log(3.0)


def snowflake_suite(cfg: RunConfig, depth: int = 10) -> SuiteResult:
    pts = metric.cantor_points(depth)
    result = SuiteResult("snowflake")
    for eps in (1.0, 0.5):
        rep = metric.snowflake_dimension(pts, eps)
        target = LN2_LN3 / eps
        rel = abs(rep.dimension - target) / target
        result.checks.append(Check(f"box-count dimension at epsilon={eps:g}", rel <= 0.05,
                                   rel, 0.05, rep.dimension,
                                   detail=f"estimate {rep.dimension!r} vs {target!r}"))
        mono = all(b >= a for a, b in zip(rep.counts, rep.counts[1:]))
        result.checks.append(Check(f"counts nondecreasing at epsilon={eps:g}", mono,
                                   witness=list(rep.counts)))
    return result


RUNNERS: dict[str, Callable[[RunConfig], SuiteResult]] = {
    "field": field_suite,
    "homomorphism": homomorphism_suite,
    "qint-exact": qint_exact_suite,
    "erratum": erratum_suite,
    "lobao": lobao_suite,
    "borges": borges_suite,
    "entropy": entropy_suite,
    "qs": qs_suite,
    "doubling": doubling_suite,
    "snowflake": snowflake_suite,
}


def run(suite: str, cfg: RunConfig) -> list[SuiteResult]:
    if suite == "all":
        return [RUNNERS[name](cfg) for name in SUITES]
    if suite not in RUNNERS:
        raise KeyError(suite)
    return [RUNNERS[suite](cfg)]
