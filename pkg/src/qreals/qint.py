"""Exact q-integers, q-rationals and the polynomial construction of the product.

Everything here runs on :class:`fractions.Fraction` and Python integers, so
the results serve as an exact oracle for the floating layer in
:mod:`qreals.core`.  Polynomials are in the indeterminate ``u = 1 - q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .core import ParamLike, as_param, tau
from .errors import QDomainError, QZeroDivisionError


def as_fraction(q) -> Fraction:
    """Coerce ``q`` to an exact rational; strings such as ``"1/2"`` are accepted."""
    if isinstance(q, Fraction):
        return q
    if isinstance(q, (Rational, str)):
        return Fraction(q)
    if isinstance(q, float):
        return Fraction(q)
    raise TypeError(f"cannot interpret {q!r} as an exact rational")


def _exact_q(q) -> Fraction:
    q = as_fraction(q)
    if not 0 <= q <= 1:
        raise QDomainError(f"q must lie in [0, 1], got {q}")
    return q


def exact_oplus(x: Fraction, y: Fraction, q) -> Fraction:
    q = _exact_q(q)
    return x + y + (1 - q) * x * y


def exact_oplus_inverse(x: Fraction, q) -> Fraction:
    """The opposite -x / (1 + (1 - q) x) in exact arithmetic."""
    q = _exact_q(q)
    return -x / (1 + (1 - q) * x)


def q_integer_recursive(n: int, q) -> Fraction:
    """n_q from the first-order recursion n_q = (2 - q)(n-1)_q + 1, 1_q = 1."""
    if n < 1:
        raise QDomainError(f"the recursion starts at n = 1, got {n}")
    q = _exact_q(q)
    value = Fraction(1)
    for _ in range(n - 1):
        value = (2 - q) * value + 1
    return value


def q_integer_closed(n: int, q) -> Fraction:
    """n_q = ((2 - q)**n - 1) / (1 - q), with the limit n at q = 1."""
    q = _exact_q(q)
    if q == 1:
        return Fraction(n)
    return ((2 - q) ** n - 1) / (1 - q)


def q_opposite(n: int, q) -> Fraction:
    """(-n)_q = -n_q / (2 - q)**n."""
    if n < 0:
        raise QDomainError(f"q_opposite expects n >= 0, got {n}")
    q = _exact_q(q)
    return -q_integer_closed(n, q) / (2 - q) ** n


def q_inverse(n: int, p: ParamLike) -> float:
    """(1/n)_q = ((2 - q)**(1/n) - 1) / (1 - q)."""
    if n == 0:
        raise QZeroDivisionError("0_q has no multiplicative inverse")
    return tau(as_param(p), 1.0 / n).value


def q_rational(n: int, m: int, p: ParamLike) -> float:
    """(n/m)_q = ((2 - q)**(n/m) - 1) / (1 - q)."""
    if m == 0:
        raise QZeroDivisionError("q-rational with zero denominator")
    return tau(as_param(p), float(Fraction(n, m))).value


@dataclass(frozen=True)
class QRational:
    """The element (n/m)_q, kept as a reduced fraction with positive denominator."""

    numerator: int
    denominator: int = 1

    def __post_init__(self) -> None:
        if self.denominator == 0:
            raise QZeroDivisionError("q-rational with zero denominator")
        r = Fraction(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", r.numerator)
        object.__setattr__(self, "denominator", r.denominator)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def value(self, p: ParamLike) -> float:
        return q_rational(self.numerator, self.denominator, p)

    def exact_value(self, q) -> Fraction:
        """Exact value; only available for integer elements."""
        if self.denominator != 1:
            raise QDomainError(f"({self.fraction})_q is irrational in general")
        return q_integer_closed(self.numerator, q)


@dataclass(frozen=True)
class UPoly:
    """Polynomial in ``u = 1 - q`` with integer coefficients, lowest degree first."""

    coefficients: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        coeffs = [int(c) for c in self.coefficients]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        object.__setattr__(self, "coefficients", tuple(coeffs))

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int]) -> "UPoly":
        return cls(tuple(coeffs))

    @property
    def degree(self) -> int:
        """Degree of the polynomial; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    def is_zero(self) -> bool:
        return not self.coefficients

    def __getitem__(self, k: int) -> int:
        if k < 0:
            raise IndexError("negative exponent")
        return self.coefficients[k] if k < len(self.coefficients) else 0

    def __add__(self, other: "UPoly") -> "UPoly":
        n = max(len(self.coefficients), len(other.coefficients))
        return UPoly(tuple(self[k] + other[k] for k in range(n)))

    def __mul__(self, other: "UPoly") -> "UPoly":
        if self.is_zero() or other.is_zero():
            return UPoly()
        out = [0] * (len(self.coefficients) + len(other.coefficients) - 1)
        for i, a in enumerate(self.coefficients):
            for j, b in enumerate(other.coefficients):
                out[i + j] += a * b
        return UPoly(tuple(out))

    def evaluate(self, u) -> Fraction:
        """Horner evaluation at an exact rational ``u``."""
        u = as_fraction(u)
        a, b = u.numerator, u.denominator
        # integer Horner on sum c_k a**k b**(d-k), divided once by b**d
        acc, bpow = 0, 1
        for c in reversed(self.coefficients):
            acc = acc * a + c * bpow
            bpow *= b
        return Fraction(acc, bpow // b) if self.coefficients else Fraction(0)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coefficients[k]
            if c == 0:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                base = "u" if k == 1 else f"u^{k}"
                terms.append(base if c == 1 else f"{c}*{base}")
        return " + ".join(terms)


@dataclass(frozen=True)
class Monomial:
    """``coefficient * u**degree`` with exact rational coefficient and degree."""

    coefficient: Fraction
    degree: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "coefficient", as_fraction(self.coefficient))
        object.__setattr__(self, "degree", as_fraction(self.degree))

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(self.coefficient * other.coefficient, self.degree + other.degree)

    def __pow__(self, exponent) -> "Monomial":
        exponent = as_fraction(exponent)
        if exponent.denominator == 1:
            coeff = self.coefficient ** int(exponent)
        elif self.coefficient == 1:
            coeff = Fraction(1)
        else:
            raise QDomainError(
                f"fractional power {exponent} of a non-unit coefficient is not exact"
            )
        return Monomial(coeff, self.degree * exponent)

    def as_poly(self) -> UPoly:
        if self.coefficient.denominator != 1 or self.degree.denominator != 1 or self.degree < 0:
            raise QDomainError(f"{self} is not an integer polynomial")
        d = int(self.degree)
        return UPoly((0,) * d + (int(self.coefficient),))

    def __str__(self) -> str:
        return f"{self.coefficient}*u^{self.degree}"


def nu(n: int) -> UPoly:
    """Binomial expansion of n_q: coefficient of u**(n-1-k) is C(n, k)."""
    if n < 1:
        raise QDomainError(f"the polynomial expansion needs n >= 1, got {n}")
    row, c = [], 1
    for k in range(n):
        row.append(c)
        c = c * (n - k) // (k + 1)
    return UPoly(tuple(reversed(row)))


def nu_inv(poly: UPoly, q) -> Fraction:
    """Evaluate a polynomial in ``u`` at ``u = 1 - q``."""
    return poly.evaluate(1 - _exact_q(q))


def pi_project(poly: UPoly) -> Monomial:
    """Highest-degree monomial of ``poly``."""
    if poly.is_zero():
        raise QDomainError("the zero polynomial has no leading monomial")
    return Monomial(Fraction(poly.coefficients[-1]), Fraction(poly.degree))


def sigma_complete(m: Monomial) -> UPoly:
    """Complete the monomial u**d to the full expansion of (d + 1)_q."""
    if m.coefficient != 1:
        raise QDomainError(f"completion needs a unit coefficient, got {m.coefficient}")
    if m.degree.denominator != 1 or m.degree < 0:
        raise QDomainError(f"completion needs a non-negative integer degree, got {m.degree}")
    return nu(int(m.degree) + 1)


def formal_otimes(n: int, m: int) -> UPoly:
    """Product of n_q and m_q through the project/complete construction.

    Each leading monomial u**(k-1) is raised to 1/(k-1), the results are
    multiplied and raised to (nm - 1)/2, and the resulting monomial is
    completed.  The outcome is nu(n*m).
    """
    if n < 2 or m < 2:
        raise QDomainError(f"formal_otimes needs n, m >= 2, got ({n}, {m})")
    lead_n = pi_project(nu(n)) ** Fraction(1, n - 1)
    lead_m = pi_project(nu(m)) ** Fraction(1, m - 1)
    return sigma_complete((lead_n * lead_m) ** Fraction(n * m - 1, 2))


def _exact_sqrt(x: Fraction) -> Fraction | float:
    """Exact square root when ``x`` is a rational square, else a float."""
    if x >= 0:
        rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
        if rn * rn == x.numerator and rd * rd == x.denominator:
            return Fraction(rn, rd)
    return math.sqrt(x)


@dataclass(frozen=True)
class PrintedRow:
    n: int
    printed: float
    true: Fraction
    diverges: bool


@dataclass(frozen=True)
class ErratumReport:
    """Outcome of checking the second-order recursion and its closed form."""

    q: Fraction
    n_max: int
    corrected_recursion: tuple[Fraction, ...]
    corrected_matches: bool
    discriminant: Fraction
    roots: tuple[Fraction, Fraction]
    closed_form_matches: bool
    printed_sign_values: tuple[Fraction, ...]
    printed_sign_first_divergence: int | None
    printed_discriminant: Fraction
    printed_rows: tuple[PrintedRow, ...]
    printed_first_divergence: int | None

    @property
    def corrected_consistent(self) -> bool:
        return self.corrected_matches and self.closed_form_matches

    @property
    def printed_divergent(self) -> bool:
        return self.printed_first_divergence is not None

    def to_dict(self) -> dict:
        return {
            "q": str(self.q),
            "n_max": self.n_max,
            "corrected_matches": self.corrected_matches,
            "discriminant": str(self.discriminant),
            "roots": [str(r) for r in self.roots],
            "closed_form_matches": self.closed_form_matches,
            "printed_sign_first_divergence": self.printed_sign_first_divergence,
            "printed_discriminant": str(self.printed_discriminant),
            "printed_first_divergence": self.printed_first_divergence,
            "printed_rows": [
                {"n": r.n, "printed": r.printed, "true": float(r.true), "diverges": r.diverges}
                for r in self.printed_rows
            ],
        }


def _second_order(q: Fraction, n_max: int, sign: int) -> list[Fraction]:
    values = [Fraction(1), 3 - q]
    while len(values) < n_max:
        values.append((3 - q) * values[-1] + sign * (2 - q) * values[-2])
    return values[:n_max]


def erratum_report(q, n_max: int, rel_tol: float = 1e-12) -> ErratumReport:
    """Check the homogeneous recursion and closed forms against the first-order one.

    The recursion n_q = (3 - q)(n-1)_q - (2 - q)(n-2)_q follows from
    subtracting consecutive first-order steps; its characteristic roots are
    2 - q and 1 with discriminant (1 - q)**2.  The variant with a plus sign
    and the closed form built on sqrt(4 + (2 - q)**2) are evaluated for
    comparison and flagged where they depart from the true n_q.
    """
    q = _exact_q(q)
    if n_max < 3:
        raise QDomainError(f"n_max must be at least 3, got {n_max}")
    truth = [q_integer_recursive(n, q) for n in range(1, n_max + 1)]

    corrected = _second_order(q, n_max, -1)
    corrected_matches = corrected == truth

    a, b, c = Fraction(1), -(3 - q), 2 - q
    disc = b * b - 4 * a * c
    root = _exact_sqrt(disc)
    roots = ((-b + root) / 2, (-b - root) / 2)
    if q == 1:
        # Double root 1: general solution (c1 + c2 n) * 1**n, fitted to 1_q, 2_q.
        closed = [Fraction(n) for n in range(1, n_max + 1)]
    else:
        c1, c2 = 1 / (1 - q), -1 / (1 - q)
        closed = [c1 * roots[0] ** n + c2 * roots[1] ** n for n in range(1, n_max + 1)]
    closed_form_matches = closed == truth and closed == [
        q_integer_closed(n, q) for n in range(1, n_max + 1)
    ]

    plus = _second_order(q, n_max, +1)
    plus_div = next((n for n, (x, t) in enumerate(zip(plus, truth), 1) if x != t), None)

    printed_disc = 4 + (2 - q) ** 2
    sq = _exact_sqrt(printed_disc)
    r1, r2 = (3 - q + sq) / 2, (3 - q - sq) / 2
    rows = []
    for n, t in enumerate(truth, 1):
        val = float((r1 ** n + r2 ** n) / sq)
        rows.append(PrintedRow(n, val, t, abs(val - float(t)) > rel_tol * abs(float(t))))
    printed_div = next((r.n for r in rows if r.diverges), None)

    return ErratumReport(
        q=q,
        n_max=n_max,
        corrected_recursion=tuple(corrected),
        corrected_matches=corrected_matches,
        discriminant=disc,
        roots=roots,
        closed_form_matches=closed_form_matches,
        printed_sign_values=tuple(plus),
        printed_sign_first_divergence=plus_div,
        printed_discriminant=printed_disc,
        printed_rows=tuple(rows),
        printed_first_divergence=printed_div,
    )
