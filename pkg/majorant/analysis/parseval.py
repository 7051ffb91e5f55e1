"""Exact endpoint identities via Parseval.

For ρ <= k+1 the powers F±^ρ of F± = 1 + e(x) ± e((k+2)x) have pairwise
distinct exponents, so ∫_0^{1/2} G±^ρ = ½ Σ a±(ν)² with a±(ν) depending on
the sign only through (±1)^μ. Hence d(k) = d(k+1) = 0.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from majorant.analysis.bounds import BoundLedger, build_ledger, fourth_derivative_bound
from majorant.analysis.quadrature import integrate
from majorant.analysis.trig_core import integrand_pair
from majorant.config import FLOAT_GUARD
from majorant.models import HSpec, PolyFamily, QuadResult

logger = logging.getLogger(__name__)

CROSS_CHECK_NODES = 100


class ParsevalError(ValueError):
    """Raised for powers outside the range where the coefficient formula holds."""


@dataclass(frozen=True)
class CoeffVector:
    """Integer coefficients of F^ρ, indexed by ν = 0..ρ(k+2)."""

    family: PolyFamily
    rho: int
    coeffs: tuple[int, ...]

    def sum_of_squares(self) -> int:
        return sum(c * c for c in self.coeffs)


def _check_rho(fam: PolyFamily, rho: int) -> None:
    if not 1 <= rho <= fam.k + 1:
        raise ParsevalError(f"rho must lie in 1..{fam.k + 1} for k={fam.k}, got {rho}")


def fourier_coeffs(fam: PolyFamily, rho: int) -> CoeffVector:
    """a(ν) = (±1)^μ C(ρ, μ) C(ρ-μ, λ) with ν = μ(k+2) + λ."""
    _check_rho(fam, rho)
    q = fam.k + 2
    coeffs = []
    for nu in range(rho * q + 1):
        mu, lam = divmod(nu, q)
        coeffs.append(fam.sign.factor**mu * math.comb(rho, mu) * math.comb(rho - mu, lam))
    return CoeffVector(family=fam, rho=rho, coeffs=tuple(coeffs))


def _convolve(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def convolution_coeffs(fam: PolyFamily, rho: int) -> tuple[int, ...]:
    """Coefficients of F^ρ by repeated multiplication (any ρ >= 1)."""
    if rho < 1:
        raise ParsevalError(f"rho must be positive, got {rho}")
    base = [1, 1] + [0] * fam.k + [fam.sign.factor]
    result = [1]
    for _ in range(rho):
        result = _convolve(result, base)
    return tuple(result)


def power_integral(fam: PolyFamily, rho: int) -> Fraction:
    """Exact ∫_0^{1/2} G^ρ."""
    return Fraction(fourier_coeffs(fam, rho).sum_of_squares(), 2)


def power_coeffs(fam: PolyFamily, rho: int) -> dict[int, int]:
    """Fourier coefficients c_d (d >= 0) of G^ρ = |F^ρ|²; c_{-d} = c_d."""
    a = convolution_coeffs(fam, rho)
    size = len(a)
    return {d: sum(a[i + d] * a[i] for i in range(size - d)) for d in range(size)}


def spectral_fourth_bound(fam: PolyFamily, rho: int) -> float:
    """sup |(G^ρ)^IV| <= Σ_ν |c_ν| (2π|ν|)^4."""
    c = power_coeffs(fam, rho)
    return 2.0 * sum(abs(cd) * (2 * math.pi * d) ** 4 for d, cd in c.items() if d)


@dataclass
class EndpointRow:
    rho: int
    exact_plus: Fraction
    exact_minus: Fraction
    quad_plus: QuadResult
    quad_minus: QuadResult

    @property
    def exact_equal(self) -> bool:
        return self.exact_plus == self.exact_minus

    def _within(self, quad: QuadResult, exact: Fraction) -> bool:
        return abs(quad.value - float(exact)) <= quad.error_bound * (1 + FLOAT_GUARD)

    @property
    def cross_checked(self) -> bool:
        return self._within(self.quad_plus, self.exact_plus) and self._within(
            self.quad_minus, self.exact_minus
        )

    def to_dict(self) -> dict:
        return {
            "rho": self.rho,
            "exact": f"{self.exact_plus.numerator}/{self.exact_plus.denominator}",
            "exact_equal": self.exact_equal,
            "quad_plus": self.quad_plus.value,
            "quad_minus": self.quad_minus.value,
            "quad_error": max(self.quad_plus.error_bound, self.quad_minus.error_bound),
            "cross_checked": self.cross_checked,
        }


@dataclass
class EndpointCheck:
    k: int
    rows: list[EndpointRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.rows) and all(r.exact_equal and r.cross_checked for r in self.rows)

    @property
    def worst_slack(self) -> float:
        """Smallest (error bound − |quadrature − exact|) over all rows."""
        slacks = []
        for row in self.rows:
            for quad, exact in ((row.quad_plus, row.exact_plus), (row.quad_minus, row.exact_minus)):
                slacks.append(quad.error_bound - abs(quad.value - float(exact)))
        return min(slacks)


def _cross_check(
    fam: PolyFamily, rho: int, ledger: BoundLedger | None, nodes: int
) -> QuadResult:
    if rho >= 3 and ledger is not None:
        fourth = fourth_derivative_bound(fam, float(rho), 0, ledger)
    else:
        fourth = spectral_fourth_bound(fam, rho)
    f, f2 = integrand_pair(fam, HSpec(t=float(rho), j=0))
    return integrate(f, f2, fourth, nodes)


def endpoint_check(
    k: int, ledger: BoundLedger | None = None, nodes: int = CROSS_CHECK_NODES
) -> EndpointCheck:
    """Verify ∫G+^ρ = ∫G-^ρ exactly for ρ = k, k+1 and cross-check by quadrature."""
    if k < 1:
        raise ParsevalError(f"k must be >= 1, got {k}")
    if ledger is None and k >= 3:
        ledger = build_ledger(k)

    plus, minus = PolyFamily.pair(k)
    check = EndpointCheck(k=k)
    for rho in (k, k + 1):
        row = EndpointRow(
            rho=rho,
            exact_plus=power_integral(plus, rho),
            exact_minus=power_integral(minus, rho),
            quad_plus=_cross_check(plus, rho, ledger, nodes),
            quad_minus=_cross_check(minus, rho, ledger, nodes),
        )
        logger.debug(f"k={k}, rho={rho}: exact {row.exact_plus}, quad {row.quad_plus.value:.12f}")
        check.rows.append(row)
    return check
