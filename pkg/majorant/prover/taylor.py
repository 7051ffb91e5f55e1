"""Approximate Taylor models of a high derivative of d and their sign certificates.

d(t) = ∫_0^{1/2} G-^t - ∫_0^{1/2} G+^t, so d^(j)(t) = ∫ H_{t,j,-} - ∫ H_{t,j,+}.

A model of d^(r) around t0 stores d̄_j ≈ d^(j+r)(t0), j = 0..n, and the
budgets δ_j with |d^(j+r)(t0) - d̄_j|·radius^j/j! < δ_j, plus a Lagrange
remainder budget. Then d^(r)(t) < P_n(t) + δ on [t0 - radius, t0 + radius].
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from enum import Enum

from numpy.polynomial import Polynomial

from majorant.analysis.bounds import (
    G_MAX,
    LOG9,
    BoundLedger,
    build_ledger,
    fourth_derivative_bound,
    sigma_zero,
)
from majorant.analysis.quadrature import (
    guarded_less,
    integrate,
    min_steps,
    planned_nodes,
)
from majorant.analysis.trig_core import integrand_pair
from majorant.config import DEFAULT_MAX_NODES, FLOAT_GUARD
from majorant.models import HSpec, PolyFamily, QuadResult, Sign

logger = logging.getLogger(__name__)


class TaylorError(Exception):
    """Base class for Taylor-model errors."""


class BudgetError(TaylorError):
    """Raised when error budgets are invalid or cannot be met."""


class PlanningError(TaylorError):
    """Raised when a coefficient would need more quadrature nodes than allowed."""


class CertificationError(TaylorError):
    """Raised when a sign-chain inequality fails."""

    def __init__(self, message: str, order: int | None = None, value: float | None = None):
        super().__init__(message)
        self.order = order
        self.value = value


# ---------------------------------------------------------------------------
# Derivatives of d


@dataclass(frozen=True)
class DerivativeEstimate:
    """Quadrature value of d^(j)(t) with its certified error."""

    t: float
    order: int
    value: float
    error: float
    minus: QuadResult
    plus: QuadResult

    @property
    def nodes(self) -> int:
        return self.minus.nodes


def _ledger(k: int, ledger: BoundLedger | None) -> BoundLedger:
    return ledger if ledger is not None else build_ledger(k)


def fourth_bound_for(k: int, t: float, j: int, ledger: BoundLedger) -> float:
    """sup |H^IV_{t,j,±}| over both signs."""
    return max(fourth_derivative_bound(fam, t, j, ledger) for fam in PolyFamily.pair(k))


def d_derivative(
    k: int, t: float, j: int, N: int, ledger: BoundLedger | None = None
) -> DerivativeEstimate:
    """d^(j)(t) = ∫H_{t,j,-} - ∫H_{t,j,+} with N-node quadrature."""
    ledger = _ledger(k, ledger)
    spec = HSpec(t=t, j=j)
    results: dict[Sign, QuadResult] = {}
    for fam in PolyFamily.pair(k):
        f, f2 = integrand_pair(fam, spec)
        results[fam.sign] = integrate(f, f2, fourth_derivative_bound(fam, t, j, ledger), N)

    minus, plus = results[Sign.MINUS], results[Sign.PLUS]
    estimate = DerivativeEstimate(
        t=t,
        order=j,
        value=minus.value - plus.value,
        error=minus.error_bound + plus.error_bound,
        minus=minus,
        plus=plus,
    )
    logger.debug(f"d^({j})({t}) ~ {estimate.value:.10f} +- {estimate.error:.3e} (N={N})")
    return estimate


# ---------------------------------------------------------------------------
# Low-order positivity


@dataclass
class PositivityResult:
    k: int
    t: float
    order: int
    delta: float
    fourth_bound: float
    planned_nodes: int
    nodes: int
    estimate: DerivativeEstimate
    passed: bool

    @property
    def margin(self) -> float:
        return self.estimate.value - 2 * self.delta


def positivity_lemma(
    k: int,
    t: float,
    j: int,
    delta: float,
    nodes: int | None = None,
    ledger: BoundLedger | None = None,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> PositivityResult:
    """Check d^(j)(t) > 0 via value - 2δ > 0, each integral within δ."""
    if delta <= 0:
        raise BudgetError(f"delta must be positive, got {delta}")
    ledger = _ledger(k, ledger)

    fourth = fourth_bound_for(k, t, j, ledger)
    planned = min_steps(fourth, delta, max_nodes)
    N = max(planned, nodes or planned)
    if N > max_nodes:
        if nodes is None or nodes <= max_nodes:
            N = max_nodes
        logger.warning(f"d^({j})({t}): {planned} nodes planned, using {N} (cap {max_nodes})")

    estimate = d_derivative(k, t, j, N, ledger)
    within = all(
        guarded_less(q.error_bound, delta) for q in (estimate.minus, estimate.plus)
    )
    passed = within and guarded_less(2 * delta, estimate.value)

    result = PositivityResult(
        k=k, t=t, order=j, delta=delta, fourth_bound=fourth,
        planned_nodes=planned, nodes=N, estimate=estimate, passed=passed,
    )
    if not passed:
        logger.error(
            f"d^({j})({t}) > 0 not certified: value {estimate.value:.9f}, 2δ = {2 * delta}, "
            f"errors within budget: {within}"
        )
    return result


# ---------------------------------------------------------------------------
# Remainder


def remainder_bound(k: int, r: int, t0: float, radius: float, n: int) -> float:
    """Lagrange remainder bound for the degree-n model of d^(r) around t0.

    |R_n| <= ½(sup‖H_{ξ,m,+}‖∞ + sup‖H_{ξ,m,-}‖∞)·radius^(n+1)/(n+1)!, m = n+r+1,
    with ξ over [t0 - radius, t0 + radius] and ‖H‖∞ <= max_{[0,9]} v^ξ |log v|^m.
    """
    m = n + r + 1
    xi_lo, xi_hi = t0 - radius, t0 + radius
    if xi_lo <= 0 or radius <= 0 or n < 0:
        raise BudgetError(f"Invalid remainder parameters t0={t0}, radius={radius}, n={n}")
    if m / xi_lo > 1 / sigma_zero():
        raise BudgetError(
            f"m/xi = {m / xi_lo:.3f} exceeds 1/sigma0 = {1 / sigma_zero():.3f}; "
            f"the endpoint maximum no longer dominates (k={k}, n={n})"
        )

    # v^ξ|log v|^m peaks at v = 9 for the largest ξ, or at exp(-m/ξ) for the smallest
    sup = max((m / (math.e * xi_lo)) ** m, G_MAX**xi_hi * LOG9**m)
    return sup * radius ** (n + 1) / math.factorial(n + 1)


# ---------------------------------------------------------------------------
# Models


@dataclass(frozen=True)
class CoefficientPlan:
    j: int
    fourth_bound: float
    delta: float
    eta: float
    planned: float
    nodes: int
    value: float
    error: float


@dataclass
class TaylorModel:
    k: int
    order: int
    center: float
    radius: float
    degree: int
    coeffs: tuple[float, ...]
    budgets: tuple[float, ...]
    remainder: float
    total: float
    plans: tuple[CoefficientPlan, ...] = field(default_factory=tuple)

    @property
    def interval(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius

    @property
    def budget_sum(self) -> float:
        return math.fsum(self.budgets) + self.remainder

    @property
    def polynomial(self) -> Polynomial:
        """P_n in the shifted variable s = t - t0."""
        return Polynomial([c / math.factorial(j) for j, c in enumerate(self.coeffs)])

    def evaluate(self, t: float, derivative: int = 0) -> float:
        return float(self.polynomial.deriv(derivative)(t - self.center))

    def table(self) -> list[dict]:
        return [
            {
                "j": p.j,
                "fourth_bound": p.fourth_bound,
                "delta": p.delta,
                "eta": p.eta,
                "n_star": p.planned,
                "nodes": p.nodes,
                "d_bar": p.value,
                "error": p.error,
            }
            for p in self.plans
        ]

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "order": self.order,
            "center": self.center,
            "radius": self.radius,
            "degree": self.degree,
            "total": self.total,
            "remainder": self.remainder,
            "budget_sum": self.budget_sum,
            "rows": self.table(),
        }


def build_taylor_model(
    k: int,
    r: int,
    t0: float,
    radius: float,
    n: int,
    budgets: list[float],
    total: float,
    ledger: BoundLedger | None = None,
    nodes: int = DEFAULT_MAX_NODES,
    max_nodes: int = DEFAULT_MAX_NODES,
) -> TaylorModel:
    """Compute d̄_j ≈ d^(j+r)(t0), j = 0..n, under the given budgets."""
    if len(budgets) != n + 1:
        raise BudgetError(f"Need {n + 1} coefficient budgets, got {len(budgets)}")
    if any(b <= 0 for b in budgets) or total <= 0:
        raise BudgetError("Budgets must be positive")

    remainder = remainder_bound(k, r, t0, radius, n)
    spent = math.fsum(budgets) + remainder
    if not guarded_less(spent, total):
        raise BudgetError(
            f"Budgets {math.fsum(budgets):.6g} + remainder {remainder:.6g} >= total {total}"
        )

    ledger = _ledger(k, ledger)
    plans = []
    for j, delta in enumerate(budgets):
        order = j + r
        fourth = fourth_bound_for(k, t0, order, ledger)
        # each of the two integrals gets half of the scaled budget
        eta = delta * radius ** (-j) * math.factorial(j) / 2
        needed = min_steps(fourth, eta, max_nodes)
        if needed > max_nodes:
            raise PlanningError(
                f"Coefficient j={j} at t0={t0} needs {needed} nodes (cap {max_nodes})"
            )
        used = max(nodes, needed)
        estimate = d_derivative(k, t0, order, used, ledger)

        scaled_error = estimate.error * radius**j / math.factorial(j)
        if not guarded_less(scaled_error, delta):
            raise BudgetError(f"Coefficient j={j}: scaled error {scaled_error:.3e} >= {delta}")

        plans.append(CoefficientPlan(
            j=j,
            fourth_bound=fourth,
            delta=delta,
            eta=eta,
            planned=planned_nodes(fourth, eta),
            nodes=used,
            value=estimate.value,
            error=estimate.error,
        ))
        logger.debug(f"t0={t0} j={j}: d_bar={estimate.value:.10g}, N*={plans[-1].planned:.1f}")

    return TaylorModel(
        k=k,
        order=r,
        center=t0,
        radius=radius,
        degree=n,
        coeffs=tuple(p.value for p in plans),
        budgets=tuple(budgets),
        remainder=remainder,
        total=total,
        plans=tuple(plans),
    )


# ---------------------------------------------------------------------------
# Sign chains


class TailKind(str, Enum):
    CONSTANT_NEGATIVE = "constant_negative"
    PARABOLA_NEGATIVE_DEFINITE = "parabola_negative_definite"


@dataclass(frozen=True)
class SignChainCertificate:
    """p = P_n + δ is negative on [a, b].

    All listed p^(i)(a) are negative and the tail derivative p^(tail_order)
    is negative on the whole line, so each lower derivative decreases from a
    negative value at a.
    """

    left: float
    right: float
    values: tuple[float, ...]
    tail_kind: TailKind
    tail_order: int
    leading: float
    discriminant: float | None = None
    delta: float = 0.0

    def to_dict(self) -> dict:
        return {
            "left": self.left,
            "right": self.right,
            "values": list(self.values),
            "tail_kind": self.tail_kind.value,
            "tail_order": self.tail_order,
            "leading": self.leading,
            "discriminant": self.discriminant,
            "delta": self.delta,
        }


def _negative(value: float) -> bool:
    return value + FLOAT_GUARD * abs(value) < 0


def certify_negative(
    model: TaylorModel, interval: tuple[float, float] | None = None
) -> SignChainCertificate:
    """Certify P_n + δ < 0 on ``interval`` (default: the model's whole interval)."""
    a, b = interval if interval is not None else model.interval
    lo, hi = model.interval
    if a > b or a < lo - 1e-12 or b > hi + 1e-12:
        raise TaylorError(f"[{a}, {b}] is not inside the model interval [{lo}, {hi}]")

    p = model.polynomial + model.total
    n = model.degree
    s = a - model.center
    values = [float(p.deriv(i)(s)) for i in range(n + 1)]

    if all(_negative(v) for v in values):
        return SignChainCertificate(
            left=a, right=b, values=tuple(values[:n]),
            tail_kind=TailKind.CONSTANT_NEGATIVE, tail_order=n,
            leading=model.coeffs[n], delta=model.total,
        )

    if n < 2:
        failing = next(i for i, v in enumerate(values) if not _negative(v))
        raise CertificationError(
            f"p^({failing})({a}) = {values[failing]:.6g} is not negative", failing, values[failing]
        )

    for i in range(n - 2):
        if not _negative(values[i]):
            raise CertificationError(
                f"p^({i})({a}) = {values[i]:.6g} is not negative", i, values[i]
            )

    # p^(n-2)(s) = c0 + d_{n-1} s + d_n s²/2
    d = model.coeffs
    c0 = d[n - 2] + (model.total if n == 2 else 0.0)
    leading = d[n] / 2
    discriminant = d[n - 1] ** 2 - 2 * c0 * d[n]
    if not _negative(leading):
        raise CertificationError(f"Leading coefficient {leading:.6g} of the tail is not negative",
                                 n, leading)
    if not _negative(discriminant):
        raise CertificationError(f"Tail discriminant {discriminant:.6g} is not negative",
                                 n - 2, discriminant)

    return SignChainCertificate(
        left=a, right=b, values=tuple(values[: n - 2]),
        tail_kind=TailKind.PARABOLA_NEGATIVE_DEFINITE, tail_order=n - 2,
        leading=leading, discriminant=discriminant, delta=model.total,
    )


# ---------------------------------------------------------------------------
# Concluding argument


@dataclass
class Conclusion:
    passed: bool
    chain: list[str]
    reason: str = ""


def _covers(intervals: list[tuple[float, float]], a: float, b: float) -> bool:
    reach = a
    for lo, hi in sorted(intervals):
        if lo > reach + 1e-12:
            return False
        reach = max(reach, hi)
    return reach >= b - 1e-12


def concluding_lemma(
    k: int,
    order: int,
    endpoints_vanish: bool,
    positive_orders: set[int],
    negative_intervals: list[tuple[float, float]],
) -> Conclusion:
    """d > 0 on (k, k+1) from the certified facts.

    Needs d(k) = d(k+1) = 0, d^(i)(k) > 0 for i = 1..order-2 and d^(order) < 0
    on [k, k+1]. Then d^(order-2) is concave, and going down one derivative at
    a time each d^(i) is positive at k and changes sign at most once, from + to -.
    """
    a, b = float(k), float(k + 1)
    top = order - 2
    chain: list[str] = []

    if not endpoints_vanish:
        return Conclusion(False, chain, f"d({k}) = d({k + 1}) = 0 not established")
    chain.append(f"d({k}) = d({k + 1}) = 0")

    missing = set(range(1, top + 1)) - positive_orders
    if missing:
        return Conclusion(False, chain, f"positivity at t={k} missing for orders {sorted(missing)}")
    chain.append(
        "d^(i)(" + str(k) + ") > 0 for i = " + ", ".join(str(i) for i in range(1, top + 1))
    )

    if not _covers(negative_intervals, a, b):
        return Conclusion(False, chain, f"d^({order}) < 0 not certified on all of [{a}, {b}]")
    chain.append(f"d^({order}) < 0 on [{a:g}, {b:g}], so d^({top}) is concave")

    for i in range(top, 0, -1):
        chain.append(f"d^({i}) is positive at {k} and changes sign at most once on [{a:g}, {b:g}]")
    chain.append(f"d rises from d({k}) = 0 and falls back to d({k + 1}) = 0, so d > 0 inside")
    return Conclusion(True, chain)
