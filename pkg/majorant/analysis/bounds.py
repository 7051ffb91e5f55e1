"""Sup-norm ledgers feeding the quadrature error budgets.

Holds the derivative bounds M_m, the certified ratio bound M* >= G'²/G,
certified minima of G, the maxima of v^s |log v|^m, and the estimates of
sup |H^IV| for H = G^t log^j G.
"""

from __future__ import annotations

import functools
import logging
import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import Chebyshev, Polynomial
from scipy.optimize import brentq, minimize_scalar

from majorant.analysis.trig_core import eval_G
from majorant.models import PolyFamily, Sign

logger = logging.getLogger(__name__)

G_MAX = 9.0
LOG9 = math.log(G_MAX)
DEFAULT_GRID_POINTS = 1_000_000
DEFAULT_VGRID_POINTS = 10_000

# Candidates for the certified ratio bound, as multiples of the observed maximum
_CERTIFY_LADDER = (1 + 1e-9, 1 + 1e-6, 1 + 1e-4, 1 + 1e-2)


class BoundError(ValueError):
    """Raised when a bound cannot be certified or is asked outside its regime."""


# ---------------------------------------------------------------------------
# Derivative bounds


def deriv_sup_bounds(k: int) -> list[float]:
    """[M_0, ..., M_4] with M_0 = 9 and M_m = 2^(m+1) π^m (1 + (k+1)^m + (k+2)^m)."""
    if k < 1:
        raise BoundError(f"k must be >= 1, got {k}")
    return [G_MAX] + [
        2 ** (m + 1) * math.pi**m * (1 + (k + 1) ** m + (k + 2) ** m) for m in range(1, 5)
    ]


# ---------------------------------------------------------------------------
# G'²/G as a rational function of u = cos 2πx


def chebyshev_t(n: int) -> Polynomial:
    """T_n in the power basis."""
    return Chebyshev.basis(n).convert(kind=Polynomial)


def chebyshev_u(n: int) -> Polynomial:
    """U_n in the power basis, by the three-term recurrence."""
    u = Polynomial([0.0, 1.0])
    prev, cur = Polynomial([1.0]), 2 * u
    if n == 0:
        return prev
    for _ in range(n - 1):
        prev, cur = cur, 2 * u * cur - prev
    return cur


# (k, sign) -> (bracket, denominator) with the common factor (2u+1)² removed
_REDUCED_FORMS = {
    (3, Sign.PLUS): (
        Polynomial([6.0, -28.0, -4.0, 40.0]),
        Polynomial([5.0, -8.0, -4.0, 8.0]),
    ),
}


def ratio_polynomials(fam: PolyFamily) -> tuple[Polynomial, Polynomial]:
    """Numerator and denominator of G'²/G in u.

    G'²  = 16π²(1-u²)[1 ± (k+1)U_k ± (k+2)U_{k+1}]²
    G    = 3 + 2u ± 2T_{k+1} ± 2T_{k+2}
    """
    u = Polynomial([0.0, 1.0])
    one_minus_u2 = 1 - u**2
    scale = 16 * math.pi**2

    reduced = _REDUCED_FORMS.get((fam.k, fam.sign))
    if reduced is not None:
        bracket, den = reduced
        return scale * one_minus_u2 * bracket**2, den

    s = fam.sign.factor
    k = fam.k
    bracket = 1 + s * ((k + 1) * chebyshev_u(k) + (k + 2) * chebyshev_u(k + 1))
    den = 3 + 2 * u + 2 * s * (chebyshev_t(k + 1) + chebyshev_t(k + 2))
    return scale * one_minus_u2 * bracket**2, den


def _curvature(poly: Polynomial) -> float:
    """Crude sup of |p''| over [-1, 1]."""
    return float(np.sum(np.abs(poly.deriv(2).coef))) if poly.degree() >= 2 else 0.0


def _cell_slack(poly: Polynomial, step: float) -> float:
    # p lies within sup|p''|·h²/8 of its chord on every cell
    return _curvature(poly) * step * step / 8


def _round_up(value: float, digits: int = 2) -> float:
    exponent = math.floor(math.log10(value)) - (digits - 1)
    unit = 10.0**exponent
    return math.ceil(value / unit - 1e-12) * unit


@dataclass(frozen=True)
class RatioBound:
    """Certified bound on sup G'²/G for one family."""

    family: PolyFamily
    maximum: float
    argmax: float
    certified: float
    reported: float
    denominator_min: float
    denominator_argmin: float


def _refine(func, lo: float, hi: float) -> tuple[float, float]:
    """Local minimum of func on [lo, hi]: (argmin, value)."""
    res = minimize_scalar(func, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12})
    return float(res.x), float(res.fun)


def _bound_holds(num: Polynomial, den: Polynomial, bound: float, us: np.ndarray) -> bool:
    """Check num - bound·den <= 0 on [-1, 1] (den > 0 assumed certified)."""
    poly = num - bound * den
    return float(poly(us).max()) + _cell_slack(poly, us[1] - us[0]) < 0


def ratio_bound(fam: PolyFamily, grid_points: int = DEFAULT_GRID_POINTS) -> RatioBound:
    """Maximise G'²/G over u ∈ [-1, 1] and certify a rounded-up bound."""
    num, den = ratio_polynomials(fam)
    us = np.linspace(-1.0, 1.0, grid_points)
    step = us[1] - us[0]

    den_vals = den(us)
    i_min = int(np.argmin(den_vals))
    den_certified = float(den_vals[i_min]) - _cell_slack(den, step)
    if den_certified <= 0:
        raise BoundError(
            f"{fam.label}: denominator not certified positive (lower bound {den_certified:.3e})"
        )
    lo, hi = us[max(i_min - 1, 0)], us[min(i_min + 1, grid_points - 1)]
    den_arg, den_min = _refine(lambda u: float(den(u)), lo, hi)
    den_min = min(den_min, float(den_vals[i_min]))

    ratio = num(us) / den_vals
    top = np.argpartition(ratio, -5)[-5:]
    best_u, best = float(us[top[0]]), float(ratio[top[0]])
    for i in top:
        lo, hi = us[max(i - 1, 0)], us[min(i + 1, grid_points - 1)]
        arg, neg = _refine(lambda u: -float(num(u) / den(u)), lo, hi)
        for candidate_u, candidate in ((arg, -neg), (float(us[i]), float(ratio[i]))):
            if candidate > best:
                best_u, best = candidate_u, candidate

    certified = None
    for factor in _CERTIFY_LADDER:
        if _bound_holds(num, den, best * factor, us):
            certified = best * factor
            break
    if certified is None:
        raise BoundError(f"{fam.label}: could not certify a bound near {best:.6g}")

    reported = _round_up(certified)
    if not _bound_holds(num, den, reported, us):
        raise BoundError(f"{fam.label}: rounded bound {reported} failed certification")

    logger.debug(
        f"{fam.label}: max G'^2/G = {best:.4f} at u={best_u:.6f}, reported {reported:g}"
    )
    return RatioBound(
        family=fam,
        maximum=best,
        argmax=best_u,
        certified=certified,
        reported=reported,
        denominator_min=den_min,
        denominator_argmin=den_arg,
    )


# ---------------------------------------------------------------------------
# Minimum of G


@dataclass(frozen=True)
class MinimumBound:
    family: PolyFamily
    observed: float
    argmin: float
    certified: float


def g_min(fam: PolyFamily, grid_points: int = DEFAULT_GRID_POINTS) -> MinimumBound:
    """Certified lower bound for min G over the torus.

    Grid minimum over [0, 1/2] less the Lipschitz slack M_1·step, clamped at 0.
    """
    xs = np.linspace(0.0, 0.5, grid_points)
    step = float(xs[1] - xs[0])
    vals = eval_G(fam, xs)
    i = int(np.argmin(vals))
    grid_min = float(vals[i])

    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, grid_points - 1)]
    arg, refined = _refine(lambda x: float(eval_G(fam, x)), lo, hi)
    if refined > grid_min:
        arg, refined = float(xs[i]), grid_min

    slack = deriv_sup_bounds(fam.k)[1] * step
    certified = max(0.0, grid_min - slack)
    return MinimumBound(family=fam, observed=refined, argmin=arg, certified=certified)


# ---------------------------------------------------------------------------
# Maxima of v^s |log v|^m


@functools.lru_cache(maxsize=1)
def sigma_zero() -> float:
    """Root σ0 ≈ 0.126 of σ·9^σ = 1/(e·log 9)."""
    target = 1.0 / (math.e * LOG9)
    return float(brentq(lambda s: s * G_MAX**s - target, 1e-9, 1.0, xtol=1e-15))


def _alpha(s: float, m: float, v: float) -> float:
    if v <= 0:
        return 0.0
    return v**s * abs(math.log(v)) ** m


def alpha_max(s: float, m: float, lo: float, hi: float) -> float:
    """Maximum of v^s |log v|^m over [lo, hi] ⊂ [0, ∞), s > 0.

    The function rises on [0, v0], falls on [v0, 1] and rises again after 1,
    with v0 = exp(-m/s) and peak value (m/(e s))^m.
    """
    if s <= 0:
        raise BoundError(f"alpha_max needs s > 0, got {s}")
    if lo < 0 or hi < lo:
        raise BoundError(f"Invalid interval [{lo}, {hi}]")
    if m == 0:
        return hi**s

    candidates = [_alpha(s, m, lo), _alpha(s, m, hi)]
    v0 = math.exp(-m / s)
    if lo <= v0 <= hi:
        candidates.append((m / (math.e * s)) ** m)
    return max(candidates)


def alpha_star(s: float, m: float, v_max: float = G_MAX) -> float:
    """max over [0, v_max] of v^s |log v|^m."""
    if v_max <= 0:
        raise BoundError(f"v_max must be positive, got {v_max}")
    return alpha_max(s, m, 0.0, v_max)


def lambda_power_max(a: float, b: float, v_max: float) -> float:
    """max over [0, v_max] of v^a Λ(v)^b with Λ = max(|log v|, 1)."""
    if b == 0:
        return v_max**a
    inv_e = 1.0 / math.e
    values = [alpha_max(a, b, 0.0, min(inv_e, v_max))]
    if v_max > inv_e:
        values.append(min(v_max, math.e) ** a)
    if v_max > math.e:
        values.append(alpha_max(a, b, math.e, v_max))
    return max(values)


# ---------------------------------------------------------------------------
# Ledger


@dataclass(frozen=True)
class BoundLedger:
    """Per-k constants used by the H^IV estimates."""

    k: int
    M: tuple[float, ...]
    M_star: float | None
    g_min_plus: float
    g_min_minus: float
    ell_max: float
    ratios: tuple[RatioBound | None, RatioBound | None]
    minima: tuple[MinimumBound, MinimumBound]
    vgrid_points: int = DEFAULT_VGRID_POINTS

    @property
    def g_min(self) -> float:
        return min(self.g_min_plus, self.g_min_minus)

    @property
    def ell_derived(self) -> float:
        if self.g_min <= 0:
            return math.inf
        return max(abs(math.log(self.g_min)), LOG9)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "M": list(self.M),
            "M_star": self.M_star,
            "ratio_maxima": [r.maximum if r else None for r in self.ratios],
            "g_min_plus": self.g_min_plus,
            "g_min_minus": self.g_min_minus,
            "ell_derived": self.ell_derived,
            "ell_max": self.ell_max,
        }


@functools.lru_cache(maxsize=8)
def build_ledger(
    k: int,
    grid_points: int = DEFAULT_GRID_POINTS,
    ell_cap: float | None = None,
    vgrid_points: int = DEFAULT_VGRID_POINTS,
) -> BoundLedger:
    """Assemble (and cache) the bound ledger for k."""
    plus, minus = PolyFamily.pair(k)

    ratios = []
    for fam in (plus, minus):
        try:
            ratios.append(ratio_bound(fam, grid_points))
        except BoundError as e:
            logger.warning(f"No ratio bound for {fam.label}: {e}")
            ratios.append(None)
    M_star = max(r.reported for r in ratios) if all(ratios) else None

    minima = (g_min(plus, grid_points), g_min(minus, grid_points))
    lowest = min(m.certified for m in minima)
    if lowest > 0:
        derived = max(abs(math.log(lowest)), LOG9)
        if ell_cap is not None and ell_cap < derived:
            logger.warning(
                f"k={k}: ell cap {ell_cap} below derived bound {derived:.4f}; using derived"
            )
        ell_max = max(derived, ell_cap) if ell_cap is not None else derived
    else:
        ell_max = math.inf

    ledger = BoundLedger(
        k=k,
        M=tuple(deriv_sup_bounds(k)),
        M_star=M_star,
        g_min_plus=minima[0].certified,
        g_min_minus=minima[1].certified,
        ell_max=ell_max,
        ratios=tuple(ratios),
        minima=minima,
        vgrid_points=vgrid_points,
    )
    logger.info(
        f"Ledger k={k}: M*={M_star}, g_min=({ledger.g_min_plus:.5f}, "
        f"{ledger.g_min_minus:.5f}), ell_max={ell_max:.4f}"
    )
    return ledger


# ---------------------------------------------------------------------------
# H^IV estimates
#
# Each estimate is a sum of terms coef · v^a · ℓ^b with ℓ = |log v|.


@dataclass(frozen=True)
class _Term:
    coef: float
    a: float
    b: int


def _keep(pairs: list[tuple[float, int]]) -> list[tuple[float, int]]:
    return [(c, p) for c, p in pairs if c != 0 and p >= 0]


def _quartic(t: float, j: int) -> list[tuple[float, int]]:
    return _keep([
        (j * (j - 1) * (j - 2) * (j - 3), j - 4),
        ((4 * t - 6) * j * (j - 1) * (j - 2), j - 3),
        ((6 * t**2 - 18 * t + 11) * j * (j - 1), j - 2),
        ((2 * t**3 - 9 * t**2 + 11 * t - 3) * 2 * j, j - 1),
        (t * (t - 1) * (t - 2) * (t - 3), j),
    ])


def _cubic(t: float, j: int) -> list[tuple[float, int]]:
    return _keep([
        (j * (j - 1) * (j - 2), j - 3),
        (3 * (t - 1) * j * (j - 1), j - 2),
        ((3 * t**2 - 6 * t + 2) * j, j - 1),
        (t * (t - 1) * (t - 2), j),
    ])


def _quadratic(t: float, j: int) -> list[tuple[float, int]]:
    return _keep([(j * (j - 1), j - 2), ((2 * t - 1) * j, j - 1), (t * (t - 1), j)])


def _linear(t: float, j: int) -> list[tuple[float, int]]:
    return _keep([(j, j - 1), (t, j)])


def _weight(pairs: list[tuple[float, int]]) -> float:
    return sum(abs(c) for c, _ in pairs)


def _expand(groups) -> list[_Term]:
    return [
        _Term(scale * abs(c), a, p) for a, scale, pairs in groups for c, p in pairs if scale
    ]


def large_v_terms(t: float, j: int, M: tuple[float, ...]) -> list[_Term]:
    """Estimate using |G^(m)| <= M_m only."""
    _, M1, M2, M3, M4 = M
    return _expand([
        (t - 4, M1**4, _quartic(t, j)),
        (t - 3, 6 * M1**2 * M2, _cubic(t, j)),
        (t - 2, 3 * M2**2 + 4 * M1 * M3, _quadratic(t, j)),
        (t - 1, M4, _linear(t, j)),
    ])


def small_v_terms(t: float, j: int, M: tuple[float, ...], M_star: float) -> list[_Term]:
    """Estimate absorbing G'² <= M*·G, for the region where G is small."""
    _, _, M2, M3, M4 = M
    return _expand([
        (t - 2, M_star**2, _quartic(t, j)),
        (t - 2, 6 * M_star * M2, _cubic(t, j)),
        (t - 1.5, 4 * math.sqrt(M_star) * M3, _quadratic(t, j)),
        (t - 2, 3 * M2**2, _quadratic(t, j)),
        (t - 1, M4, _linear(t, j)),
    ])


def lambda_terms(t: float, j: int, M: tuple[float, ...], M_star: float) -> list[_Term]:
    """Small-v estimate with every ℓ power raised to Λ^j and 2√v <= 1 + v."""
    _, _, M2, M3, M4 = M
    root = 2 * math.sqrt(M_star) * M3
    quad = _weight(_quadratic(t, j))
    low = (
        M_star**2 * _weight(_quartic(t, j))
        + 6 * M_star * M2 * _weight(_cubic(t, j))
        + (root + 3 * M2**2) * quad
    )
    high = root * quad + M4 * _weight(_linear(t, j))
    return [_Term(low, t - 2, j), _Term(high, t - 1, j)]


def _enclose(terms: list[_Term], lo: float, hi: float, cells: int) -> float:
    """Upper bound of Σ coef·v^a·(log v)^b over [lo, hi] ⊂ [1, ∞) on a cell grid."""
    vs = np.linspace(lo, hi, cells + 1)
    logs = np.log(vs)
    total = np.zeros(cells)
    for term in terms:
        pw = vs**term.a
        lg = logs**term.b
        total += term.coef * np.maximum(pw[:-1], pw[1:]) * np.maximum(lg[:-1], lg[1:])
    return float(total.max())


def _termwise(terms: list[_Term], v_max: float, use_lambda: bool) -> float:
    if use_lambda:
        return sum(t.coef * lambda_power_max(t.a, t.b, v_max) for t in terms)
    return sum(t.coef * alpha_max(t.a, t.b, 0.0, v_max) for t in terms)


@dataclass(frozen=True)
class FourthDerivativeBound:
    """sup |H^IV| estimate with the pieces that produced it."""

    t: float
    j: int
    value: float
    method: str  # "split" or "plain"
    large: float
    small: float | None = None
    v_split: float | None = None


def split_point(t: float, j: int) -> float:
    """Value of G where the small-v and large-v estimates meet."""
    return 3.0 if (t == 3 and j == 1) else math.e


def hiv_estimate(
    fam: PolyFamily,
    t: float,
    j: int,
    ledger: BoundLedger,
    vgrid_points: int | None = None,
) -> FourthDerivativeBound:
    """Split estimate: M_m-based above v_split, M*-based below it."""
    if fam.k != ledger.k:
        raise BoundError(f"Ledger is for k={ledger.k}, family has k={fam.k}")
    if t < 3:
        raise BoundError(f"H^IV estimate needs t >= 3, got {t}")
    if ledger.M_star is None:
        raise BoundError(f"k={ledger.k}: no certified M* available for the small-v estimate")

    v_split = split_point(t, j)
    cells = vgrid_points or ledger.vgrid_points
    large = _enclose(large_v_terms(t, j, ledger.M), v_split, G_MAX, cells)
    if t == 3 and j == 1:
        small = _termwise(small_v_terms(t, j, ledger.M, ledger.M_star), v_split, False)
    else:
        small = _termwise(lambda_terms(t, j, ledger.M, ledger.M_star), v_split, True)

    return FourthDerivativeBound(
        t=t, j=j, value=max(large, small), method="split",
        large=large, small=small, v_split=v_split,
    )


def hiv_bound(
    fam: PolyFamily,
    t: float,
    j: int,
    ledger: BoundLedger,
    vgrid_points: int | None = None,
) -> float:
    """sup |H^IV| from the split estimate."""
    return hiv_estimate(fam, t, j, ledger, vgrid_points).value


def hiv_estimate_k4(t: float, j: int, ledger: BoundLedger) -> FourthDerivativeBound:
    """Plain substitution: ℓ -> ell_max, v^a -> its maximum over [g_min, 9]."""
    if ledger.g_min <= 0:
        raise BoundError(f"k={ledger.k}: plain substitution needs min G > 0")
    if not 4 <= t <= 5:
        raise BoundError(f"Plain substitution is set up for t in [4, 5], got {t}")

    def v_max(a: float) -> float:
        if a > 0:
            return G_MAX**a
        if a < 0:
            return ledger.g_min**a
        return 1.0

    value = sum(
        term.coef * v_max(term.a) * ledger.ell_max**term.b
        for term in large_v_terms(t, j, ledger.M)
    )
    return FourthDerivativeBound(t=t, j=j, value=value, method="plain", large=value)


def hiv_bound_k4(t: float, j: int, ledger: BoundLedger) -> float:
    """sup |H^IV| by plain substitution, for k with min G > 0."""
    return hiv_estimate_k4(t, j, ledger).value


def fourth_derivative_estimate(
    fam: PolyFamily,
    t: float,
    j: int,
    ledger: BoundLedger,
    vgrid_points: int | None = None,
) -> FourthDerivativeBound:
    """Plain substitution when G stays away from 0, the split estimate otherwise."""
    if ledger.g_min > 0 and 4 <= t <= 5:
        return hiv_estimate_k4(t, j, ledger)
    return hiv_estimate(fam, t, j, ledger, vgrid_points)


def fourth_derivative_bound(
    fam: PolyFamily,
    t: float,
    j: int,
    ledger: BoundLedger,
    vgrid_points: int | None = None,
) -> float:
    return fourth_derivative_estimate(fam, t, j, ledger, vgrid_points).value
