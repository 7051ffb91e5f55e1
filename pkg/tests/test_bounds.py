"""Tests for derivative bounds, the ratio bound, min G and the H^IV estimates."""

import dataclasses
import math

import numpy as np
import pytest

from majorant.analysis.bounds import (
    BoundError,
    alpha_max,
    alpha_star,
    deriv_sup_bounds,
    fourth_derivative_estimate,
    g_min,
    hiv_bound,
    hiv_bound_k4,
    hiv_estimate,
    lambda_power_max,
    ratio_polynomials,
    sigma_zero,
)
from majorant.analysis.quadrature import min_steps
from majorant.analysis.trig_core import eval_G, eval_G_deriv, eval_H
from majorant.config import DEFAULT_BUDGETS
from majorant.models import HSpec, PolyFamily, Sign

PI = math.pi
G3P, G3M = PolyFamily.pair(3)
G4P, G4M = PolyFamily.pair(4)


def _fourth_difference_max(fam, spec, points=4001, h=1e-3):
    worst = 0.0
    for x in np.linspace(0.002, 0.498, points):
        values = [eval_H(fam, spec, x + i * h) for i in (-2, -1, 0, 1, 2)]
        fd = (values[0] - 4 * values[1] + 6 * values[2] - 4 * values[3] + values[4]) / h**4
        worst = max(worst, abs(fd))
    return worst


class TestDerivSupBounds:
    def test_k3(self):
        expected = [9, 40 * PI, 336 * PI**2, 3040 * PI**3, 28224 * PI**4]
        assert deriv_sup_bounds(3) == pytest.approx(expected)

    def test_k4(self):
        expected = [9, 48 * PI, 496 * PI**2, 5472 * PI**3, 61504 * PI**4]
        assert deriv_sup_bounds(4) == pytest.approx(expected)

    @pytest.mark.parametrize("fam", [G3P, G3M, G4P, G4M])
    def test_dominates_sampled_derivatives(self, fam):
        xs = np.linspace(0.0, 0.5, 100_001)
        M = deriv_sup_bounds(fam.k)
        for m in range(5):
            assert np.abs(eval_G_deriv(fam, m, xs)).max() <= M[m] * (1 + 1e-12)

    def test_rejects_bad_k(self):
        with pytest.raises(BoundError):
            deriv_sup_bounds(0)


class TestRatioBound:
    def test_plus_family(self, ledger3):
        ratio = ledger3.ratios[0]
        assert 3690 < ratio.maximum < 3700
        assert ratio.reported == 3700
        assert ratio.denominator_min == pytest.approx(0.12, abs=0.01)
        assert ratio.denominator_argmin == pytest.approx((1 + math.sqrt(13)) / 6, abs=1e-4)

    def test_minus_family(self, ledger3):
        ratio = ledger3.ratios[1]
        assert 3855 < ratio.maximum < 3900
        assert ratio.reported == 3900

    def test_m_star(self, ledger3):
        assert ledger3.M_star == 3900

    def test_reduced_form_matches_full_ratio(self):
        num, den = ratio_polynomials(G3P)
        for x in (0.05, 0.2, 0.45):
            u = math.cos(2 * PI * x)
            g = eval_G(G3P, x)
            assert num(u) / den(u) == pytest.approx(eval_G_deriv(G3P, 1, x) ** 2 / g, rel=1e-9)

    @pytest.mark.parametrize("index, fam", [(0, G3P), (1, G3M)])
    def test_bound_holds_on_dense_sample(self, ledger3, index, fam):
        xs = np.linspace(0.0, 0.5, 1_000_001)
        g = eval_G(fam, xs)
        g1 = eval_G_deriv(fam, 1, xs)
        assert np.all(g1**2 <= ledger3.ratios[index].reported * g + 1e-9)


class TestMinimum:
    def test_k4_minima(self, ledger4):
        assert 0.094 <= ledger4.g_min_plus <= 0.0947
        assert 0.027 <= ledger4.g_min_minus <= 0.0278

    def test_k3_plus_touches_zero(self, ledger3):
        assert ledger3.g_min_plus == 0.0
        assert ledger3.minima[0].observed == pytest.approx(0.0, abs=1e-10)
        assert ledger3.ell_max == math.inf

    def test_k3_minus(self, ledger3):
        assert ledger3.minima[1].observed == pytest.approx(0.282, abs=0.01)

    @pytest.mark.parametrize("fam", [G4P, G4M, G3M])
    def test_certified_below_observed(self, fam):
        bound = g_min(fam, 20_000)
        assert bound.certified <= bound.observed
        assert eval_G(fam, np.linspace(0, 0.5, 50_001)).min() >= bound.certified

    def test_ell_cap(self, ledger4):
        assert ledger4.ell_max == 3.7
        assert abs(math.log(ledger4.g_min)) <= ledger4.ell_derived < 3.7


class TestLogPowerMaxima:
    def test_sigma_zero(self):
        s = sigma_zero()
        assert s == pytest.approx(0.126, abs=1e-3)
        assert s * 9**s == pytest.approx(1 / (math.e * math.log(9)), rel=1e-12)

    def test_examples(self):
        assert alpha_star(1, 0) == 9
        assert alpha_star(4, 10) == pytest.approx(9**4 * math.log(9) ** 10)
        assert alpha_star(0.1, 3) == pytest.approx((30 / math.e) ** 3, rel=1e-9)

    @pytest.mark.parametrize("s, m", [(0.1, 3), (1, 1), (2, 4), (0.5, 7), (3, 2)])
    def test_dominates_grid(self, s, m):
        vs = np.concatenate([np.logspace(-60, 0, 200_001), np.linspace(1.0, 9.0, 20_001)])
        sampled = (vs**s * np.abs(np.log(vs)) ** m).max()
        assert sampled <= alpha_star(s, m) * (1 + 1e-12)
        assert sampled >= alpha_star(s, m) * (1 - 1e-3)

    def test_alpha_max_subinterval(self):
        assert alpha_max(2, 1, 0.5, 3.0) == pytest.approx(9 * math.log(3))

    def test_alpha_max_rejects_bad_input(self):
        with pytest.raises(BoundError):
            alpha_max(0, 1, 0, 1)
        with pytest.raises(BoundError):
            alpha_max(1, 1, 2, 1)

    @pytest.mark.parametrize("a, b, v_max", [(1, 2, 9.0), (0.5, 5, 9.0), (2, 3, math.e)])
    def test_lambda_power_dominates_grid(self, a, b, v_max):
        vs = np.concatenate([np.logspace(-60, 0, 200_001), np.linspace(1.0, v_max, 20_001)])
        lam = np.maximum(np.abs(np.log(vs)), 1.0)
        assert (vs**a * lam**b).max() <= lambda_power_max(a, b, v_max) * (1 + 1e-12)


class TestHivK3:
    def test_first_derivative_estimate(self, ledger3):
        estimate = hiv_estimate(G3P, 3, 1, ledger3)
        assert estimate.v_split == 3.0
        assert estimate.large == pytest.approx(2.2608e10, rel=1e-3)
        assert estimate.small == pytest.approx(7.014e9, rel=2e-3)
        assert estimate.value < 2.3e10
        assert min_steps(estimate.value, 0.007) <= 100

    def test_second_derivative_estimate(self, ledger3):
        estimate = hiv_estimate(G3P, 3, 2, ledger3)
        assert estimate.v_split == pytest.approx(math.e)
        assert estimate.value < 7.2e10
        assert estimate.small < 2e10
        assert min_steps(estimate.value, 0.04) <= 100

    def test_sign_independent(self, ledger3):
        assert hiv_bound(G3P, 3.5, 4, ledger3) == hiv_bound(G3M, 3.5, 4, ledger3)

    def test_taylor_table_bounds_plan_within_cap(self, ledger3):
        budget = DEFAULT_BUDGETS[3].models[0]
        for j in range(budget.degree + 1):
            bound = hiv_bound(G3P, budget.center, j + 4, ledger3)
            eta = budget.deltas[j] * budget.radius ** (-j) * math.factorial(j) / 2
            assert min_steps(bound, eta) <= 500

    def test_rejects_small_t(self, ledger3):
        with pytest.raises(BoundError):
            hiv_bound(G3P, 2.5, 1, ledger3)

    def test_needs_m_star(self, ledger3):
        with pytest.raises(BoundError):
            hiv_bound(G3P, 3, 1, dataclasses.replace(ledger3, M_star=None))

    def test_ledger_k_mismatch(self, ledger3):
        with pytest.raises(BoundError):
            hiv_bound(G4P, 4, 1, ledger3)

    @pytest.mark.parametrize("t, j", [(3, 1), (3, 2), (3.5, 0), (3.5, 4), (4, 6)])
    @pytest.mark.parametrize("fam", [G3P, G3M])
    def test_dominates_finite_differences(self, ledger3, fam, t, j):
        bound = hiv_bound(fam, t, j, ledger3)
        assert _fourth_difference_max(fam, HSpec(t, j)) <= 1.05 * bound


class TestHivK4:
    def test_first_derivative(self, ledger4):
        value = hiv_bound_k4(4, 1, ledger4)
        assert value == pytest.approx(1.556e12, rel=1e-2)
        assert value <= 1.6e12

    def test_third_derivative(self, ledger4):
        assert hiv_bound_k4(4, 3, ledger4) <= 5.4e13

    def test_model_center(self, ledger4):
        # derivative order 5 is row j = 0 of the left k = 4 table
        value = hiv_bound_k4(4.25, 5, ledger4)
        assert value == pytest.approx(1.225e15, rel=1e-2)
        assert value <= 1.23e15
        assert hiv_bound_k4(4.25, 4, ledger4) < value < hiv_bound_k4(4.25, 6, ledger4)

    @pytest.mark.parametrize("index", [0, 1])
    def test_taylor_table_bounds_plan_within_cap(self, ledger4, index):
        budget = DEFAULT_BUDGETS[4].models[index]
        for j in range(budget.degree + 1):
            bound = hiv_bound_k4(budget.center, j + 5, ledger4)
            eta = budget.deltas[j] * budget.radius ** (-j) * math.factorial(j) / 2
            assert min_steps(bound, eta) <= 500

    def test_needs_positive_minimum(self, ledger4):
        with pytest.raises(BoundError):
            hiv_bound_k4(4, 1, dataclasses.replace(ledger4, g_min_plus=0.0))

    def test_rejects_t_outside_range(self, ledger4):
        with pytest.raises(BoundError):
            hiv_bound_k4(5.5, 1, ledger4)

    def test_dispatch(self, ledger3, ledger4):
        assert fourth_derivative_estimate(G4M, 4.5, 2, ledger4).method == "plain"
        assert fourth_derivative_estimate(G3P, 3.5, 2, ledger3).method == "split"

    @pytest.mark.parametrize("t, j", [(4, 1), (4, 2), (4.25, 5), (4.5, 3), (4.75, 5), (5, 0)])
    @pytest.mark.parametrize("fam", [G4P, G4M])
    def test_dominates_finite_differences(self, ledger4, fam, t, j):
        bound = hiv_bound_k4(t, j, ledger4)
        assert _fourth_difference_max(fam, HSpec(t, j)) <= 1.05 * bound


def test_ledger_to_dict(ledger4):
    data = ledger4.to_dict()
    assert data["k"] == 4
    assert data["ell_max"] == 3.7
    assert len(data["M"]) == 5


def test_sign_enum_factor():
    assert Sign.PLUS.factor == 1
    assert Sign.MINUS.factor == -1
