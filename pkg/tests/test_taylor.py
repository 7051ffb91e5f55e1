"""Tests for derivative estimates, Taylor models, sign chains and the concluding argument."""

import dataclasses

import numpy as np
import pytest

from majorant.prover.taylor import (
    BudgetError,
    CertificationError,
    PlanningError,
    TailKind,
    TaylorError,
    TaylorModel,
    build_taylor_model,
    certify_negative,
    concluding_lemma,
    d_derivative,
    positivity_lemma,
    remainder_bound,
)
from majorant.report import published


class TestRemainder:
    def test_k3_model(self):
        value = remainder_bound(3, 4, 3.5, 0.5, 10)
        assert value == pytest.approx(0.01079, rel=1e-2)
        assert value < 0.011

    def test_k4_models(self):
        left = remainder_bound(4, 5, 4.25, 0.25, 7)
        right = remainder_bound(4, 5, 4.75, 0.25, 6)
        assert left == pytest.approx(0.2075, rel=1e-2)
        assert left < 0.21
        assert right == pytest.approx(9.067, rel=1e-2)
        assert right < 9.1

    def test_rejects_degree_past_window(self):
        # m / xi = 24 / 3 exceeds 1 / sigma0
        with pytest.raises(BudgetError):
            remainder_bound(3, 4, 3.5, 0.5, 19)
        assert remainder_bound(3, 4, 3.5, 0.5, 18) > 0

    def test_rejects_bad_radius(self):
        with pytest.raises(BudgetError):
            remainder_bound(3, 4, 3.5, 0.0, 10)


class TestBuildModelValidation:
    def test_wrong_budget_count(self, ledger3):
        with pytest.raises(BudgetError):
            build_taylor_model(3, 4, 3.5, 0.5, 10, [0.005] * 10, 0.068, ledger=ledger3)

    def test_total_too_small(self, ledger3):
        with pytest.raises(BudgetError):
            build_taylor_model(3, 4, 3.5, 0.5, 10, [0.005] * 11, 0.05, ledger=ledger3)

    def test_node_cap(self, ledger3):
        with pytest.raises(PlanningError):
            build_taylor_model(
                3, 4, 3.5, 0.5, 10, [0.005] * 11, 0.068, ledger=ledger3, nodes=50, max_nodes=50
            )


def _synthetic(coeffs, total=0.1):
    n = len(coeffs) - 1
    return TaylorModel(
        k=3, order=4, center=0.0, radius=0.5, degree=n, coeffs=tuple(coeffs),
        budgets=(0.01,) * (n + 1), remainder=0.0, total=total,
    )


class TestSignChain:
    def test_constant_tail(self):
        cert = certify_negative(_synthetic([-1.0, -1.0, -1.0]))
        assert cert.tail_kind is TailKind.CONSTANT_NEGATIVE
        assert cert.values == pytest.approx((-0.525, -0.5))

    def test_parabola_tail(self):
        cert = certify_negative(_synthetic([-1.0, 1.0, -1.0]))
        assert cert.tail_kind is TailKind.PARABOLA_NEGATIVE_DEFINITE
        assert cert.discriminant == pytest.approx(-0.8)
        assert cert.leading == pytest.approx(-0.5)

    def test_low_degree_failure(self):
        with pytest.raises(CertificationError) as exc:
            certify_negative(_synthetic([-1.0, 3.0]))
        assert exc.value.order == 1

    def test_interval_outside_model(self):
        with pytest.raises(TaylorError):
            certify_negative(_synthetic([-1.0, -1.0, -1.0]), interval=(0.0, 1.0))

    def test_certificate_to_dict(self):
        data = certify_negative(_synthetic([-1.0, 1.0, -1.0])).to_dict()
        assert data["tail_kind"] == "parabola_negative_definite"
        assert data["tail_order"] == 0


class TestConclusion:
    def test_k3(self):
        result = concluding_lemma(3, 4, True, {1, 2}, [(3.0, 4.0)])
        assert result.passed
        assert result.chain[0] == "d(3) = d(4) = 0"

    def test_k4_two_pieces(self):
        assert concluding_lemma(4, 5, True, {1, 2, 3}, [(4.5, 5.0), (4.0, 4.5)]).passed

    def test_missing_order(self):
        result = concluding_lemma(4, 5, True, {1, 3}, [(4.0, 5.0)])
        assert not result.passed
        assert "[2]" in result.reason

    def test_gap(self):
        assert not concluding_lemma(4, 5, True, {1, 2, 3}, [(4.0, 4.4), (4.5, 5.0)]).passed

    def test_endpoints_required(self):
        assert not concluding_lemma(3, 4, False, {1, 2}, [(3.0, 4.0)]).passed


@pytest.mark.slow
class TestPositivity:
    @pytest.mark.parametrize("j, delta", [(1, 0.007), (2, 0.04)])
    def test_k3(self, ledger3, j, delta):
        result = positivity_lemma(3, 3.0, j, delta, nodes=100, ledger=ledger3)
        assert result.passed
        assert result.nodes == 100
        assert result.estimate.value == pytest.approx(published.POSITIVITY[(3, j)], abs=1e-6)

    def test_k3_first_derivative_margin(self, ledger3):
        result = positivity_lemma(3, 3.0, 1, 0.007, nodes=100, ledger=ledger3)
        assert result.margin == pytest.approx(1.2641e-5, abs=1e-6)
        assert result.planned_nodes <= 100

    def test_k3_larger_budget_fails(self, ledger3):
        assert not positivity_lemma(3, 3.0, 1, 0.008, nodes=100, ledger=ledger3).passed

    @pytest.mark.parametrize("j, delta", [(1, 0.003), (2, 0.027), (3, 0.112)])
    def test_k4(self, ledger4, j, delta):
        result = positivity_lemma(4, 4.0, j, delta, nodes=500, ledger=ledger4)
        assert result.passed
        assert result.estimate.value == pytest.approx(published.POSITIVITY[(4, j)], abs=1e-6)

    def test_rejects_non_positive_delta(self, ledger3):
        with pytest.raises(BudgetError):
            positivity_lemma(3, 3.0, 1, 0.0, ledger=ledger3)


def _check_coefficients(model):
    expected = published.COEFFICIENTS[model.center]
    assert len(model.coeffs) == len(expected)
    for ours, theirs in zip(model.coeffs, expected):
        assert ours == pytest.approx(theirs, rel=1e-5)


@pytest.mark.slow
class TestModelK3:
    def test_coefficients(self, model3):
        _check_coefficients(model3)
        assert all(row["nodes"] >= row["n_star"] for row in model3.table())
        assert max(p.nodes for p in model3.plans) == 500

    def test_budget(self, model3):
        assert model3.budget_sum < model3.total
        assert model3.remainder < published.REMAINDERS[3.5]

    def test_polynomial_matches_coefficients(self, model3):
        for j, value in enumerate(model3.coeffs):
            assert model3.evaluate(3.5, derivative=j) == pytest.approx(value, rel=1e-12)

    def test_left_endpoint(self, model3):
        assert model3.evaluate(3.0) == pytest.approx(published.P_AT_LEFT[3.5], rel=1e-4)

    def test_parabola_certificate(self, model3):
        cert = certify_negative(model3)
        assert cert.tail_kind is TailKind.PARABOLA_NEGATIVE_DEFINITE
        assert cert.tail_order == 8
        chain = published.SIGN_CHAIN[3.5]
        assert cert.values[0] == pytest.approx(chain[0], abs=1e-6)
        assert cert.values[1:] == pytest.approx(tuple(chain[1:]), rel=1e-4)
        assert cert.discriminant == pytest.approx(published.DISCRIMINANT, rel=2e-2)

    def test_dense_sample_negative(self, model3):
        ts = np.linspace(3.0, 4.0, 2001)
        assert max(model3.evaluate(t) for t in ts) + model3.total < 0

    def test_tighter_total_still_certifies(self, model3):
        cert = certify_negative(dataclasses.replace(model3, total=0.066))
        assert cert.right == 4.0

    def test_positive_left_value_fails(self, model3):
        with pytest.raises(CertificationError) as exc:
            certify_negative(dataclasses.replace(model3, total=1.0))
        assert exc.value.order == 0

    def test_agrees_with_direct_quadrature(self, model3, ledger3):
        for t in (3.1, 3.3, 3.5, 3.7, 3.9):
            direct = d_derivative(3, t, 4, 500, ledger3)
            assert abs(model3.evaluate(t) - direct.value) <= model3.total + direct.error


@pytest.mark.slow
class TestModelsK4:
    def test_coefficients(self, model4a, model4b):
        _check_coefficients(model4a)
        _check_coefficients(model4b)

    def test_left_model_constant_tail(self, model4a):
        cert = certify_negative(model4a)
        assert cert.tail_kind is TailKind.CONSTANT_NEGATIVE
        assert model4a.evaluate(4.0) == pytest.approx(published.P_AT_LEFT[4.25], rel=1e-4)

    def test_right_model_constant_tail(self, model4b):
        cert = certify_negative(model4b)
        assert cert.tail_kind is TailKind.CONSTANT_NEGATIVE
        assert model4b.evaluate(4.5) == pytest.approx(published.P_AT_LEFT[4.75], rel=1e-4)
        order, value = published.CHAIN_LAST[4.75]
        assert model4b.evaluate(4.5, derivative=order) == pytest.approx(value, rel=1e-4)

    def test_remainders(self, model4a, model4b):
        assert model4a.remainder < published.REMAINDERS[4.25]
        assert model4b.remainder < published.REMAINDERS[4.75]
