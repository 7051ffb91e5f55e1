"""Proof orchestration for k = 3 and k = 4."""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

from majorant.analysis.bounds import BoundLedger, build_ledger
from majorant.analysis.parseval import endpoint_check
from majorant.config import Config, ConfigError, get_config
from majorant.models import ProofReport, ProofStep, Verdict
from majorant.prover.steps import StepOutcome, run_step
from majorant.prover.taylor import (
    TaylorModel,
    build_taylor_model,
    certify_negative,
    concluding_lemma,
    d_derivative,
    positivity_lemma,
)
from majorant.report import published

logger = logging.getLogger(__name__)

SUPPORTED_K = (3, 4)
SPOT_OFFSETS = (0.1, 0.5, 0.9)

DELTA_NOTE = (
    "The k=4 second-derivative check budgets each integral with delta = 0.027; "
    "the published conclusion subtracts 2*0.0027. The larger value is used here "
    "and the inequality holds with either."
)


class ProofError(Exception):
    """Raised when a proof cannot be started."""


class ProofEngine:
    """Runs the certified inequality chain for one k."""

    def __init__(
        self,
        config: Config,
        ledger_factory: Callable[..., BoundLedger] = build_ledger,
    ) -> None:
        self.config = config
        self._ledger_factory = ledger_factory
        self._models: list[TaylorModel] = []
        self._negative_intervals: list[tuple[float, float]] = []
        self._positive_orders: set[int] = set()
        self._endpoints_vanish = False

    @classmethod
    def create(cls, config: Config | None = None) -> ProofEngine:
        return cls(config or get_config())

    def _ledger(self, k: int) -> BoundLedger:
        budget = self.config.budget_for(k)
        return self._ledger_factory(
            k, self.config.grid_points, budget.ell_cap, self.config.vgrid_points
        )

    def _nodes(self, default: int) -> int:
        return self.config.nodes_override or default

    def prove(self, k: int) -> ProofReport:
        """Run every step for k and assemble the report."""
        if k not in SUPPORTED_K:
            raise ProofError(f"Proofs are set up for k in {SUPPORTED_K}, got {k}")
        errors = self.config.validate()
        if errors:
            raise ProofError("Invalid configuration: " + "; ".join(errors))

        try:
            budget = self.config.budget_for(k)
        except ConfigError as e:
            raise ProofError(str(e)) from e

        self._models = []
        self._negative_intervals = []
        self._positive_orders = set()
        self._endpoints_vanish = False

        logger.info(f"Starting proof for k={k}")
        ledger = self._ledger(k)
        steps: list[ProofStep] = []

        steps.append(run_step(
            "endpoints",
            f"d({k}) = d({k + 1}) = 0",
            lambda: self._endpoints(k, ledger),
        ))

        for pos in budget.positivity:
            steps.append(run_step(
                f"positivity_d{pos.order}",
                f"d^({pos.order})({k}) > 0",
                lambda pos=pos: self._positivity(k, pos.order, pos.delta, pos.nodes, ledger),
                published=published.POSITIVITY.get((k, pos.order)),
            ))

        for model_budget in budget.models:
            a, b = model_budget.interval
            steps.append(run_step(
                f"negativity_d{budget.order}_{a:g}_{b:g}",
                f"d^({budget.order})(t) < 0 for t in [{a:g}, {b:g}]",
                lambda mb=model_budget: self._negativity(k, budget.order, mb, ledger),
                published=published.P_AT_LEFT.get(model_budget.center),
            ))

        steps.append(run_step(
            "conclusion",
            f"d(t) > 0 for t in ({k}, {k + 1})",
            lambda: self._conclusion(k, budget.order),
        ))

        verdict = Verdict.VERIFIED if all(s.passed for s in steps) else Verdict.FAILED
        report = ProofReport(
            k=k,
            verdict=verdict,
            steps=steps,
            config=self._config_echo(k, ledger),
            tables=[self._table(m) for m in self._models],
            spot_checks=self._spot_checks(k, ledger),
            notes=[DELTA_NOTE] if k == 4 else [],
        )

        if verdict is Verdict.VERIFIED:
            logger.info(f"k={k}: VERIFIED in {report.total_elapsed:.1f}s")
        else:
            names = ", ".join(s.name for s in report.failed_steps)
            logger.error(f"k={k}: FAILED at {names}")
        return report

    # -- steps ---------------------------------------------------------------

    def _endpoints(self, k: int, ledger: BoundLedger) -> StepOutcome:
        check = endpoint_check(k, ledger)
        self._endpoints_vanish = check.passed
        difference = max(abs(float(r.exact_plus - r.exact_minus)) for r in check.rows)
        return StepOutcome(
            passed=check.passed,
            value=difference,
            error=0.0,
            margin=check.worst_slack,
            details={"rows": [r.to_dict() for r in check.rows]},
        )

    def _positivity(
        self, k: int, order: int, delta: float, nodes: int, ledger: BoundLedger
    ) -> StepOutcome:
        result = positivity_lemma(
            k, float(k), order, delta,
            nodes=self._nodes(nodes), ledger=ledger, max_nodes=self.config.max_nodes,
        )
        if result.passed:
            self._positive_orders.add(order)
        return StepOutcome(
            passed=result.passed,
            value=result.estimate.value,
            error=result.estimate.error,
            margin=result.margin,
            details={
                "delta": delta,
                "fourth_bound": result.fourth_bound,
                "published_fourth_bound": published.POSITIVITY_FOURTH_BOUNDS.get((k, order)),
                "planned_nodes": result.planned_nodes,
                "nodes": result.nodes,
                "integral_minus": result.estimate.minus.value,
                "integral_plus": result.estimate.plus.value,
            },
        )

    def _negativity(self, k: int, order: int, model_budget, ledger: BoundLedger) -> StepOutcome:
        case = self.config.budget_for(k)
        model = build_taylor_model(
            k, order, model_budget.center, model_budget.radius, model_budget.degree,
            model_budget.deltas, model_budget.total,
            ledger=ledger,
            nodes=self._nodes(case.coefficient_nodes),
            max_nodes=self.config.max_nodes,
        )
        self._models.append(model)
        certificate = certify_negative(model)
        self._negative_intervals.append((certificate.left, certificate.right))

        p_left = model.evaluate(certificate.left)
        return StepOutcome(
            passed=True,
            value=p_left,
            error=model.budget_sum,
            margin=-max(certificate.values, default=certificate.leading),
            details={
                "center": model.center,
                "radius": model.radius,
                "remainder": model.remainder,
                "total": model.total,
                "certificate": certificate.to_dict(),
            },
        )

    def _conclusion(self, k: int, order: int) -> StepOutcome:
        conclusion = concluding_lemma(
            k, order, self._endpoints_vanish, self._positive_orders, self._negative_intervals
        )
        return StepOutcome(
            passed=conclusion.passed,
            message=conclusion.reason or None,
            details={"chain": conclusion.chain},
        )

    # -- report pieces -------------------------------------------------------

    def _table(self, model: TaylorModel) -> dict:
        table = model.to_dict()
        number = next(
            (n for n, key in published.TABLES.items() if key == (model.k, model.center)), None
        )
        table["table"] = number
        for row in table["rows"]:
            j = row["j"]
            row["published_d_bar"] = _lookup(published.COEFFICIENTS, model.center, j)
            row["published_fourth_bound"] = _lookup(published.FOURTH_BOUNDS, model.center, j)
            row["published_n_star"] = _lookup(published.N_STAR, model.center, j)
        return table

    def _spot_checks(self, k: int, ledger: BoundLedger) -> list[dict]:
        """Non-certified direct evaluations of d(t) inside (k, k+1)."""
        checks = []
        for offset in SPOT_OFFSETS:
            t = k + offset
            try:
                estimate = d_derivative(k, t, 0, self.config.max_nodes, ledger)
            except Exception as e:  # diagnostics only; never affects the verdict
                logger.warning(f"Spot check at t={t} skipped: {e}")
                continue
            checks.append({
                "t": t,
                "value": estimate.value,
                "error": estimate.error,
                "positive": estimate.value > 0,
            })
        return checks

    def _config_echo(self, k: int, ledger: BoundLedger) -> dict:
        echo = self.config.to_dict()
        echo["budgets"] = {str(k): echo["budgets"][str(k)]}
        ledger_dict = ledger.to_dict()
        for key in ("ell_derived", "ell_max"):
            if math.isinf(ledger_dict[key]):
                ledger_dict[key] = None
        echo["ledger"] = ledger_dict
        echo["remainders"] = [m.remainder for m in self._models]
        return echo


def _lookup(values: dict, key: float, index: int):
    """Published table entry, or None when the model has no published counterpart."""
    row = values.get(key)
    if row is None or index >= len(row):
        return None
    return row[index]


def prove(k: int, config: Config | None = None) -> ProofReport:
    """Run the proof for k with the given (or environment) configuration."""
    return ProofEngine.create(config).prove(k)
