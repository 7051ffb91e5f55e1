"""Configuration management for majorant."""

from __future__ import annotations

import copy
import json
import logging
import os
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

DEFAULT_MAX_NODES = 500
FLOAT_GUARD = 1e-9
ZERO_GUARD = 1e-14


@dataclass
class PositivityBudget:
    """Error budget for one low-order check d^(order)(k) > 0."""

    order: int
    delta: float
    nodes: int


@dataclass
class TaylorBudget:
    """Center, radius, degree and error split of one Taylor model."""

    center: float
    radius: float
    degree: int
    deltas: list[float]
    total: float

    @property
    def interval(self) -> tuple[float, float]:
        return self.center - self.radius, self.center + self.radius


@dataclass
class CaseBudget:
    """Every budget used by the proof for one k."""

    k: int
    order: int  # which derivative of d is modelled
    positivity: list[PositivityBudget]
    models: list[TaylorBudget]
    ell_cap: float | None = None
    coefficient_nodes: int = 500

    def positivity_for(self, order: int) -> PositivityBudget:
        for budget in self.positivity:
            if budget.order == order:
                return budget
        raise KeyError(f"No positivity budget for order {order} (k={self.k})")


DEFAULT_BUDGETS: dict[int, CaseBudget] = {
    3: CaseBudget(
        k=3,
        order=4,
        positivity=[
            PositivityBudget(order=1, delta=0.007, nodes=100),
            PositivityBudget(order=2, delta=0.04, nodes=100),
        ],
        models=[
            TaylorBudget(center=3.5, radius=0.5, degree=10, deltas=[0.005] * 11, total=0.068),
        ],
    ),
    4: CaseBudget(
        k=4,
        order=5,
        positivity=[
            PositivityBudget(order=1, delta=0.003, nodes=500),
            PositivityBudget(order=2, delta=0.027, nodes=500),
            PositivityBudget(order=3, delta=0.112, nodes=500),
        ],
        models=[
            TaylorBudget(
                center=4.25,
                radius=0.25,
                degree=7,
                deltas=[0.65, 0.73, 0.4, 0.15, 0.04, 0.01, 0.01, 0.01],
                total=2.21,
            ),
            TaylorBudget(
                center=4.75,
                radius=0.25,
                degree=6,
                deltas=[8.0, 9.0, 7.0, 3.0, 1.0, 1.0, 1.0],
                total=39.9,
            ),
        ],
        ell_cap=3.7,
    ),
}


class ConfigError(ValueError):
    """Raised when a budget override cannot be applied."""


@dataclass
class Config:
    """Application configuration loaded from environment and budget files."""

    max_nodes: int = field(
        default_factory=lambda: int(os.getenv("MAJORANT_MAX_NODES", str(DEFAULT_MAX_NODES)))
    )
    log_level: str = field(default_factory=lambda: os.getenv("MAJORANT_LOG_LEVEL", "INFO"))
    log_dir: Path = field(default_factory=lambda: Path(os.getenv("MAJORANT_LOG_DIR", "./logs")))
    report_dir: Path = field(
        default_factory=lambda: Path(os.getenv("MAJORANT_REPORT_DIR", "./reports"))
    )
    grid_points: int = field(
        default_factory=lambda: int(os.getenv("MAJORANT_GRID_POINTS", "1000000"))
    )
    vgrid_points: int = field(
        default_factory=lambda: int(os.getenv("MAJORANT_VGRID_POINTS", "10000"))
    )

    # Overrides every quadrature node count when set (--n)
    nodes_override: int | None = None

    budgets: dict[int, CaseBudget] = field(default_factory=lambda: copy.deepcopy(DEFAULT_BUDGETS))

    @classmethod
    def load(
        cls, budget_file: Path | None = None, nodes_override: int | None = None
    ) -> Config:
        """Load config from environment, with an optional JSON budget override."""
        return cls().with_overrides(budget_file, nodes_override)

    def with_overrides(
        self, budget_file: Path | None = None, nodes_override: int | None = None
    ) -> Config:
        """Copy of this config with a node override and budget file applied."""
        config = copy.deepcopy(self)
        if nodes_override is not None:
            config.nodes_override = nodes_override
        if budget_file:
            config.budgets = load_budget_file(budget_file, config.budgets)
        return config

    def budget_for(self, k: int) -> CaseBudget:
        try:
            return self.budgets[k]
        except KeyError:
            raise ConfigError(f"No proof budgets configured for k={k}") from None

    def validate(self) -> list[str]:
        """Return list of validation errors, empty if valid."""
        errors = []

        if self.max_nodes < 1:
            errors.append("MAJORANT_MAX_NODES must be at least 1")
        if self.grid_points < 1000:
            errors.append("MAJORANT_GRID_POINTS must be at least 1000")
        if self.vgrid_points < 100:
            errors.append("MAJORANT_VGRID_POINTS must be at least 100")
        if self.nodes_override is not None and self.nodes_override < 1:
            errors.append("--n must be a positive node count")
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            errors.append(f"Unknown log level {self.log_level!r}")

        for k, case in sorted(self.budgets.items()):
            for pos in case.positivity:
                if pos.delta <= 0:
                    errors.append(f"k={k}: positivity delta for order {pos.order} must be > 0")
                if pos.nodes < 1:
                    errors.append(f"k={k}: positivity nodes for order {pos.order} must be >= 1")
            for model in case.models:
                name = f"k={k}: model at t0={model.center}"
                if len(model.deltas) != model.degree + 1:
                    errors.append(
                        f"{name} needs {model.degree + 1} deltas, got {len(model.deltas)}"
                    )
                if any(d <= 0 for d in model.deltas):
                    errors.append(f"{name} has a non-positive delta")
                if model.radius <= 0:
                    errors.append(f"{name} has a non-positive radius")
                if sum(model.deltas) >= model.total:
                    errors.append(f"{name}: coefficient deltas already exceed the total")

        return errors

    def to_dict(self) -> dict[str, Any]:
        """Serializable echo for reports."""
        return {
            "max_nodes": self.max_nodes,
            "grid_points": self.grid_points,
            "vgrid_points": self.vgrid_points,
            "nodes_override": self.nodes_override,
            "float_guard": FLOAT_GUARD,
            "zero_guard": ZERO_GUARD,
            "budgets": {str(k): asdict(v) for k, v in sorted(self.budgets.items())},
        }


def load_budget_file(path: Path, base: dict[int, CaseBudget]) -> dict[int, CaseBudget]:
    """Merge a JSON budget override into a copy of ``base``.

    Shape: ``{"3": {"positivity": {"1": 0.008}, "models": [{"deltas": [...], "total": ...}]}}``.
    Model entries are matched by position; omitted keys keep their defaults.
    """
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Cannot read budget file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Budget file {path} must hold a JSON object keyed by k")

    budgets = copy.deepcopy(base)
    for key, override in data.items():
        try:
            k = int(key)
        except ValueError:
            raise ConfigError(f"Budget file key {key!r} is not an integer k") from None
        if k not in budgets:
            raise ConfigError(f"Budget file names unknown case k={k}")
        if not isinstance(override, dict):
            raise ConfigError(f"k={k}: budget override must be a JSON object")

        try:
            _merge_case(budgets[k], override)
        except ConfigError as e:
            raise ConfigError(f"k={k}: {e}") from None
        except (TypeError, ValueError, AttributeError) as e:
            raise ConfigError(f"k={k}: malformed budget override: {e}") from e

        logger.warning(f"Budget override applied for k={k} from {path}")

    return budgets


def _merge_case(case: CaseBudget, override: dict[str, Any]) -> None:
    for order, delta in override.get("positivity", {}).items():
        try:
            pos = case.positivity_for(int(order))
        except KeyError as e:
            raise ConfigError(e.args[0]) from None
        if isinstance(delta, dict):
            pos.delta = float(delta.get("delta", pos.delta))
            pos.nodes = int(delta.get("nodes", pos.nodes))
        else:
            pos.delta = float(delta)

    for index, model_override in enumerate(override.get("models", [])):
        if index >= len(case.models):
            raise ConfigError("budget file has more models than the proof uses")
        model = case.models[index]
        for attr in ("center", "radius", "total"):
            if attr in model_override:
                setattr(model, attr, float(model_override[attr]))
        if "degree" in model_override:
            model.degree = int(model_override["degree"])
        if "deltas" in model_override:
            model.deltas = [float(d) for d in model_override["deltas"]]

    if "ell_cap" in override:
        case.ell_cap = float(override["ell_cap"])


def get_config() -> Config:
    """Get the application configuration."""
    return Config.load()
