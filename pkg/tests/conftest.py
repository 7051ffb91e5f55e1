"""Shared fixtures."""

from __future__ import annotations

import logging

import pytest

from majorant.analysis.bounds import build_ledger
from majorant.config import DEFAULT_BUDGETS
from majorant.prover.taylor import build_taylor_model


@pytest.fixture(autouse=True)
def isolated_dirs(tmp_path, monkeypatch):
    """Keep logs and reports out of the working tree; drop CLI log handlers afterwards."""
    monkeypatch.setenv("MAJORANT_LOG_DIR", str(tmp_path / "logs"))
    monkeypatch.setenv("MAJORANT_REPORT_DIR", str(tmp_path / "reports"))
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "_majorant", False)]:
        root.removeHandler(handler)
        handler.close()


@pytest.fixture(scope="session")
def ledger3():
    return build_ledger(3)


@pytest.fixture(scope="session")
def ledger4():
    return build_ledger(4, ell_cap=DEFAULT_BUDGETS[4].ell_cap)


def _model(k, index, ledger):
    case = DEFAULT_BUDGETS[k]
    budget = case.models[index]
    return build_taylor_model(
        k, case.order, budget.center, budget.radius, budget.degree,
        budget.deltas, budget.total, ledger=ledger,
    )


@pytest.fixture(scope="session")
def model3(ledger3):
    return _model(3, 0, ledger3)


@pytest.fixture(scope="session")
def model4a(ledger4):
    return _model(4, 0, ledger4)


@pytest.fixture(scope="session")
def model4b(ledger4):
    return _model(4, 1, ledger4)
