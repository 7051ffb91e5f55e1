"""Single proof-step runner."""

from __future__ import annotations

import logging
import time
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any

from majorant.analysis.bounds import BoundError
from majorant.analysis.parseval import ParsevalError
from majorant.analysis.quadrature import QuadratureError
from majorant.models import ProofStep
from majorant.prover.taylor import TaylorError

logger = logging.getLogger(__name__)

# Failures expected from the analysis code; anything else is a bug and is logged with a traceback
DOMAIN_ERRORS = (BoundError, ParsevalError, QuadratureError, TaylorError)


@dataclass
class StepOutcome:
    """What a step function reports back."""

    passed: bool
    value: float | None = None
    error: float | None = None
    margin: float | None = None
    message: str | None = None
    details: dict[str, Any] = field(default_factory=dict)


def run_step(
    name: str,
    claim: str,
    func: Callable[[], StepOutcome],
    published: float | None = None,
) -> ProofStep:
    """Run one proof step, turning every failure into a FAILED step.

    Args:
        name: Short identifier shown in reports
        claim: The inequality being certified, in words
        func: Computes the step
        published: Reference value to print beside ours, if any

    Returns:
        ProofStep with timing; never raises for analysis failures
    """
    logger.info(f"Step {name}: {claim}")
    start = time.perf_counter()

    try:
        outcome = func()
    except DOMAIN_ERRORS as e:
        logger.error(f"Step {name} failed: {e}")
        outcome = StepOutcome(passed=False, message=str(e), details=_error_details(e))
    except Exception as e:
        logger.exception(f"Unexpected error in step {name}")
        outcome = StepOutcome(passed=False, message=f"{type(e).__name__}: {e}")

    elapsed = time.perf_counter() - start
    step = ProofStep(
        name=name,
        claim=claim,
        passed=outcome.passed,
        value=outcome.value,
        error=outcome.error,
        margin=outcome.margin,
        published=published,
        message=outcome.message,
        elapsed=elapsed,
        details=outcome.details,
    )

    status = "passed" if step.passed else "FAILED"
    margin = f", margin {step.margin:.6g}" if step.margin is not None else ""
    logger.info(f"Step {name} {status} in {elapsed:.2f}s{margin}")
    return step


def _error_details(error: Exception) -> dict[str, Any]:
    details: dict[str, Any] = {"error_type": type(error).__name__}
    order = getattr(error, "order", None)
    if order is not None:
        details["failing_order"] = order
        details["failing_value"] = getattr(error, "value", None)
    return details
