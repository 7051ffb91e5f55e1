"""Fourth-order midpoint rule with second-derivative corrections on [0, 1/2].

On each of N cells of width h = 1/(2N) with midpoint x_n = (2n-1)/(4N)

    ∫ φ ≈ φ(x_n)·h + φ''(x_n)·h³/24,

and the total error is at most ‖φ^IV‖∞ / (60·2^10·N^4).
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable

from majorant.config import DEFAULT_MAX_NODES, FLOAT_GUARD
from majorant.models import QuadResult

logger = logging.getLogger(__name__)

ERROR_CONSTANT = 60 * 2**10


class QuadratureError(ValueError):
    """Raised for invalid quadrature parameters."""


def error_bound(fourth_bound: float, nodes: int) -> float:
    """Worst-case error of the corrected midpoint rule with N nodes."""
    return fourth_bound / (ERROR_CONSTANT * nodes**4)


def midpoints(nodes: int) -> list[float]:
    """Cell midpoints of [0, 1/2] split into N equal cells."""
    return [(2 * n - 1) / (4 * nodes) for n in range(1, nodes + 1)]


def integrate(
    f: Callable[[float], float],
    f2: Callable[[float], float],
    fourth_bound: float,
    N: int,
) -> QuadResult:
    """Integrate f over [0, 1/2] given its exact second derivative f2.

    ``fourth_bound`` must dominate sup |f^IV|; the true integral then lies in
    ``[value - error_bound, value + error_bound]``.
    """
    if not isinstance(N, int) or N < 1:
        raise QuadratureError(f"Node count must be a positive integer, got {N!r}")
    if fourth_bound < 0 or math.isnan(fourth_bound):
        raise QuadratureError(f"Fourth-derivative bound must be >= 0, got {fourth_bound}")

    h = 1.0 / (2 * N)
    correction = 1.0 / (192 * N**3)

    terms: list[float] = []
    for x in midpoints(N):
        terms.append(f(x) * h)
        terms.append(f2(x) * correction)

    # fsum is exactly rounded, so the result does not depend on term order
    value = math.fsum(terms)
    return QuadResult(
        value=value,
        error_bound=error_bound(fourth_bound, N),
        nodes=N,
        fourth_bound=fourth_bound,
    )


def planned_nodes(fourth_bound: float, target_err: float) -> float:
    """Real threshold N* with error_bound(N*) = target_err."""
    if target_err <= 0:
        raise QuadratureError(f"Target error must be positive, got {target_err}")
    if fourth_bound <= 0:
        return 0.0
    return (fourth_bound / (ERROR_CONSTANT * target_err)) ** 0.25


def min_steps(
    fourth_bound: float, target_err: float, max_nodes: int = DEFAULT_MAX_NODES
) -> int:
    """Least N with fourth_bound / (60·2^10·N^4) < target_err.

    Warns (but still answers) when the result exceeds ``max_nodes``.
    """
    if target_err <= 0:
        raise QuadratureError(f"Target error must be positive, got {target_err}")
    if fourth_bound <= 0:
        return 1

    n = max(1, math.ceil(planned_nodes(fourth_bound, target_err)))
    while error_bound(fourth_bound, n) >= target_err:
        n += 1
    while n > 1 and error_bound(fourth_bound, n - 1) < target_err:
        n -= 1

    if n > max_nodes:
        logger.warning(
            f"Planned node count {n} exceeds the cap of {max_nodes} "
            f"(bound {fourth_bound:.3e}, target {target_err:.3e})"
        )
    return n


def guarded_less(a: float, b: float) -> bool:
    """a < b with a relative floating-point guard of FLOAT_GUARD."""
    return a + FLOAT_GUARD * max(abs(a), abs(b)) < b
