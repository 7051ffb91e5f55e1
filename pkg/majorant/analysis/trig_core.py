"""Closed-form evaluation of G±, its x-derivatives and the integrands G^t log^j G.

G±(x) = |1 + e(x) ± e((k+2)x)|² = 3 + 2[cos 2πx ± cos 2π(k+1)x ± cos 2π(k+2)x].

Everything here is evaluated in x; the Chebyshev u-forms live in ``bounds``.
Functions accept floats or numpy arrays for ``x`` unless noted.
"""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np

from majorant.config import ZERO_GUARD
from majorant.models import HSpec, PolyFamily

MAX_DERIVATIVE = 4

# m mod 4 -> (sign, trig function) of d^m/dx^m cos(ωx) / ω^m
_DERIVATIVE_PATTERN = {
    0: (1.0, np.cos),
    1: (-1.0, np.sin),
    2: (-1.0, np.cos),
    3: (1.0, np.sin),
}


def frequencies(fam: PolyFamily) -> tuple[float, float, float]:
    """Angular frequencies of the three cosines in G."""
    two_pi = 2 * math.pi
    return two_pi, two_pi * (fam.k + 1), two_pi * (fam.k + 2)


def eval_G(fam: PolyFamily, x):
    """G±(x); lies in [0, 9]."""
    w1, w2, w3 = frequencies(fam)
    s = fam.sign.factor
    return 3.0 + 2.0 * (np.cos(w1 * x) + s * (np.cos(w2 * x) + np.cos(w3 * x)))


def eval_G_deriv(fam: PolyFamily, m: int, x):
    """m-th x-derivative of G± for 0 <= m <= 4."""
    if not 0 <= m <= MAX_DERIVATIVE:
        raise ValueError(f"Derivative order must be in 0..{MAX_DERIVATIVE}, got {m}")
    if m == 0:
        return eval_G(fam, x)

    sign, func = _DERIVATIVE_PATTERN[m % 4]
    w1, w2, w3 = frequencies(fam)
    s = fam.sign.factor
    total = w1**m * func(w1 * x) + s * (w2**m * func(w2 * x) + w3**m * func(w3 * x))
    return 2.0 * sign * total


def _log_combination(L: float, j: int, coeffs: list[float]) -> float:
    """Σ coeffs[i] · L^(j-i), skipping terms whose power would be negative."""
    total = 0.0
    for i, c in enumerate(coeffs):
        power = j - i
        if c == 0 or power < 0:
            continue
        total += c * L**power
    return total


def eval_H(fam: PolyFamily, spec: HSpec, x: float) -> float:
    """H(x) = G^t log^j G, continuously extended by 0 at zeros of G."""
    v = float(eval_G(fam, x))
    if v < ZERO_GUARD:
        return 0.0
    return v**spec.t * math.log(v) ** spec.j


def eval_H_second(fam: PolyFamily, spec: HSpec, x: float) -> float:
    """Second x-derivative of H.

    H'' = G''G^(t-1)[tL^j + jL^(j-1)]
        + G'²G^(t-2)[t(t-1)L^j + j(2t-1)L^(j-1) + j(j-1)L^(j-2)],   L = log G.
    For (t, j) = (1, 0) this is just G''.
    """
    t, j = spec.t, spec.j
    if t == 1 and j == 0:
        return float(eval_G_deriv(fam, 2, x))
    if t < 2:
        raise ValueError(f"eval_H_second needs t >= 2 or (t, j) = (1, 0), got ({t}, {j})")

    v = float(eval_G(fam, x))
    if v < ZERO_GUARD:
        return 0.0

    g1 = float(eval_G_deriv(fam, 1, x))
    g2 = float(eval_G_deriv(fam, 2, x))
    L = math.log(v)

    first = _log_combination(L, j, [t, j])
    second = _log_combination(L, j, [t * (t - 1), j * (2 * t - 1), j * (j - 1)])
    return g2 * v ** (t - 1) * first + g1 * g1 * v ** (t - 2) * second


def integrand_pair(
    fam: PolyFamily, spec: HSpec
) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """(H, H'') as one-argument callables for ``quadrature.integrate``."""

    def f(x: float) -> float:
        return eval_H(fam, spec, x)

    def f2(x: float) -> float:
        return eval_H_second(fam, spec, x)

    return f, f2
