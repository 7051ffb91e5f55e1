"""Data models for majorant."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Any

EVAL_POINT_TOLERANCE = 1e-12


class Sign(str, Enum):
    """Which of the two trinomials 1 + e(x) ± e((k+2)x) is meant."""

    PLUS = "plus"
    MINUS = "minus"

    @property
    def factor(self) -> int:
        return 1 if self is Sign.PLUS else -1

    @property
    def symbol(self) -> str:
        return "+" if self is Sign.PLUS else "-"


@dataclass(frozen=True)
class PolyFamily:
    """The pair (k, sign) selecting G+ or G- for one conjecture case."""

    k: int
    sign: Sign

    def __post_init__(self) -> None:
        if isinstance(self.sign, str) and not isinstance(self.sign, Sign):
            object.__setattr__(self, "sign", Sign(self.sign))
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be a positive integer, got {self.k!r}")

    @property
    def label(self) -> str:
        return f"G{self.sign.symbol} (k={self.k})"

    @classmethod
    def pair(cls, k: int) -> tuple[PolyFamily, PolyFamily]:
        """Return the (plus, minus) families for k."""
        return cls(k, Sign.PLUS), cls(k, Sign.MINUS)


@dataclass(frozen=True)
class EvalPoint:
    """A point of the half period together with u = cos 2πx."""

    x: float
    u: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.x <= 0.5:
            raise ValueError(f"x must lie in [0, 1/2], got {self.x}")
        if not self.check():
            raise ValueError(f"u={self.u} does not match cos(2π·{self.x})")

    @classmethod
    def from_x(cls, x: float) -> EvalPoint:
        return cls(x=x, u=math.cos(2 * math.pi * x))

    def check(self) -> bool:
        return abs(self.u - math.cos(2 * math.pi * self.x)) <= EVAL_POINT_TOLERANCE


@dataclass(frozen=True)
class HSpec:
    """Exponent t and log power j of the integrand G^t log^j G."""

    t: float
    j: int

    def __post_init__(self) -> None:
        if self.t <= 0:
            raise ValueError(f"t must be positive, got {self.t}")
        if not isinstance(self.j, int) or self.j < 0:
            raise ValueError(f"j must be a nonnegative integer, got {self.j!r}")


@dataclass(frozen=True)
class QuadResult:
    """A quadrature value with its certified worst-case error."""

    value: float
    error_bound: float
    nodes: int
    fourth_bound: float

    @property
    def interval(self) -> tuple[float, float]:
        return self.value - self.error_bound, self.value + self.error_bound

    def contains(self, exact: float) -> bool:
        lo, hi = self.interval
        return lo <= exact <= hi


class Verdict(str, Enum):
    """Outcome of a complete proof run."""

    VERIFIED = "VERIFIED"
    FAILED = "FAILED"


@dataclass
class ProofStep:
    """One certified inequality of a proof, with its margin."""

    name: str
    claim: str
    passed: bool
    value: float | None = None
    error: float | None = None
    margin: float | None = None
    published: float | None = None
    message: str | None = None
    elapsed: float = 0.0
    details: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ProofStep:
        return cls(**data)


@dataclass
class ProofReport:
    """Ordered proof steps for one value of k plus everything needed to audit them."""

    k: int
    verdict: Verdict
    steps: list[ProofStep] = field(default_factory=list)
    config: dict[str, Any] = field(default_factory=dict)
    tables: list[dict[str, Any]] = field(default_factory=list)
    spot_checks: list[dict[str, Any]] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def failed_steps(self) -> list[ProofStep]:
        return [s for s in self.steps if not s.passed]

    @property
    def total_elapsed(self) -> float:
        return sum(s.elapsed for s in self.steps)

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["verdict"] = self.verdict.value
        return data

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ProofReport:
        return cls(
            k=data["k"],
            verdict=Verdict(data["verdict"]),
            steps=[ProofStep.from_dict(s) for s in data.get("steps", [])],
            config=data.get("config", {}),
            tables=data.get("tables", []),
            spot_checks=data.get("spot_checks", []),
            notes=data.get("notes", []),
        )
