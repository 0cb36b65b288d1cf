"""
Pydantic models for analysis artifacts: value grids, certificates and reports
"""
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from paramvex.schemas.numeric import Ball, ExtendedReal, Tolerances, Vector
from paramvex.schemas.solve import STATUS_KIND, SolveStatus

# Alpha schedule of the lower-bound propagation check.
ALPHA_SCHEDULE: Tuple[float, ...] = (0.01, 0.05, 0.25)


def to_list(y: Any) -> List[float]:
    """JSON-friendly copy of a vector"""
    return [float(v) for v in np.atleast_1d(np.asarray(y, dtype=float))]


class ValueGrid(BaseModel):
    """
    Sampled value function y -> v(y) with per-point status
    """
    points: List[Vector]
    values: List[ExtendedReal]
    statuses: List[SolveStatus]

    model_config = ConfigDict(frozen=True)

    @field_validator("points", mode="before")
    @classmethod
    def _coerce_points(cls, value: Any) -> Any:
        return [tuple(to_list(point)) for point in value]

    @model_validator(mode="after")
    def _check_lengths(self) -> "ValueGrid":
        if not len(self.points) == len(self.values) == len(self.statuses):
            raise ValueError("points, values and statuses must have equal lengths")
        for value, status in zip(self.values, self.statuses):
            if value.kind is not STATUS_KIND[status]:
                raise ValueError(f"value {value} is inconsistent with status {status.value}")
        return self


class LowerBoundCertificate(BaseModel):
    """
    Evidence that v is bounded from below by ``bound`` on the ball
    """
    center: Vector
    ball: Ball
    bound: float
    evidence: List[Tuple[Vector, float]] = Field(..., description="(y, v(y)) samples")
    value_eps: float = Field(..., gt=0)

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_evidence(self) -> "LowerBoundCertificate":
        for y, value in self.evidence:
            if value < self.bound - self.value_eps:
                raise ValueError(f"evidence v({y}) = {value} lies below the bound {self.bound}")
        return self


class LemmaCombination(BaseModel):
    """
    Convex combination behind the lower-bound propagation:
    y_alpha = y0 + alpha (y0 - y), beta = alpha / (1 + alpha) and
    beta y + (1 - beta) y_alpha = y0.
    """
    y0: Vector
    y: Vector
    alpha: float = Field(..., gt=0)
    y_alpha: Vector
    beta: float

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_combination(self) -> "LemmaCombination":
        if not 0.0 < self.beta < 1.0:
            raise ValueError(f"beta must lie in (0, 1), got {self.beta}")
        y0, y, y_alpha = (np.asarray(v, dtype=float) for v in (self.y0, self.y, self.y_alpha))
        combined = self.beta * y + (1.0 - self.beta) * y_alpha
        scale = max(1.0, float(np.abs(np.concatenate([y0, y, y_alpha])).max()))
        if np.abs(combined - y0).max() > 1e-12 * scale:
            raise ValueError("beta y + (1 - beta) y_alpha must reproduce y0")
        return self

    @classmethod
    def build(cls, y0: Any, y: Any, alpha: float) -> "LemmaCombination":
        y0_arr = np.asarray(y0, dtype=float)
        y_arr = np.asarray(y, dtype=float)
        y_alpha = y0_arr + alpha * (y0_arr - y_arr)
        return cls(
            y0=tuple(to_list(y0_arr)),
            y=tuple(to_list(y_arr)),
            alpha=alpha,
            y_alpha=tuple(to_list(y_alpha)),
            beta=alpha / (1.0 + alpha),
        )


class Verdict(str, Enum):
    """Outcome of one certification check"""
    PASS = "pass"
    FAIL = "fail"
    PRECONDITION_VIOLATED = "precondition-violated"


CHECK_NAMES: Tuple[str, ...] = (
    "equivalence",
    "graph-epigraph",
    "theorem1",
    "theorem2",
    "lemma",
    "lipschitz",
)


class CheckResult(BaseModel):
    """
    Verdict of one check; a fragment of the analysis report
    """
    name: str = Field(..., description="Check name")
    verdict: Verdict
    expected: Optional[bool] = Field(
        None, description="Verdict matches what the instance declares; None when undeclared"
    )
    witness: Optional[Dict[str, Any]] = Field(None, description="Counterexample or evidence")
    details: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_witness(self) -> "CheckResult":
        if self.verdict is Verdict.FAIL and self.witness is None:
            raise ValueError("a failing check must carry a counterexample")
        return self


class AnalysisReport(BaseModel):
    """
    Machine-readable verdicts for one program
    """
    instance: str
    checks: List[CheckResult] = Field(default_factory=list)
    tolerances: Tolerances
    seed: int
    grid: Dict[str, Any] = Field(default_factory=dict, description="Grid description")

    @property
    def succeeded(self) -> bool:
        """Every verdict is a pass or the verdict the instance declares"""
        return all(
            check.verdict is Verdict.PASS or check.expected is True for check in self.checks
        )
