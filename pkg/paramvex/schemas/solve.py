"""
Pydantic models for inner minimization results
"""
from enum import Enum
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from paramvex.schemas.numeric import ExtendedKind, ExtendedReal, Vector


class SolveStatus(str, Enum):
    """Status of one inner minimization; values double as CSV status strings"""
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"
    INF_NOT_ATTAINED = "not_attained"


# Extended-real kind each status must carry.
STATUS_KIND = {
    SolveStatus.OPTIMAL: ExtendedKind.FINITE,
    SolveStatus.INFEASIBLE: ExtendedKind.PLUS_INFINITY,
    SolveStatus.UNBOUNDED: ExtendedKind.MINUS_INFINITY,
    SolveStatus.INF_NOT_ATTAINED: ExtendedKind.MINUS_INFINITY,
}


def _to_tuple(value: Any) -> Any:
    if isinstance(value, np.ndarray):
        return tuple(float(v) for v in value)
    return value


class SolveOutcome(BaseModel):
    """
    Result of one evaluation of min_x phi(x, y) over F(y)
    """
    status: SolveStatus
    value: ExtendedReal
    minimizer: Optional[Vector] = Field(None, description="Optimal decision (optimal only)")
    infimum_hint: Optional[float] = Field(
        None, description="Finite infimum that is not attained (not_attained only)"
    )
    ray: Optional[Vector] = Field(None, description="Certified descent ray (unbounded only)")

    model_config = ConfigDict(frozen=True)

    @field_validator("minimizer", "ray", mode="before")
    @classmethod
    def _coerce_vector(cls, value: Any) -> Any:
        return _to_tuple(value)

    @model_validator(mode="after")
    def _check_status(self) -> "SolveOutcome":
        if self.value.kind is not STATUS_KIND[self.status]:
            raise ValueError(f"status {self.status.value} cannot carry value {self.value}")
        if (self.status is SolveStatus.OPTIMAL) != (self.minimizer is not None):
            raise ValueError("a minimizer is present exactly for optimal outcomes")
        if self.infimum_hint is not None and self.status is not SolveStatus.INF_NOT_ATTAINED:
            raise ValueError("infimum_hint is reserved for not_attained outcomes")
        if self.ray is not None and self.status is not SolveStatus.UNBOUNDED:
            raise ValueError("a ray is reserved for unbounded outcomes")
        return self

    @classmethod
    def optimal(cls, value: float, minimizer: np.ndarray) -> "SolveOutcome":
        return cls(
            status=SolveStatus.OPTIMAL,
            value=ExtendedReal.finite(value),
            minimizer=minimizer,
        )

    @classmethod
    def infeasible(cls) -> "SolveOutcome":
        return cls(status=SolveStatus.INFEASIBLE, value=ExtendedReal.plus_infinity())

    @classmethod
    def unbounded(cls, ray: Optional[np.ndarray] = None) -> "SolveOutcome":
        return cls(status=SolveStatus.UNBOUNDED, value=ExtendedReal.minus_infinity(), ray=ray)

    @classmethod
    def not_attained(cls, infimum: float) -> "SolveOutcome":
        return cls(
            status=SolveStatus.INF_NOT_ATTAINED,
            value=ExtendedReal.minus_infinity(),
            infimum_hint=infimum,
        )

    @property
    def minimizer_array(self) -> np.ndarray:
        if self.minimizer is None:
            raise ValueError(f"{self.status.value} outcome has no minimizer")
        return np.asarray(self.minimizer, dtype=float)


class LpProblem(BaseModel):
    """
    min c.x subject to A_ub x <= b_ub, with x free
    """
    objective: np.ndarray = Field(..., description="Cost vector c (length N)")
    A_ub: np.ndarray = Field(..., description="K x N constraint matrix")
    b_ub: np.ndarray = Field(..., description="Right-hand side (length K)")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("objective", "b_ub", mode="before")
    @classmethod
    def _coerce_vector(cls, value: Any) -> np.ndarray:
        return np.atleast_1d(np.asarray(value, dtype=float))

    @field_validator("A_ub", mode="before")
    @classmethod
    def _coerce_matrix(cls, value: Any) -> np.ndarray:
        return np.asarray(value, dtype=float)

    @property
    def num_variables(self) -> int:
        return int(self.objective.shape[0])

    @property
    def num_constraints(self) -> int:
        return int(self.b_ub.shape[0])
