"""
Domain models for parametric convex programs
"""
from enum import Enum
from typing import Any, Callable, List, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from paramvex.core.config import settings
from paramvex.core.exceptions import DimensionLimitError
from paramvex.models.builtins import BuiltinCost, get_builtin
from paramvex.schemas.numeric import Ball, Box, ExtendedReal

# Smallest eigenvalue accepted for a quadratic cost before clipping to 0.
PSD_EIGENVALUE_FLOOR = -1e-10


def _frozen_array(value: Any, ndim: int, name: str) -> np.ndarray:
    array = np.array(value, dtype=float)
    if ndim == 2 and array.ndim == 1 and array.size == 0:
        array = array.reshape(0, 0)
    if array.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-dimensional, got shape {array.shape}")
    if not np.all(np.isfinite(array)):
        raise ValueError(f"{name} must contain finite entries")
    array.setflags(write=False)
    return array


class FeasibleMapping(BaseModel):
    """
    Polyhedral feasible set mapping F(y) = { x | A x <= c + B y }.

    graph F = { (x, y) | A x - B y <= c } is a closed convex polyhedron.
    """
    A: np.ndarray = Field(..., description="k x n decision coefficients")
    B: np.ndarray = Field(..., description="k x m parameter coefficients")
    c: np.ndarray = Field(..., description="k right-hand side offsets")

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("A", "B", mode="before")
    @classmethod
    def _coerce_matrix(cls, value: Any) -> np.ndarray:
        return _frozen_array(value, 2, "feasible matrix")

    @field_validator("c", mode="before")
    @classmethod
    def _coerce_vector(cls, value: Any) -> np.ndarray:
        return _frozen_array(value, 1, "feasible offset")

    @model_validator(mode="after")
    def _check_shapes(self) -> "FeasibleMapping":
        rows = self.c.shape[0]
        if self.A.shape[0] != rows or self.B.shape[0] != rows:
            raise ValueError(
                f"A {self.A.shape}, B {self.B.shape} and c {self.c.shape} disagree on row count"
            )
        return self

    @classmethod
    def unconstrained(cls, n: int, m: int) -> "FeasibleMapping":
        return cls(A=np.zeros((0, n)), B=np.zeros((0, m)), c=np.zeros(0))

    @property
    def rows(self) -> int:
        return int(self.c.shape[0])

    def rhs(self, y: np.ndarray) -> np.ndarray:
        """Right-hand side c + B y of F(y)"""
        return self.c + self.B @ y

    def residual(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """A x - B y - c; feasible where every entry is <= 0"""
        return self.A @ x - self.rhs(y)


class CostKind(str, Enum):
    """Supported classes of jointly convex costs"""
    AFFINE_MAX = "affine_max"
    QUADRATIC = "quadratic"
    BUILTIN = "builtin"


class CostSpec(BaseModel):
    """
    Cost phi(x, y), jointly convex by construction.

    - affine_max: phi = max_i (P_i x + Qy_i y + r_i)
    - quadratic: phi = 1/2 z'Qz + g'z + h with z = (x, y) and Q PSD
    - builtin: a closed-form function from the builtin registry
    """
    kind: CostKind
    P: Optional[np.ndarray] = None
    Qy: Optional[np.ndarray] = None
    r: Optional[np.ndarray] = None
    Q: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    h: float = 0.0
    builtin: Optional[str] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @field_validator("P", "Qy", "Q", mode="before")
    @classmethod
    def _coerce_matrix(cls, value: Any) -> Optional[np.ndarray]:
        return None if value is None else _frozen_array(value, 2, "cost matrix")

    @field_validator("r", "g", mode="before")
    @classmethod
    def _coerce_vector(cls, value: Any) -> Optional[np.ndarray]:
        return None if value is None else _frozen_array(value, 1, "cost vector")

    @field_validator("Q")
    @classmethod
    def _check_psd(cls, value: Optional[np.ndarray]) -> Optional[np.ndarray]:
        if value is None:
            return None
        if value.shape[0] != value.shape[1]:
            raise ValueError(f"Q must be square, got {value.shape}")
        if not np.allclose(value, value.T, atol=1e-12):
            raise ValueError("Q must be symmetric")
        eigenvalues, vectors = np.linalg.eigh(value)
        if eigenvalues.size == 0 or eigenvalues.min() >= 0.0:
            return value
        if eigenvalues.min() < PSD_EIGENVALUE_FLOOR:
            raise ValueError(
                f"Q must be positive semidefinite, smallest eigenvalue {eigenvalues.min():.3e}"
            )
        clipped = (vectors * np.clip(eigenvalues, 0.0, None)) @ vectors.T
        return _frozen_array(0.5 * (clipped + clipped.T), 2, "Q")

    @model_validator(mode="after")
    def _check_kind(self) -> "CostSpec":
        if self.kind is CostKind.AFFINE_MAX:
            if self.P is None or self.Qy is None or self.r is None:
                raise ValueError("affine_max cost needs P, Qy and r")
            pieces = self.r.shape[0]
            if pieces == 0:
                raise ValueError("affine_max cost needs at least one piece")
            if self.P.shape[0] != pieces or self.Qy.shape[0] != pieces:
                raise ValueError("P, Qy and r disagree on the number of pieces")
        elif self.kind is CostKind.QUADRATIC:
            if self.Q is None or self.g is None:
                raise ValueError("quadratic cost needs Q and g")
            size = self.g.shape[0]
            if self.Q.shape != (size, size):
                raise ValueError(f"Q must be {size} x {size}, got {self.Q.shape}")
        else:
            if self.builtin is None:
                raise ValueError("builtin cost needs a name")
            try:
                get_builtin(self.builtin)
            except KeyError as e:
                raise ValueError(e.args[0]) from None
        return self

    @classmethod
    def affine_max(cls, P: Any, Qy: Any, r: Any) -> "CostSpec":
        return cls(kind=CostKind.AFFINE_MAX, P=P, Qy=Qy, r=r)

    @classmethod
    def quadratic(cls, Q: Any, g: Any, h: float = 0.0) -> "CostSpec":
        return cls(kind=CostKind.QUADRATIC, Q=Q, g=g, h=h)

    @classmethod
    def named(cls, name: str) -> "CostSpec":
        return cls(kind=CostKind.BUILTIN, builtin=name)

    @property
    def builtin_cost(self) -> BuiltinCost:
        if self.builtin is None:
            raise ValueError(f"{self.kind.value} cost is not a builtin")
        return get_builtin(self.builtin)

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> float:
        """phi(x, y) for dimension-checked vectors"""
        if self.kind is CostKind.AFFINE_MAX:
            return float(np.max(self.P @ x + self.Qy @ y + self.r))
        if self.kind is CostKind.QUADRATIC:
            z = np.concatenate([x, y])
            return float(0.5 * z @ self.Q @ z + self.g @ z + self.h)
        return float(self.builtin_cost.func(x, y))


class AttainmentMeta(BaseModel):
    """Parameters where the infimum is finite but has no minimizer"""
    everywhere: bool = Field(False, description="Non-attainment at every parameter")
    regions: List[Box] = Field(default_factory=list, description="Boxes of non-attainment")

    model_config = ConfigDict(frozen=True)

    def covers(self, y: np.ndarray) -> bool:
        return self.everywhere or any(box.contains(y) for box in self.regions)

    def intersects(self, ball: Ball) -> bool:
        return self.everywhere or any(box.intersects(ball) for box in self.regions)


class ParametricProgram(BaseModel):
    """
    The unit of analysis: v(y) = min_x phi(x, y) subject to x in F(y).
    """
    name: str = Field("custom", description="Identifier used in logs and reports")
    cost: CostSpec
    feasible: FeasibleMapping
    n: int = Field(..., ge=1, description="Decision dimension")
    m: int = Field(..., ge=1, description="Parameter dimension")
    attainment_meta: Optional[AttainmentMeta] = None
    reference_value: Optional[Callable[[np.ndarray], ExtendedReal]] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    @model_validator(mode="after")
    def _check_dimensions(self) -> "ParametricProgram":
        if max(self.n, self.m) > settings.PARAMVEX_MAX_DIM:
            raise DimensionLimitError(
                f"program dimensions n={self.n}, m={self.m} exceed "
                f"PARAMVEX_MAX_DIM={settings.PARAMVEX_MAX_DIM}"
            )
        if self.feasible.rows > settings.PARAMVEX_MAX_ROWS:
            raise DimensionLimitError(
                f"program has {self.feasible.rows} rows, "
                f"PARAMVEX_MAX_ROWS={settings.PARAMVEX_MAX_ROWS}"
            )

        if self.feasible.A.shape[1] != self.n or self.feasible.B.shape[1] != self.m:
            raise ValueError(
                f"feasible mapping shapes A {self.feasible.A.shape}, B {self.feasible.B.shape} "
                f"do not match n={self.n}, m={self.m}"
            )

        cost = self.cost
        if cost.kind is CostKind.AFFINE_MAX:
            if cost.P.shape[1] != self.n or cost.Qy.shape[1] != self.m:
                raise ValueError("affine pieces do not match n and m")
        elif cost.kind is CostKind.QUADRATIC:
            if cost.g.shape[0] != self.n + self.m:
                raise ValueError(f"quadratic cost must act on n + m = {self.n + self.m} variables")
        else:
            builtin = cost.builtin_cost
            if self.n != builtin.decision_dim or self.m < builtin.min_parameter_dim:
                raise ValueError(
                    f"builtin '{builtin.name}' needs n={builtin.decision_dim} "
                    f"and m>={builtin.min_parameter_dim}"
                )

        if self.attainment_meta is not None:
            for box in self.attainment_meta.regions:
                if box.dim != self.m:
                    raise ValueError(
                        f"attainment region has dimension {box.dim}, expected m={self.m}"
                    )
        return self

    def declares_non_attainment(self, y: np.ndarray) -> bool:
        return self.attainment_meta is not None and self.attainment_meta.covers(y)
