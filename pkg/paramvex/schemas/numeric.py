"""
Pydantic models for extended reals, tolerances and parameter-space regions
"""
import math
from enum import Enum
from itertools import product
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

Vector = Tuple[float, ...]


class ExtendedKind(str, Enum):
    """Kind of an extended real"""
    FINITE = "finite"
    PLUS_INFINITY = "plus_infinity"
    MINUS_INFINITY = "minus_infinity"


class ExtendedReal(BaseModel):
    """
    A value on the extended real line.

    Infinities are explicit states describing problem status (empty feasible
    set, unbounded or non-attained minimum); IEEE infinities and NaN are
    rejected as finite values.
    """
    kind: ExtendedKind = Field(..., description="Finite, +inf or -inf")
    value: float = Field(0.0, description="Meaningful only when finite")

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_value(self) -> "ExtendedReal":
        if self.kind is ExtendedKind.FINITE and not math.isfinite(self.value):
            raise ValueError(f"finite extended real needs a finite value, got {self.value}")
        if self.kind is not ExtendedKind.FINITE and self.value != 0.0:
            raise ValueError("infinite extended reals carry no value")
        return self

    @classmethod
    def finite(cls, value: float) -> "ExtendedReal":
        return cls(kind=ExtendedKind.FINITE, value=float(value))

    @classmethod
    def plus_infinity(cls) -> "ExtendedReal":
        return cls(kind=ExtendedKind.PLUS_INFINITY)

    @classmethod
    def minus_infinity(cls) -> "ExtendedReal":
        return cls(kind=ExtendedKind.MINUS_INFINITY)

    @property
    def is_finite(self) -> bool:
        return self.kind is ExtendedKind.FINITE

    @property
    def rank(self) -> int:
        """Position in the total order: -inf < finite < +inf"""
        return {
            ExtendedKind.MINUS_INFINITY: -1,
            ExtendedKind.FINITE: 0,
            ExtendedKind.PLUS_INFINITY: 1,
        }[self.kind]

    def as_float(self) -> float:
        """Float rendering for display and plotting only"""
        if self.kind is ExtendedKind.PLUS_INFINITY:
            return math.inf
        if self.kind is ExtendedKind.MINUS_INFINITY:
            return -math.inf
        return self.value

    def __str__(self) -> str:
        if self.kind is ExtendedKind.PLUS_INFINITY:
            return "+inf"
        if self.kind is ExtendedKind.MINUS_INFINITY:
            return "-inf"
        return repr(self.value)


class Ordering(str, Enum):
    """Result of an extended-real comparison"""
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class Tolerances(BaseModel):
    """
    Numerical tolerance policy.

    Each layer is one order looser than the one below it: constraint
    violations, then cost comparisons, then convexity slack.
    """
    feasibility_eps: float = Field(1e-8, gt=0, description="Constraint violation allowance")
    value_eps: float = Field(1e-7, gt=0, description="Cost comparison allowance")
    convexity_eps: float = Field(1e-6, gt=0, description="Midpoint-convexity slack")
    unbounded_threshold: float = Field(
        1e10, gt=0, description="Magnitude beyond which a descent ray is declared"
    )

    model_config = ConfigDict(frozen=True)

    @model_validator(mode="after")
    def _check_order(self) -> "Tolerances":
        if self.value_eps > self.convexity_eps:
            raise ValueError("value_eps must not exceed convexity_eps")
        return self


TOLERANCE_PROFILES: Dict[str, Tolerances] = {
    "default": Tolerances(),
    "strict": Tolerances(
        feasibility_eps=1e-10, value_eps=1e-9, convexity_eps=1e-8, unbounded_threshold=1e10
    ),
    "loose": Tolerances(
        feasibility_eps=1e-6, value_eps=1e-5, convexity_eps=1e-4, unbounded_threshold=1e8
    ),
}


def get_tolerances(profile: str = "default") -> Tolerances:
    """
    Look up a named tolerance profile

    Raises:
        KeyError: if the profile is unknown
    """
    try:
        return TOLERANCE_PROFILES[profile]
    except KeyError:
        known = ", ".join(sorted(TOLERANCE_PROFILES))
        raise KeyError(f"unknown tolerance profile '{profile}' (known: {known})") from None


def _finite_vector(values: Vector, name: str) -> Vector:
    if len(values) == 0:
        raise ValueError(f"{name} must have at least one component")
    if not all(math.isfinite(v) for v in values):
        raise ValueError(f"{name} must be finite, got {values}")
    return tuple(float(v) for v in values)


class Ball(BaseModel):
    """Open Euclidean ball in parameter space"""
    center: Vector = Field(..., description="Center y0")
    radius: float = Field(..., gt=0, description="Radius")

    model_config = ConfigDict(frozen=True)

    @field_validator("center", mode="before")
    @classmethod
    def _coerce_center(cls, value: object) -> object:
        if isinstance(value, np.ndarray):
            return tuple(value.tolist())
        return value

    @field_validator("center")
    @classmethod
    def _check_center(cls, value: Vector) -> Vector:
        return _finite_vector(value, "center")

    @property
    def dim(self) -> int:
        return len(self.center)

    @property
    def center_array(self) -> np.ndarray:
        return np.asarray(self.center, dtype=float)

    def contains(self, y: np.ndarray) -> bool:
        """Strict membership"""
        return bool(np.linalg.norm(np.asarray(y, dtype=float) - self.center_array) < self.radius)


class Box(BaseModel):
    """Axis-aligned box; its interior is the open analysis region"""
    lower: Vector = Field(..., description="Lower corner")
    upper: Vector = Field(..., description="Upper corner")

    model_config = ConfigDict(frozen=True)

    @field_validator("lower", "upper", mode="before")
    @classmethod
    def _coerce_corner(cls, value: object) -> object:
        if isinstance(value, np.ndarray):
            return tuple(value.tolist())
        return value

    @model_validator(mode="after")
    def _check_corners(self) -> "Box":
        _finite_vector(self.lower, "lower")
        _finite_vector(self.upper, "upper")
        if len(self.lower) != len(self.upper):
            raise ValueError("lower and upper must have the same dimension")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("lower must not exceed upper componentwise")
        return self

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def lower_array(self) -> np.ndarray:
        return np.asarray(self.lower, dtype=float)

    @property
    def upper_array(self) -> np.ndarray:
        return np.asarray(self.upper, dtype=float)

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lower_array + self.upper_array)

    @property
    def diameter(self) -> float:
        return float(np.linalg.norm(self.upper_array - self.lower_array))

    def contains(self, y: np.ndarray) -> bool:
        """Closed membership"""
        y = np.asarray(y, dtype=float)
        return bool(np.all(y >= self.lower_array) and np.all(y <= self.upper_array))

    def distance(self, y: np.ndarray) -> float:
        """Euclidean distance from y to the box"""
        y = np.asarray(y, dtype=float)
        nearest = np.clip(y, self.lower_array, self.upper_array)
        return float(np.linalg.norm(y - nearest))

    def grid(self, points_per_dim: int) -> List[np.ndarray]:
        """
        Inclusive linspace product, first coordinate varying slowest

        Args:
            points_per_dim: Number of points along every axis (at least 2)

        Returns:
            List of parameter vectors in lexicographic order
        """
        if points_per_dim < 2:
            raise ValueError("a grid needs at least 2 points per dimension")
        axes = [
            np.linspace(lo, hi, points_per_dim) for lo, hi in zip(self.lower, self.upper)
        ]
        return [np.array(point, dtype=float) for point in product(*axes)]

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """One uniform point of the box"""
        return rng.uniform(self.lower_array, self.upper_array)

    def intersects(self, ball: Ball) -> bool:
        return self.distance(ball.center_array) < ball.radius
