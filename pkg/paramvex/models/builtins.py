"""
Registry of closed-form convex builtin costs
"""
import math
from typing import Callable, Dict

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from paramvex.schemas.numeric import ExtendedReal


class BuiltinCost(BaseModel):
    """
    A named convex function phi(x, y) defined on all of R^n x R^m.

    ``tail_limit(direction, y)`` is the limit of phi(., y) as the scalar
    decision variable runs to +inf (direction +1) or -inf (direction -1).
    """
    name: str = Field(..., description="Registry key")
    description: str = Field(..., description="Human readable formula")
    decision_dim: int = Field(1, description="Required decision dimension")
    min_parameter_dim: int = Field(1, description="Smallest admissible parameter dimension")
    func: Callable[[np.ndarray, np.ndarray], float]
    tail_limit: Callable[[int, np.ndarray], ExtendedReal]

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def _exp_neg(x: np.ndarray, y: np.ndarray) -> float:
    return math.exp(-float(x[0]))


def _exp_neg_tail(direction: int, y: np.ndarray) -> ExtendedReal:
    if direction > 0:
        return ExtendedReal.finite(0.0)
    return ExtendedReal.plus_infinity()


def _abs_diff(x: np.ndarray, y: np.ndarray) -> float:
    return abs(float(x[0]) - float(y[0]))


def _abs_diff_tail(direction: int, y: np.ndarray) -> ExtendedReal:
    return ExtendedReal.plus_infinity()


BUILTINS: Dict[str, BuiltinCost] = {
    "exp_neg": BuiltinCost(
        name="exp_neg",
        description="exp(-x_1)",
        func=_exp_neg,
        tail_limit=_exp_neg_tail,
    ),
    "abs_diff": BuiltinCost(
        name="abs_diff",
        description="|x_1 - y_1|",
        func=_abs_diff,
        tail_limit=_abs_diff_tail,
    ),
}


def get_builtin(name: str) -> BuiltinCost:
    """
    Look up a builtin cost by name

    Raises:
        KeyError: if the name is not registered
    """
    try:
        return BUILTINS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTINS))
        raise KeyError(f"unknown builtin cost '{name}' (known: {known})") from None
