"""
Service functions for evaluating and loading parametric programs
"""
import json
import logging
from pathlib import Path
from typing import Any, Union

import numpy as np
from pydantic import ValidationError

from paramvex.core.exceptions import DimensionMismatchError, InvalidProgramError
from paramvex.models.program import (
    AttainmentMeta,
    CostSpec,
    FeasibleMapping,
    ParametricProgram,
)
from paramvex.schemas.numeric import Box, Tolerances
from paramvex.schemas.program import (
    AffineMaxCostDefinition,
    BuiltinCostDefinition,
    ProgramDefinition,
)

logger = logging.getLogger(__name__)


def as_vector(value: Any, dim: int, name: str) -> np.ndarray:
    """
    Convert a vector-like value to a float array of the expected length

    Raises:
        DimensionMismatchError: if the length differs from dim
    """
    vector = np.atleast_1d(np.asarray(value, dtype=float))
    if vector.ndim != 1 or vector.shape[0] != dim:
        raise DimensionMismatchError(f"{name} must have {dim} components, got shape {vector.shape}")
    if not np.all(np.isfinite(vector)):
        raise ValueError(f"{name} must be finite, got {vector}")
    return vector


def evaluate_cost(p: ParametricProgram, x: Any, y: Any) -> float:
    """phi(x, y)"""
    return p.cost.evaluate(as_vector(x, p.n, "x"), as_vector(y, p.m, "y"))


def feasible_membership(p: ParametricProgram, x: Any, y: Any, tol: Tolerances) -> bool:
    """x in F(y), i.e. A x - B y - c <= feasibility_eps componentwise"""
    residual = p.feasible.residual(as_vector(x, p.n, "x"), as_vector(y, p.m, "y"))
    return bool(np.all(residual <= tol.feasibility_eps))


def feasible_epigraph_membership(
    p: ParametricProgram, x: Any, y: Any, mu: float, tol: Tolerances
) -> bool:
    """
    Membership of (x, y, mu) in G = epi phi intersected with graph F x R

    Args:
        p: Program
        x: Decision vector
        y: Parameter vector
        mu: Cost level
        tol: Tolerances

    Returns:
        True iff x in F(y) and mu >= phi(x, y) - value_eps
    """
    if not feasible_membership(p, x, y, tol):
        return False
    return bool(mu >= evaluate_cost(p, x, y) - tol.value_eps)


def program_from_definition(definition: ProgramDefinition) -> ParametricProgram:
    """
    Build a program from a validated definition document

    Raises:
        InvalidProgramError: if the coefficients do not describe a convex program
    """
    n, m = definition.n, definition.m
    cost_def = definition.cost

    try:
        if isinstance(cost_def, AffineMaxCostDefinition):
            cost = CostSpec.affine_max(
                P=[piece.p for piece in cost_def.pieces],
                Qy=[piece.q for piece in cost_def.pieces],
                r=[piece.r for piece in cost_def.pieces],
            )
        elif isinstance(cost_def, BuiltinCostDefinition):
            cost = CostSpec.named(cost_def.name)
        else:
            cost = CostSpec.quadratic(Q=cost_def.Q, g=cost_def.g, h=cost_def.h)

        if definition.feasible is None or len(definition.feasible.c) == 0:
            feasible = FeasibleMapping.unconstrained(n, m)
        else:
            feasible = FeasibleMapping(
                A=definition.feasible.A, B=definition.feasible.B, c=definition.feasible.c
            )

        attainment_meta = None
        if definition.attainment is not None:
            attainment_meta = AttainmentMeta(
                everywhere=definition.attainment.everywhere,
                regions=[
                    Box(lower=tuple(region.lower), upper=tuple(region.upper))
                    for region in definition.attainment.regions
                ],
            )

        return ParametricProgram(
            name=definition.name,
            cost=cost,
            feasible=feasible,
            n=n,
            m=m,
            attainment_meta=attainment_meta,
        )
    except ValidationError as e:
        raise InvalidProgramError(f"invalid program '{definition.name}': {e}") from e


def load_program(path: Union[str, Path]) -> ParametricProgram:
    """
    Load a program definition file

    Args:
        path: Path of the JSON document

    Returns:
        The parametric program it describes

    Raises:
        InvalidProgramError: if the file is unreadable or malformed
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        definition = ProgramDefinition.model_validate(document)
    except (OSError, json.JSONDecodeError, ValidationError) as e:
        raise InvalidProgramError(f"cannot load program definition {path}: {e}") from e

    logger.info(
        f"Loaded program '{definition.name}' from {path} (n={definition.n}, m={definition.m})"
    )
    return program_from_definition(definition)
