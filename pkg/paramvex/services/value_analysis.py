"""
Value function v, feasible cost space F_phi and auxiliary problem v_phi
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, List, Sequence, TypeVar

import numpy as np

from paramvex.core.config import settings
from paramvex.core.exceptions import BracketExpansionError
from paramvex.models.program import CostKind, ParametricProgram
from paramvex.schemas.numeric import Box, ExtendedReal, Tolerances
from paramvex.schemas.report import ValueGrid
from paramvex.schemas.solve import SolveOutcome, SolveStatus
from paramvex.services.programs import as_vector
from paramvex.services.solvers import solve_affine_max, solve_builtin_1d, solve_qp_projected

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

_BRACKET_MAX_EXPANSIONS = 80
_BISECTION_MAX_STEPS = 200


def parallel_map(func: Callable[[T], R], items: Sequence[T]) -> List[R]:
    """
    Map func over items on the shared thread pool, preserving input order
    """
    workers = settings.PARAMVEX_WORKERS
    if workers <= 1 or len(items) < 2:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def value_function(p: ParametricProgram, y: Any, tol: Tolerances) -> SolveOutcome:
    """
    Evaluate v(y) = min_x phi(x, y) subject to x in F(y)

    The value follows the extended-real conventions: an empty F(y) gives
    +inf, an unbounded or non-attained minimum gives -inf.

    Args:
        p: Program
        y: Parameter vector
        tol: Tolerances

    Returns:
        Outcome of the kernel matching the cost kind
    """
    y = as_vector(y, p.m, "y")
    if p.cost.kind is CostKind.AFFINE_MAX:
        outcome = solve_affine_max(p, y, tol)
    elif p.cost.kind is CostKind.QUADRATIC:
        outcome = solve_qp_projected(p, y, tol)
    else:
        outcome = solve_builtin_1d(p, y, tol)
    logger.debug(f"v({y.tolist()}) for {p.name}: {outcome.status.value} {outcome.value}")
    return outcome


def evaluate_many(
    p: ParametricProgram, points: Sequence[Any], tol: Tolerances
) -> List[SolveOutcome]:
    """v at every point, evaluated concurrently, in input order"""
    return parallel_map(lambda y: value_function(p, y, tol), points)


def sweep(p: ParametricProgram, box: Box, points_per_dim: int, tol: Tolerances) -> ValueGrid:
    """
    Sample v over the inclusive grid of a box

    Args:
        p: Program
        box: Parameter box, its dimension must equal p.m
        points_per_dim: Grid points per axis (at least 2)
        tol: Tolerances

    Returns:
        ValueGrid ordered by grid index
    """
    if box.dim != p.m:
        raise ValueError(f"box has dimension {box.dim}, program parameter dimension is {p.m}")
    points = box.grid(points_per_dim)
    logger.info(f"Sweeping {p.name} over {len(points)} grid points")
    outcomes = evaluate_many(p, points, tol)
    return ValueGrid(
        points=points,
        values=[outcome.value for outcome in outcomes],
        statuses=[outcome.status for outcome in outcomes],
    )


def membership_from_outcome(outcome: SolveOutcome, mu: float, tol: Tolerances) -> bool:
    """F_phi(y) membership of mu given an already computed v(y)"""
    if outcome.status is SolveStatus.OPTIMAL:
        return bool(mu >= outcome.value.value - tol.value_eps)
    if outcome.status is SolveStatus.UNBOUNDED:
        return True
    if outcome.status is SolveStatus.INF_NOT_ATTAINED:
        return bool(mu > outcome.infimum_hint + tol.value_eps)
    return False


def fcost_membership(p: ParametricProgram, y: Any, mu: float, tol: Tolerances) -> bool:
    """
    mu in F_phi(y) = { mu | exists x in F(y) with mu >= phi(x, y) }

    Args:
        p: Program
        y: Parameter vector
        mu: Cost level
        tol: Tolerances

    Returns:
        True iff some feasible decision reaches cost mu or below
    """
    outcome = value_function(p, y, tol)
    return membership_from_outcome(outcome, mu, tol)


def aux_value_function(p: ParametricProgram, y: Any, tol: Tolerances) -> ExtendedReal:
    """
    Evaluate v_phi(y) = min mu subject to mu in F_phi(y)

    Only the membership oracle is queried. F_phi(y) is an up-set, so its
    lower boundary is located by geometric bracketing and bisection.

    Args:
        p: Program
        y: Parameter vector
        tol: Tolerances

    Returns:
        +inf if no mu up to unbounded_threshold is a member, -inf if
        -unbounded_threshold is a member or the minimum is declared not
        attained, the boundary of F_phi(y) otherwise

    Raises:
        BracketExpansionError: if the boundary cannot be bracketed
    """
    y = as_vector(y, p.m, "y")
    threshold = tol.unbounded_threshold

    def member(mu: float) -> bool:
        return fcost_membership(p, y, mu, tol)

    if not member(threshold):
        return ExtendedReal.plus_infinity()
    if member(-threshold):
        return ExtendedReal.minus_infinity()
    if p.declares_non_attainment(y):
        # The infimum exists but F_phi(y) has no least element
        return ExtendedReal.minus_infinity()

    expansions = 0
    if member(0.0):
        lo, hi = -1.0, 0.0
        while member(lo):
            hi, lo = lo, 2.0 * lo
            expansions += 1
            if expansions > _BRACKET_MAX_EXPANSIONS:
                raise BracketExpansionError(f"cannot bracket v_phi({y.tolist()}) from below")
    else:
        lo, hi = 0.0, 1.0
        while not member(hi):
            lo, hi = hi, 2.0 * hi
            expansions += 1
            if expansions > _BRACKET_MAX_EXPANSIONS:
                raise BracketExpansionError(f"cannot bracket v_phi({y.tolist()}) from above")

    for _ in range(_BISECTION_MAX_STEPS):
        if hi - lo <= 0.5 * tol.value_eps:
            break
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if member(mid):
            hi = mid
        else:
            lo = mid

    # Membership admits levels down to value_eps below the minimum
    boundary = 0.5 * (lo + hi) + tol.value_eps
    return ExtendedReal.finite(float(np.float64(boundary)))
