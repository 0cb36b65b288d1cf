"""
Dense two-phase simplex with Bland's rule

Solves min c.x subject to A_ub x <= b_ub with x free. The problem is put in
standard form by splitting x = x+ - x- and adding one slack per row; rows
with a negative right-hand side are negated and receive an artificial
variable for phase 1.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from paramvex.core.exceptions import CyclingError, DimensionMismatchError
from paramvex.schemas.numeric import Tolerances
from paramvex.schemas.solve import LpProblem, SolveOutcome

logger = logging.getLogger(__name__)

_PIVOT_EPS = 1e-11


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row, :] /= T[row, col]
    for r in range(T.shape[0]):
        if r != row and T[r, col] != 0.0:
            T[r, :] -= T[r, col] * T[row, :]


def _entering_column(reduced_costs: np.ndarray) -> Optional[int]:
    # Bland: lowest index with a negative reduced cost
    candidates = np.flatnonzero(reduced_costs < -_PIVOT_EPS)
    return int(candidates[0]) if candidates.size else None


def _leaving_row(T: np.ndarray, col: int, basis: List[int]) -> Optional[int]:
    best_ratio = np.inf
    best_row: Optional[int] = None
    for i in range(T.shape[0] - 1):
        a = T[i, col]
        if a <= _PIVOT_EPS:
            continue
        ratio = T[i, -1] / a
        # Ties go to the lowest basic variable index (Bland)
        if ratio < best_ratio - 1e-12 or (
            ratio <= best_ratio + 1e-12 and best_row is not None and basis[i] < basis[best_row]
        ):
            best_ratio = min(ratio, best_ratio)
            best_row = i
    return best_row


def _set_objective(T: np.ndarray, basis: List[int], cost: np.ndarray) -> None:
    T[-1, :] = 0.0
    T[-1, : cost.shape[0]] = cost
    for i, column in enumerate(basis):
        if cost[column] != 0.0:
            T[-1, :] -= cost[column] * T[i, :]


def _iterate(T: np.ndarray, basis: List[int], max_iter: int) -> Tuple[str, Optional[int]]:
    for _ in range(max_iter):
        col = _entering_column(T[-1, :-1])
        if col is None:
            return "optimal", None
        row = _leaving_row(T, col, basis)
        if row is None:
            return "unbounded", col
        _pivot(T, row, col)
        basis[row] = col
    raise CyclingError(f"simplex did not terminate within {max_iter} pivots")


def _drop_artificials(
    T: np.ndarray, basis: List[int], first_artificial: int
) -> Tuple[np.ndarray, List[int]]:
    keep_rows = []
    for i, column in enumerate(basis):
        if column < first_artificial:
            keep_rows.append(i)
            continue
        candidates = np.flatnonzero(np.abs(T[i, :first_artificial]) > _PIVOT_EPS)
        if candidates.size:
            _pivot(T, i, int(candidates[0]))
            basis[i] = int(candidates[0])
            keep_rows.append(i)
        else:
            logger.warning(f"Dropping redundant constraint row {i} after phase 1")

    rows = keep_rows + [T.shape[0] - 1]
    reduced = np.hstack([T[rows, :first_artificial], T[rows, -1:]])
    return reduced, [basis[i] for i in keep_rows]


def solve_lp(lp: LpProblem, tol: Tolerances) -> SolveOutcome:
    """
    Solve an inequality-form LP with free variables

    Args:
        lp: Problem data
        tol: Tolerances; phase-1 optima above feasibility_eps mean infeasible

    Returns:
        Optimal with a vertex minimizer, Infeasible, or Unbounded with a ray d
        such that A_ub d <= 0 and c.d < 0

    Raises:
        DimensionMismatchError: if the data shapes disagree
        CyclingError: if the pivot cap 10 (rows + cols)^2 trips
    """
    c, A, b = lp.objective, lp.A_ub, lp.b_ub
    num_vars, num_rows = lp.num_variables, lp.num_constraints
    if num_vars == 0:
        raise DimensionMismatchError("an LP needs at least one variable")
    if A.ndim != 2 or A.shape != (num_rows, num_vars):
        raise DimensionMismatchError(
            f"A_ub has shape {A.shape}, expected ({num_rows}, {num_vars})"
        )

    sign = np.where(b < 0, -1.0, 1.0)
    rows = A * sign[:, None]
    artificial_rows = np.flatnonzero(b < 0)

    num_std = 2 * num_vars + num_rows
    total = num_std + artificial_rows.size
    T = np.zeros((num_rows + 1, total + 1))
    T[:num_rows, :num_vars] = rows
    T[:num_rows, num_vars : 2 * num_vars] = -rows
    T[:num_rows, 2 * num_vars : num_std] = np.diag(sign)
    T[:num_rows, -1] = b * sign

    basis = [2 * num_vars + i for i in range(num_rows)]
    for j, i in enumerate(artificial_rows):
        T[i, num_std + j] = 1.0
        basis[i] = num_std + j

    max_iter = 10 * (num_rows + total) ** 2 + 10

    # Phase 1: minimize the sum of artificials
    if artificial_rows.size:
        phase_one_cost = np.zeros(total)
        phase_one_cost[num_std:] = 1.0
        _set_objective(T, basis, phase_one_cost)
        _iterate(T, basis, max_iter)
        infeasibility = -T[-1, -1]
        if infeasibility > tol.feasibility_eps:
            logger.debug(f"LP infeasible, phase-1 optimum {infeasibility:.3e}")
            return SolveOutcome.infeasible()
        T, basis = _drop_artificials(T, basis, num_std)

    # Phase 2
    cost = np.zeros(num_std)
    cost[:num_vars] = c
    cost[num_vars : 2 * num_vars] = -c
    _set_objective(T, basis, cost)
    state, entering = _iterate(T, basis, max_iter)

    if state == "unbounded":
        direction = np.zeros(num_std)
        direction[entering] = 1.0
        for i, column in enumerate(basis):
            direction[column] = -T[i, entering]
        ray = direction[:num_vars] - direction[num_vars : 2 * num_vars]
        logger.debug(f"LP unbounded along ray {ray}")
        return SolveOutcome.unbounded(ray=ray)

    solution = np.zeros(num_std)
    for i, column in enumerate(basis):
        solution[column] = T[i, -1]
    x = solution[:num_vars] - solution[num_vars : 2 * num_vars]
    return SolveOutcome.optimal(float(c @ x), x)
