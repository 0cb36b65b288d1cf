"""
Inner minimization kernels: epigraph LP, projected-gradient QP and 1-D builtins

Each kernel evaluates min_x phi(x, y) over F(y) for one parameter y and
reports a certified status. The choice of kernel is plumbing; the analysis
layer only relies on the status conventions of SolveOutcome.
"""
import logging
import math
from typing import Callable, Optional, Tuple

import numpy as np

from paramvex.core.exceptions import (
    NoConvergenceError,
    UndeclaredNonAttainmentError,
)
from paramvex.models.program import CostKind, FeasibleMapping, ParametricProgram
from paramvex.schemas.numeric import ExtendedKind, Tolerances
from paramvex.schemas.solve import LpProblem, SolveOutcome, SolveStatus
from paramvex.services.simplex import solve_lp

logger = logging.getLogger(__name__)

_DYKSTRA_MAX_CYCLES = 20_000
_DYKSTRA_STEP_TOL = 1e-13
_QP_MAX_ITER = 100_000
_NULLSPACE_RTOL = 1e-10
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_BRACKET_MAX_STEPS = 200


def find_feasible_point(
    feasible: FeasibleMapping, y: np.ndarray, tol: Tolerances
) -> Optional[np.ndarray]:
    """
    Phase-1 LP on F(y)

    Returns:
        A vertex of F(y), or None when F(y) is empty
    """
    n = feasible.A.shape[1]
    outcome = solve_lp(
        LpProblem(objective=np.zeros(n), A_ub=feasible.A, b_ub=feasible.rhs(y)), tol
    )
    if outcome.status is SolveStatus.INFEASIBLE:
        return None
    return outcome.minimizer_array


def is_feasible(feasible: FeasibleMapping, y: np.ndarray, tol: Tolerances) -> bool:
    """F(y) is nonempty"""
    return find_feasible_point(feasible, y, tol) is not None


def solve_affine_max(p: ParametricProgram, y: np.ndarray, tol: Tolerances) -> SolveOutcome:
    """
    Minimize max_i (P_i x + Qy_i y + r_i) over F(y) via the epigraph LP

        min t  s.t.  P x - t <= -(Qy y + r),  A x <= c + B y

    Returns:
        The LP outcome projected back onto x; rays keep only the x part
    """
    cost = p.cost
    pieces = cost.r.shape[0]
    rows = p.feasible.rows

    A_ub = np.zeros((pieces + rows, p.n + 1))
    A_ub[:pieces, : p.n] = cost.P
    A_ub[:pieces, p.n] = -1.0
    A_ub[pieces:, : p.n] = p.feasible.A
    b_ub = np.concatenate([-(cost.Qy @ y + cost.r), p.feasible.rhs(y)])
    objective = np.zeros(p.n + 1)
    objective[p.n] = 1.0

    outcome = solve_lp(LpProblem(objective=objective, A_ub=A_ub, b_ub=b_ub), tol)
    if outcome.status is SolveStatus.OPTIMAL:
        x = outcome.minimizer_array[: p.n]
        return SolveOutcome.optimal(outcome.value.value, x)
    if outcome.status is SolveStatus.UNBOUNDED:
        return SolveOutcome.unbounded(ray=np.asarray(outcome.ray)[: p.n])
    return outcome


def project_polyhedron(
    z: np.ndarray, A: np.ndarray, b: np.ndarray, tol: Tolerances
) -> np.ndarray:
    """
    Euclidean projection of z onto { x | A x <= b } by Dykstra's method

    Alternates exact projections onto the halfspaces a_i x <= b_i, carrying
    one correction vector per halfspace.

    Raises:
        NoConvergenceError: if the cycle cap is reached
    """
    if A.shape[0] == 0:
        return z.copy()
    norms = np.einsum("ij,ij->i", A, A)
    active = norms > 0.0
    A, b, norms = A[active], b[active], norms[active]

    x = z.copy()
    corrections = np.zeros((A.shape[0], z.shape[0]))
    for _ in range(_DYKSTRA_MAX_CYCLES):
        previous = x.copy()
        for i in range(A.shape[0]):
            shifted = x + corrections[i]
            excess = A[i] @ shifted - b[i]
            projected = shifted - (excess / norms[i]) * A[i] if excess > 0.0 else shifted
            corrections[i] = shifted - projected
            x = projected
        step = np.linalg.norm(x - previous)
        if step <= _DYKSTRA_STEP_TOL * max(1.0, np.linalg.norm(x)) and np.all(
            A @ x - b <= tol.feasibility_eps
        ):
            return x
    raise NoConvergenceError(f"Dykstra projection did not converge in {_DYKSTRA_MAX_CYCLES} cycles")


def _quadratic_blocks(p: ParametricProgram, y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Hessian Q_xx and gradient offset Q_xy y + g_x of phi(., y)"""
    Q, g = p.cost.Q, p.cost.g
    return Q[: p.n, : p.n], Q[: p.n, p.n :] @ y + g[: p.n]


def _recession_ray(
    hessian: np.ndarray,
    gradient: np.ndarray,
    A: np.ndarray,
    tol: Tolerances,
) -> Optional[np.ndarray]:
    """
    Feasible recession direction along which phi(., y) decreases linearly

    A convex quadratic over a polyhedron is unbounded below exactly when some
    d with A d <= 0 and Q_xx d = 0 has gradient.d < 0. Such d are searched in
    the null space of Q_xx with a box-normalized LP.
    """
    eigenvalues, vectors = np.linalg.eigh(hessian)
    scale = max(1.0, float(np.abs(eigenvalues).max()))
    basis = vectors[:, eigenvalues <= _NULLSPACE_RTOL * scale]
    if basis.shape[1] == 0:
        return None

    k = basis.shape[1]
    A_ub = np.vstack([A @ basis, np.eye(k), -np.eye(k)])
    b_ub = np.concatenate([np.zeros(A.shape[0]), np.ones(2 * k)])
    outcome = solve_lp(LpProblem(objective=basis.T @ gradient, A_ub=A_ub, b_ub=b_ub), tol)
    if outcome.status is not SolveStatus.OPTIMAL or outcome.value.value >= -tol.value_eps:
        return None
    return basis @ outcome.minimizer_array


def solve_qp_projected(p: ParametricProgram, y: np.ndarray, tol: Tolerances) -> SolveOutcome:
    """
    Minimize a convex quadratic phi(., y) over F(y)

    Args:
        p: Program with a quadratic cost
        y: Parameter vector
        tol: Tolerances

    Returns:
        Infeasible when the phase-1 LP fails; Unbounded when a recession ray
        exists (or, as a fallback, when iterates exceed unbounded_threshold
        with decreasing cost); otherwise Optimal at the first projected
        gradient iterate whose projected-gradient norm is <= value_eps

    Raises:
        ValueError: if the cost is not quadratic
        NoConvergenceError: if projected gradient or Dykstra hit their caps
    """
    if p.cost.kind is not CostKind.QUADRATIC:
        raise ValueError(f"solve_qp_projected needs a quadratic cost, got {p.cost.kind.value}")

    x = find_feasible_point(p.feasible, y, tol)
    if x is None:
        return SolveOutcome.infeasible()

    hessian, offset = _quadratic_blocks(p, y)
    A, b = p.feasible.A, p.feasible.rhs(y)
    curvature = float(np.linalg.eigvalsh(hessian).max())

    if curvature <= _NULLSPACE_RTOL:
        # phi(., y) is affine in x: solve the LP exactly
        outcome = solve_lp(LpProblem(objective=offset, A_ub=A, b_ub=b), tol)
        if outcome.status is SolveStatus.OPTIMAL:
            x = outcome.minimizer_array
            return SolveOutcome.optimal(p.cost.evaluate(x, y), x)
        return outcome

    ray = _recession_ray(hessian, hessian @ x + offset, A, tol)
    if ray is not None:
        logger.debug(f"QP unbounded along recession ray {ray}")
        return SolveOutcome.unbounded(ray=ray)

    step = 1.0 / curvature
    cost = p.cost.evaluate(x, y)
    for iteration in range(_QP_MAX_ITER):
        gradient = hessian @ x + offset
        candidate = project_polyhedron(x - step * gradient, A, b, tol)
        projected_gradient = curvature * np.linalg.norm(x - candidate)
        if projected_gradient <= tol.value_eps:
            logger.debug(f"QP converged after {iteration} iterations")
            return SolveOutcome.optimal(cost, x)

        candidate_cost = p.cost.evaluate(candidate, y)
        if np.linalg.norm(candidate) > tol.unbounded_threshold and candidate_cost < cost:
            logger.warning("QP iterates escaped past unbounded_threshold; declaring unbounded")
            return SolveOutcome.unbounded()
        x, cost = candidate, candidate_cost

    raise NoConvergenceError(f"projected gradient did not converge in {_QP_MAX_ITER} iterations")


def _interval(
    p: ParametricProgram, y: np.ndarray, tol: Tolerances
) -> Optional[Tuple[float, float]]:
    """F(y) for n = 1 as [lower, upper], possibly with infinite ends; None if empty"""
    lower, upper = -math.inf, math.inf
    for a, bound in zip(p.feasible.A[:, 0], p.feasible.rhs(y)):
        if a > 0.0:
            upper = min(upper, bound / a)
        elif a < 0.0:
            lower = max(lower, bound / a)
        elif bound < -tol.feasibility_eps:
            return None
    if lower > upper + tol.feasibility_eps:
        return None
    return lower, max(lower, upper)


def _golden_section(f: Callable[[float], float], lower: float, upper: float, xtol: float) -> float:
    """Minimizer of a unimodal f on [lower, upper], compared against both endpoints"""
    a, b = lower, upper
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > xtol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    best = 0.5 * (a + b)
    return min((lower, upper, best), key=lambda t: (f(t), t))


def _bracket(f: Callable[[float], float], start: float, direction: int, tol: Tolerances) -> float:
    """
    Walk from start with doubling steps until f increases

    Returns:
        A point beyond the minimizer along direction

    Raises:
        NoConvergenceError: if the walk passes unbounded_threshold
    """
    step = 1.0
    previous = f(start)
    for _ in range(_BRACKET_MAX_STEPS):
        point = start + direction * step
        if abs(point) > tol.unbounded_threshold:
            break
        value = f(point)
        if value > previous:
            return point
        previous = value
        step *= 2.0
    raise NoConvergenceError("bracket search for a 1-D minimizer did not terminate")


def solve_builtin_1d(p: ParametricProgram, y: np.ndarray, tol: Tolerances) -> SolveOutcome:
    """
    Minimize a scalar builtin cost over the interval F(y)

    Compact intervals use golden-section search. Along an unbounded tail the
    builtin's limit decides: -inf means Unbounded, a finite limit means the
    infimum is approached but not attained (declared via attainment_meta),
    +inf means the minimizer is bracketed and found by golden section.

    Raises:
        ValueError: if the cost is not a builtin or n != 1
        UndeclaredNonAttainmentError: if a finite tail infimum is not declared
    """
    if p.cost.kind is not CostKind.BUILTIN or p.n != 1:
        raise ValueError("solve_builtin_1d needs a builtin cost with n = 1")

    interval = _interval(p, y, tol)
    if interval is None:
        return SolveOutcome.infeasible()
    lower, upper = interval

    builtin = p.cost.builtin_cost

    def f(t: float) -> float:
        return builtin.func(np.array([t]), y)

    for direction, end in ((1, upper), (-1, lower)):
        if math.isfinite(end):
            continue
        limit = builtin.tail_limit(direction, y)
        if limit.kind is ExtendedKind.MINUS_INFINITY:
            ray = np.array([float(direction)])
            return SolveOutcome.unbounded(ray=ray)
        if limit.kind is ExtendedKind.FINITE:
            if p.declares_non_attainment(y):
                return SolveOutcome.not_attained(limit.value)
            raise UndeclaredNonAttainmentError(
                f"{builtin.name} approaches {limit.value} along a tail at y={y.tolist()} "
                "but the program declares no non-attainment there"
            )

    xtol = tol.feasibility_eps
    if not math.isfinite(lower) and not math.isfinite(upper):
        start = 0.0
        direction = -1 if f(start - 1.0) < f(start) else 1
        far = _bracket(f, start, direction, tol)
        lower, upper = (far, start + 1.0) if direction < 0 else (start - 1.0, far)
    elif not math.isfinite(upper):
        upper = _bracket(f, lower, 1, tol)
    elif not math.isfinite(lower):
        lower = _bracket(f, upper, -1, tol)

    x = _golden_section(f, lower, upper, xtol)
    return SolveOutcome.optimal(f(x), np.array([x]))
