"""
Numerical certifiers for the continuity and convexity properties of v

Each check_* function returns a CheckResult instead of raising when a
property fails; the witness of a failing verdict is a concrete
counterexample. Solver errors propagate unchanged.
"""
import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from paramvex.core.exceptions import PreconditionViolatedError
from paramvex.models.program import ParametricProgram
from paramvex.schemas.numeric import Ball, Box, ExtendedKind, ExtendedReal, Ordering, Tolerances
from paramvex.schemas.report import (
    ALPHA_SCHEDULE,
    CheckResult,
    LemmaCombination,
    LowerBoundCertificate,
    Verdict,
    to_list,
)
from paramvex.schemas.solve import SolveOutcome, SolveStatus
from paramvex.services.numeric import ext_compare, ext_min_all, sample_ball
from paramvex.services.programs import as_vector
from paramvex.services.solvers import is_feasible
from paramvex.services.value_analysis import (
    aux_value_function,
    evaluate_many,
    fcost_membership,
    membership_from_outcome,
    parallel_map,
    value_function,
)

logger = logging.getLogger(__name__)

GraphSample = Tuple[np.ndarray, float]

# Cross-checks between v and v_phi use a band one order above value_eps.
_CROSS_CHECK_FACTOR = 10.0
_MIN_LOWER_BOUND_SAMPLES = 10
_MIN_MIDPOINT_PAIRS = 500
_LIPSCHITZ_STRIP = 0.05
_LIPSCHITZ_MIN_DISTANCE = 1e-4
_LIPSCHITZ_STABILITY = 0.10
_LIPSCHITZ_KNOWN_SLACK = 1.05


def _json_value(value: ExtendedReal) -> Union[float, str]:
    return value.value if value.is_finite else str(value)


def _cross_band(tol: Tolerances) -> float:
    return _CROSS_CHECK_FACTOR * tol.value_eps


def check_equivalence(p: ParametricProgram, grid: Sequence[Any], tol: Tolerances) -> CheckResult:
    """
    Compare v and v_phi on every grid point

    Infinite values must match exactly, finite values within 10 value_eps.

    Args:
        p: Program
        grid: Parameter vectors
        tol: Tolerances

    Returns:
        CheckResult named "equivalence"; the first discrepancy is the witness
    """
    outcomes = evaluate_many(p, grid, tol)
    aux_values = parallel_map(lambda y: aux_value_function(p, y, tol), grid)
    band = _cross_band(tol)

    counts = {kind.value: 0 for kind in ExtendedKind}
    max_gap = 0.0
    for y, outcome, aux in zip(grid, outcomes, aux_values):
        if ext_compare(outcome.value, aux, band=band) is not Ordering.EQUAL:
            logger.info(f"Equivalence fails for {p.name} at y={to_list(y)}")
            return CheckResult(
                name="equivalence",
                verdict=Verdict.FAIL,
                witness={
                    "y": to_list(y),
                    "v": _json_value(outcome.value),
                    "v_phi": _json_value(aux),
                    "status": outcome.status.value,
                },
                details={"points": len(grid)},
            )
        counts[outcome.value.kind.value] += 1
        if outcome.value.is_finite:
            max_gap = max(max_gap, abs(outcome.value.as_float() - aux.as_float()))

    return CheckResult(
        name="equivalence",
        verdict=Verdict.PASS,
        details={"points": len(grid), "kinds": counts, "max_gap": max_gap},
    )


def sample_graph_pairs(
    box: Box, y_count: int, mu_per_y: int, mu_range: Tuple[float, float], seed: int
) -> List[GraphSample]:
    """
    Random (y, mu) pairs for the graph/epigraph comparison

    Args:
        box: Parameter box the y values are drawn from
        y_count: Number of distinct parameters
        mu_per_y: Cost levels drawn per parameter
        mu_range: Closed range of the cost levels
        seed: Seed of the numpy generator

    Returns:
        y_count * mu_per_y pairs grouped by parameter
    """
    if y_count < 1 or mu_per_y < 1:
        raise ValueError("y_count and mu_per_y must be positive")
    low, high = mu_range
    if low > high:
        raise ValueError(f"mu_range must be ordered, got {mu_range}")

    rng = np.random.default_rng(seed)
    samples = []
    for _ in range(y_count):
        y = box.sample(rng)
        for mu in rng.uniform(low, high, size=mu_per_y):
            samples.append((y, float(mu)))
    return samples


def _at_or_above(mu: float, value: ExtendedReal) -> bool:
    if value.kind is ExtendedKind.PLUS_INFINITY:
        return False
    if value.kind is ExtendedKind.MINUS_INFINITY:
        return True
    return mu >= value.value


def check_graph_epigraph(
    p: ParametricProgram, samples: Sequence[GraphSample], tol: Tolerances
) -> CheckResult:
    """
    Compare graph F_phi with epi v_phi on sampled (y, mu) pairs

    Pairs within 10 value_eps of a finite v_phi(y) are skipped. Where the
    program declares non-attainment, F_phi(y) is not closed and the identity
    is expected to break at mu = inf v(y): that pair must lie in the
    epigraph but not in the graph.

    Args:
        p: Program
        samples: (y, mu) pairs
        tol: Tolerances

    Returns:
        CheckResult named "graph-epigraph"
    """
    band = _cross_band(tol)
    aux_cache: Dict[Tuple[float, ...], ExtendedReal] = {}
    outcome_cache: Dict[Tuple[float, ...], SolveOutcome] = {}
    checked_non_attainment: Set[Tuple[float, ...]] = set()
    compared = skipped = declared = 0
    expected_witness: Optional[Dict[str, Any]] = None

    for y, mu in samples:
        key = tuple(to_list(y))
        if p.declares_non_attainment(y):
            declared += 1
            if key in checked_non_attainment:
                continue
            outcome = value_function(p, y, tol)
            if outcome.status is not SolveStatus.INF_NOT_ATTAINED:
                return CheckResult(
                    name="graph-epigraph",
                    verdict=Verdict.FAIL,
                    witness={
                        "y": list(key),
                        "status": outcome.status.value,
                        "reason": "declared non-attainment but the minimum is attained",
                    },
                )
            infimum = float(outcome.infimum_hint)
            member = fcost_membership(p, y, infimum, tol)
            in_epigraph = _at_or_above(infimum, aux_value_function(p, y, tol))
            if member or not in_epigraph:
                return CheckResult(
                    name="graph-epigraph",
                    verdict=Verdict.FAIL,
                    witness={
                        "y": list(key),
                        "mu": infimum,
                        "in_graph": member,
                        "in_epigraph": in_epigraph,
                        "reason": "expected the identity to break at the unattained infimum",
                    },
                )
            checked_non_attainment.add(key)
            if expected_witness is None:
                expected_witness = {"y": list(key), "mu": infimum, "expected": True}
            continue

        if key not in aux_cache:
            aux_cache[key] = aux_value_function(p, y, tol)
            outcome_cache[key] = value_function(p, y, tol)
        aux = aux_cache[key]
        if aux.is_finite and abs(mu - aux.value) <= band:
            skipped += 1
            continue

        compared += 1
        member = membership_from_outcome(outcome_cache[key], mu, tol)
        in_epigraph = _at_or_above(mu, aux)
        if member != in_epigraph:
            return CheckResult(
                name="graph-epigraph",
                verdict=Verdict.FAIL,
                witness={
                    "y": list(key),
                    "mu": mu,
                    "in_graph": member,
                    "in_epigraph": in_epigraph,
                    "v_phi": _json_value(aux),
                },
            )

    logger.info(
        f"Graph/epigraph on {p.name}: {compared} compared, {skipped} in the boundary band, "
        f"{len(checked_non_attainment)} expected failures"
    )
    return CheckResult(
        name="graph-epigraph",
        verdict=Verdict.PASS,
        witness=expected_witness,
        details={
            "pairs": len(samples),
            "compared": compared,
            "boundary_skipped": skipped,
            "declared_non_attainment": declared,
            "expected_failures": len(checked_non_attainment),
        },
    )


def check_local_lower_bound(
    p: ParametricProgram, ball: Ball, sample_count: int, tol: Tolerances, seed: int = 0
) -> Optional[LowerBoundCertificate]:
    """
    Certify that v is bounded from below on a ball

    Args:
        p: Program
        ball: Ball around y0
        sample_count: Random points drawn besides the center (at least 10)
        tol: Tolerances
        seed: Sampling seed

    Returns:
        A certificate with bound = (min finite sample value) - value_eps, or
        None when some sample has v = -inf or no sample is finite
    """
    if sample_count < _MIN_LOWER_BOUND_SAMPLES:
        raise ValueError(f"sample_count must be at least {_MIN_LOWER_BOUND_SAMPLES}")

    points = [ball.center_array] + sample_ball(ball, sample_count, seed)
    outcomes = evaluate_many(p, points, tol)
    # -inf anywhere, or no finite sample at all, leaves nothing to certify
    lowest = ext_min_all(outcome.value for outcome in outcomes)
    if not lowest.is_finite:
        return None

    evidence = [
        (tuple(to_list(y)), outcome.value.value)
        for y, outcome in zip(points, outcomes)
        if outcome.value.is_finite
    ]
    bound = lowest.value - tol.value_eps
    return LowerBoundCertificate(
        center=ball.center,
        ball=ball,
        bound=bound,
        evidence=evidence,
        value_eps=tol.value_eps,
    )


def check_domain_interior(
    p: ParametricProgram, y0: Any, delta: float, tol: Tolerances, seed: int = 0
) -> bool:
    """
    Sampled test that y0 lies in the interior of dom F

    F must be nonempty at y0, at y0 +- delta e_i and at 2m random points of
    the delta-ball.
    """
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    y0 = as_vector(y0, p.m, "y0")
    points = [y0]
    for i in range(p.m):
        step = np.zeros(p.m)
        step[i] = delta
        points.extend([y0 + step, y0 - step])
    points.extend(sample_ball(Ball(center=y0, radius=delta), 2 * p.m, seed))
    return all(parallel_map(lambda y: is_feasible(p.feasible, y, tol), points))


def check_theorem1(
    p: ParametricProgram,
    y0: Any,
    radius: float,
    tol: Tolerances,
    seed: int = 0,
    sample_count: int = 50,
) -> CheckResult:
    """
    Local lower boundedness, v_phi > -inf and v > -inf must agree around y0

    Args:
        p: Program
        y0: Center, expected in the interior of dom F
        radius: Ball radius, also the interior test distance
        tol: Tolerances
        seed: Sampling seed
        sample_count: Random points drawn from the ball

    Returns:
        CheckResult named "theorem1"; precondition-violated when the ball
        meets declared non-attainment or y0 is not interior
    """
    y0 = as_vector(y0, p.m, "y0")
    ball = Ball(center=y0, radius=radius)

    if p.attainment_meta is not None and p.attainment_meta.intersects(ball):
        return CheckResult(
            name="theorem1",
            verdict=Verdict.PRECONDITION_VIOLATED,
            details={"reason": "F_phi is not closed-valued on the ball (declared non-attainment)"},
        )
    if not check_domain_interior(p, y0, radius, tol, seed):
        return CheckResult(
            name="theorem1",
            verdict=Verdict.PRECONDITION_VIOLATED,
            details={"reason": f"y0={to_list(y0)} is not in the interior of dom F"},
        )

    certificate = check_local_lower_bound(p, ball, sample_count, tol, seed)
    points = [y0] + sample_ball(ball, sample_count, seed)
    outcomes = evaluate_many(p, points, tol)
    aux_values = parallel_map(lambda y: aux_value_function(p, y, tol), points)

    bounded_below = certificate is not None
    aux_above = all(v.kind is not ExtendedKind.MINUS_INFINITY for v in aux_values)
    value_above = all(o.value.kind is not ExtendedKind.MINUS_INFINITY for o in outcomes)
    details = {
        "locally_bounded_below": bounded_below,
        "v_phi_above_minus_infinity": aux_above,
        "v_above_minus_infinity": value_above,
        "samples": len(points),
        "bound": certificate.bound if certificate is not None else None,
    }

    if bounded_below == aux_above == value_above:
        return CheckResult(name="theorem1", verdict=Verdict.PASS, details=details)

    witness: Dict[str, Any] = {"y0": to_list(y0), "radius": radius}
    for y, outcome, aux in zip(points, outcomes, aux_values):
        if (outcome.value.kind is ExtendedKind.MINUS_INFINITY) != (
            aux.kind is ExtendedKind.MINUS_INFINITY
        ):
            witness.update(y=to_list(y), v=_json_value(outcome.value), v_phi=_json_value(aux))
            break
    return CheckResult(name="theorem1", verdict=Verdict.FAIL, witness=witness, details=details)


def check_theorem2(
    p: ParametricProgram,
    region: Box,
    grid_per_dim: int,
    tol: Tolerances,
    pair_count: int = _MIN_MIDPOINT_PAIRS,
    seed: int = 0,
) -> CheckResult:
    """
    Properness and midpoint convexity of v on an open convex region

    Args:
        p: Program
        region: Box whose grid must lie in dom F
        grid_per_dim: Grid points per axis for the feasibility and
            properness scan
        tol: Tolerances
        pair_count: Random midpoint pairs (at least 500)
        seed: Sampling seed

    Returns:
        CheckResult named "theorem2"
    """
    if pair_count < _MIN_MIDPOINT_PAIRS:
        raise ValueError(f"pair_count must be at least {_MIN_MIDPOINT_PAIRS}")

    points = region.grid(grid_per_dim)
    feasible = parallel_map(lambda y: is_feasible(p.feasible, y, tol), points)
    for y, ok in zip(points, feasible):
        if not ok:
            return CheckResult(
                name="theorem2",
                verdict=Verdict.PRECONDITION_VIOLATED,
                witness={"y": to_list(y)},
                details={"reason": "region leaves dom F"},
            )

    rng = np.random.default_rng(seed)
    pairs = [(region.sample(rng), region.sample(rng)) for _ in range(pair_count)]
    triples = [y for y1, y2 in pairs for y in (y1, y2, 0.5 * (y1 + y2))]
    outcomes = evaluate_many(p, list(points) + triples, tol)

    for y, outcome in zip(list(points) + triples, outcomes):
        if not outcome.value.is_finite:
            return CheckResult(
                name="theorem2",
                verdict=Verdict.FAIL,
                witness={"y": to_list(y), "v": _json_value(outcome.value)},
                details={"property": "properness"},
            )

    pair_values = outcomes[len(points) :]
    max_gap = -math.inf
    for i, (y1, y2) in enumerate(pairs):
        v1, v2, v_mid = (o.value.value for o in pair_values[3 * i : 3 * i + 3])
        gap = v_mid - 0.5 * (v1 + v2)
        max_gap = max(max_gap, gap)
        if gap > tol.convexity_eps:
            return CheckResult(
                name="theorem2",
                verdict=Verdict.FAIL,
                witness={
                    "y1": to_list(y1),
                    "y2": to_list(y2),
                    "v_mid": v_mid,
                    "v_average": 0.5 * (v1 + v2),
                },
                details={"property": "midpoint convexity"},
            )

    return CheckResult(
        name="theorem2",
        verdict=Verdict.PASS,
        details={"grid_points": len(points), "pairs": pair_count, "max_midpoint_gap": max_gap},
    )


def lemma_lower_bound(m0: float, v_alpha: float, alpha: float) -> float:
    """
    Lower bound on v(y) propagated from a lower bound m0 at y0

    Args:
        m0: Lower bound of v on a ball around y0
        v_alpha: v(y_alpha) with y_alpha = y0 + alpha (y0 - y)
        alpha: Positive step

    Returns:
        ((1 + alpha) / alpha) m0 - v_alpha / alpha
    """
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return ((1.0 + alpha) / alpha) * m0 - v_alpha / alpha


def check_lemma(
    p: ParametricProgram,
    y0: Any,
    ball: Ball,
    targets: Sequence[Any],
    tol: Tolerances,
    seed: int = 0,
    sample_count: int = 50,
) -> CheckResult:
    """
    Verify the lower-bound propagation from a ball around y0 to far targets

    Args:
        p: Program
        y0: Center of the ball
        ball: Ball on which a lower-bound certificate must exist
        targets: Parameters y with finite v(y)
        tol: Tolerances
        seed: Sampling seed of the certificate
        sample_count: Certificate sample size

    Returns:
        CheckResult named "lemma"
    """
    y0 = as_vector(y0, p.m, "y0")
    if np.abs(y0 - ball.center_array).max() > 1e-12:
        raise ValueError("the lemma ball must be centered at y0")

    certificate = check_local_lower_bound(p, ball, sample_count, tol, seed)
    if certificate is None:
        return CheckResult(
            name="lemma",
            verdict=Verdict.PRECONDITION_VIOLATED,
            details={"reason": "v is not certified bounded from below around y0"},
        )
    m0 = certificate.bound
    band = _cross_band(tol)

    comparisons = skipped = 0
    min_slack = math.inf
    for target in targets:
        target = as_vector(target, p.m, "target")
        v_y = value_function(p, target, tol).value
        if not v_y.is_finite:
            return CheckResult(
                name="lemma",
                verdict=Verdict.PRECONDITION_VIOLATED,
                witness={"y": to_list(target), "v": _json_value(v_y)},
                details={"reason": "target value is not finite"},
            )
        for alpha in ALPHA_SCHEDULE:
            combination = LemmaCombination.build(y0, target, alpha)
            if not ball.contains(np.asarray(combination.y_alpha)):
                skipped += 1
                continue
            v_alpha = value_function(p, combination.y_alpha, tol).value
            if not v_alpha.is_finite:
                # y_alpha outside dom F makes the bound -inf
                skipped += 1
                continue
            bound = lemma_lower_bound(m0, v_alpha.value, alpha)
            comparisons += 1
            min_slack = min(min_slack, v_y.value - bound)
            if v_y.value < bound - band:
                return CheckResult(
                    name="lemma",
                    verdict=Verdict.FAIL,
                    witness={
                        "y": to_list(target),
                        "alpha": alpha,
                        "y_alpha": list(combination.y_alpha),
                        "v": v_y.value,
                        "bound": bound,
                    },
                    details={"m0": m0},
                )

    if skipped:
        logger.warning(f"Lemma on {p.name}: {skipped} alpha values left the ball and were skipped")
    if comparisons == 0:
        return CheckResult(
            name="lemma",
            verdict=Verdict.PRECONDITION_VIOLATED,
            details={"reason": "no alpha keeps y_alpha inside the ball"},
        )
    return CheckResult(
        name="lemma",
        verdict=Verdict.PASS,
        details={
            "m0": m0,
            "targets": len(targets),
            "comparisons": comparisons,
            "skipped_alpha": skipped,
            "min_slack": min_slack,
        },
    )


def _near_diagonal_pairs(
    region: Box, pair_count: int, seed: int
) -> List[Tuple[np.ndarray, np.ndarray]]:
    # Each pair consumes the generator in a fixed order, so a larger
    # pair_count extends the smaller sample
    rng = np.random.default_rng(seed)
    strip = _LIPSCHITZ_STRIP * region.diameter
    pairs = []
    for _ in range(pair_count):
        y1 = region.sample(rng)
        offset = rng.uniform(-strip, strip, size=region.dim)
        y2 = np.clip(y1 + offset, region.lower_array, region.upper_array)
        pairs.append((y1, y2))
    return pairs


def estimate_lipschitz(
    p: ParametricProgram, region: Box, pair_count: int, seed: int, tol: Tolerances
) -> float:
    """
    Estimate the Lipschitz constant of v on a region

    Args:
        p: Program
        region: Box inside dom F
        pair_count: Number of near-diagonal pairs
        seed: Sampling seed
        tol: Tolerances

    Returns:
        max |v(y1) - v(y2)| / |y1 - y2| over pairs at least 1e-4 apart

    Raises:
        PreconditionViolatedError: if v is not finite at a sampled point
    """
    if pair_count < 1:
        raise ValueError("pair_count must be positive")
    if region.diameter <= 0.0:
        raise PreconditionViolatedError("the Lipschitz region must have a positive diameter")

    pairs = [
        (y1, y2)
        for y1, y2 in _near_diagonal_pairs(region, pair_count, seed)
        if np.linalg.norm(y1 - y2) >= _LIPSCHITZ_MIN_DISTANCE
    ]
    points = [y for pair in pairs for y in pair]
    outcomes = evaluate_many(p, points, tol)
    for y, outcome in zip(points, outcomes):
        if not outcome.value.is_finite:
            raise PreconditionViolatedError(
                f"v({to_list(y)}) = {outcome.value} is not finite on the Lipschitz region"
            )

    estimate = 0.0
    for i, (y1, y2) in enumerate(pairs):
        delta_v = abs(outcomes[2 * i].value.value - outcomes[2 * i + 1].value.value)
        estimate = max(estimate, delta_v / float(np.linalg.norm(y1 - y2)))
    return estimate


def check_lipschitz(
    p: ParametricProgram,
    region: Box,
    pair_count: int,
    seed: int,
    tol: Tolerances,
    known_lipschitz: Optional[float] = None,
) -> CheckResult:
    """
    Lipschitz estimate on a region, its stability under doubling the sample
    and its agreement with a known constant

    Returns:
        CheckResult named "lipschitz"
    """
    try:
        estimate = estimate_lipschitz(p, region, pair_count, seed, tol)
        doubled = estimate_lipschitz(p, region, 2 * pair_count, seed, tol)
    except PreconditionViolatedError as e:
        return CheckResult(
            name="lipschitz",
            verdict=Verdict.PRECONDITION_VIOLATED,
            details={"reason": str(e)},
        )

    floor = _CROSS_CHECK_FACTOR * tol.value_eps / _LIPSCHITZ_MIN_DISTANCE
    stable = abs(doubled - estimate) <= _LIPSCHITZ_STABILITY * max(estimate, doubled) + floor
    within_known = (
        known_lipschitz is None or doubled <= _LIPSCHITZ_KNOWN_SLACK * known_lipschitz + floor
    )
    details = {
        "estimate": estimate,
        "doubled_estimate": doubled,
        "known": known_lipschitz,
        "noise_floor": floor,
        "pairs": pair_count,
    }
    if stable and within_known:
        return CheckResult(name="lipschitz", verdict=Verdict.PASS, details=details)
    return CheckResult(
        name="lipschitz",
        verdict=Verdict.FAIL,
        witness={"estimate": estimate, "doubled_estimate": doubled, "known": known_lipschitz},
        details=details,
    )
