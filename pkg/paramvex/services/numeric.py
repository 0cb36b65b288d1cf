"""
Extended-real operations and parameter-space sampling
"""
from functools import reduce
from typing import Iterable, List, Optional

import numpy as np

from paramvex.schemas.numeric import Ball, ExtendedReal, Ordering, Tolerances

# Keeps sampled points strictly inside the ball after rounding.
_INTERIOR_SHRINK = 1.0 - 1e-9


def ext_min(a: ExtendedReal, b: ExtendedReal) -> ExtendedReal:
    """Smaller of two extended reals under the total order"""
    if a.rank != b.rank:
        return a if a.rank < b.rank else b
    if a.is_finite and b.value < a.value:
        return b
    return a


def ext_min_all(values: Iterable[ExtendedReal]) -> ExtendedReal:
    """Minimum of a non-empty collection of extended reals"""
    return reduce(ext_min, values)


def ext_compare(
    a: ExtendedReal,
    b: ExtendedReal,
    tol: Optional[Tolerances] = None,
    *,
    band: Optional[float] = None,
) -> Ordering:
    """
    Compare two extended reals

    Finite pairs are equal when they differ by at most the band, which
    defaults to ``tol.value_eps`` (0 when no tolerances are given).
    Infinities compare exactly.

    Args:
        a: Left operand
        b: Right operand
        tol: Tolerance policy supplying the default band
        band: Explicit equality band overriding the policy

    Returns:
        The ordering of a relative to b
    """
    if a.rank != b.rank:
        return Ordering.LESS if a.rank < b.rank else Ordering.GREATER
    if not a.is_finite:
        return Ordering.EQUAL

    if band is None:
        band = tol.value_eps if tol is not None else 0.0
    diff = a.value - b.value
    if abs(diff) <= band:
        return Ordering.EQUAL
    return Ordering.LESS if diff < 0 else Ordering.GREATER


def sample_ball(ball: Ball, count: int, seed: int) -> List[np.ndarray]:
    """
    Draw points uniformly from the open ball

    Directions are normalized Gaussians and radii scale like U^(1/m), so the
    sample is uniform in volume. The same seed always yields the same points.

    Args:
        ball: Ball to sample
        count: Number of points (at least 1)
        seed: Seed of the numpy generator

    Returns:
        List of parameter vectors strictly inside the ball
    """
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")

    rng = np.random.default_rng(seed)
    dim = ball.dim
    center = ball.center_array

    points = []
    for _ in range(count):
        direction = rng.standard_normal(dim)
        norm = np.linalg.norm(direction)
        while norm == 0.0:
            direction = rng.standard_normal(dim)
            norm = np.linalg.norm(direction)
        scale = ball.radius * rng.random() ** (1.0 / dim) * _INTERIOR_SHRINK
        points.append(center + direction / norm * scale)
    return points
