"""
End-to-end certification runs at full sample sizes
"""
import numpy as np
import pytest

from paramvex.schemas.numeric import Ball, Box, get_tolerances
from paramvex.schemas.report import Verdict
from paramvex.services.catalog import catalog, get_instance
from paramvex.services.certifiers import (
    check_equivalence,
    check_graph_epigraph,
    check_lemma,
    check_theorem1,
    check_theorem2,
    estimate_lipschitz,
    sample_graph_pairs,
)

pytestmark = pytest.mark.slow

TOL = get_tolerances()


@pytest.mark.parametrize("instance", catalog(), ids=lambda instance: instance.id)
def test_equivalence_on_full_grid(instance):
    """v and v_phi agree on 101 points"""
    result = check_equivalence(instance.program, instance.box.grid(101), TOL)
    assert result.verdict is Verdict.PASS
    assert result.details["max_gap"] <= 1e-6


@pytest.mark.parametrize("instance_id", ["P-LIN", "P-RELU", "P-INT", "P-EXP"])
def test_graph_epigraph_on_ten_thousand_pairs(instance_id):
    instance = get_instance(instance_id)
    samples = sample_graph_pairs(instance.box, 100, 100, (-5.0, 5.0), seed=0)
    result = check_graph_epigraph(instance.program, samples, TOL)
    assert result.verdict is Verdict.PASS
    assert result.details["pairs"] >= 10_000


def _random_centers(instance_id, rng):
    if instance_id == "P-INT":
        return rng.uniform(0.3, 1.0), rng.uniform(0.05, 0.25)
    return rng.uniform(-1.0, 1.0), rng.uniform(0.05, 1.0)


@pytest.mark.parametrize("instance_id", ["P-LIN", "P-RELU", "P-INT", "P-PROJ", "P-UNB"])
def test_theorem1_random_configurations(instance_id):
    """Twenty random balls per instance"""
    p = get_instance(instance_id).program
    rng = np.random.default_rng(1)
    for seed in range(20):
        y0, radius = _random_centers(instance_id, rng)
        result = check_theorem1(p, [y0], radius, TOL, seed=seed, sample_count=10)
        assert result.verdict is Verdict.PASS, (y0, radius, result.details)


def test_theorem1_rejects_non_closed_instance():
    """Twenty random balls on P-EXP, all outside the closed-valued setting"""
    p = get_instance("P-EXP").program
    rng = np.random.default_rng(3)
    for seed in range(20):
        y0, radius = rng.uniform(-3.0, 3.0), rng.uniform(0.05, 1.0)
        result = check_theorem1(p, [y0], radius, TOL, seed=seed, sample_count=10)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED, (y0, radius)


@pytest.mark.parametrize(
    "instance_id, region",
    [
        ("P-LIN", (-1.0, 1.0)),
        ("P-RELU", (-2.0, 2.0)),
        ("P-INT", (0.1, 1.0)),
        ("P-PROJ", (-3.0, 3.0)),
        ("P-EXP-BOX", (-1.0, 5.0)),
        ("P-ZERO", (-1.0, 1.0)),
    ],
)
def test_theorem2_midpoint_convexity(instance_id, region):
    p = get_instance(instance_id).program
    box = Box(lower=(region[0],), upper=(region[1],))
    result = check_theorem2(p, box, 11, TOL, pair_count=500)
    assert result.verdict is Verdict.PASS
    assert result.details["max_midpoint_gap"] <= TOL.convexity_eps


def test_theorem2_detects_improper_instance():
    p = get_instance("P-UNB").program
    result = check_theorem2(p, Box(lower=(0.0,), upper=(1.0,)), 11, TOL, pair_count=500)
    assert result.verdict is Verdict.FAIL
    assert result.details["property"] == "properness"


@pytest.mark.parametrize("instance_id", ["P-LIN", "P-RELU", "P-INT", "P-PROJ", "P-ZERO"])
def test_lemma_random_configurations(instance_id):
    """One hundred random (y0, ball, target) configurations per instance"""
    p = get_instance(instance_id).program
    rng = np.random.default_rng(2)
    for k in range(100):
        y0, radius = _random_centers(instance_id, rng)
        if instance_id == "P-INT":
            target = rng.uniform(0.0, 2.0)
        else:
            target = y0 + rng.uniform(-2.0, 2.0)
        ball = Ball(center=(y0,), radius=radius)
        result = check_lemma(p, [y0], ball, [[target]], TOL, seed=k, sample_count=10)
        assert result.verdict is Verdict.PASS, (y0, radius, target)


@pytest.mark.parametrize(
    "instance_id, expected, rel",
    [("P-LIN", 1.0, 0.05), ("P-RELU", 4.0, 0.10)],
)
def test_lipschitz_estimates(instance_id, expected, rel):
    instance = get_instance(instance_id)
    estimate = estimate_lipschitz(instance.program, instance.region, 1000, 0, TOL)
    assert estimate == pytest.approx(expected, rel=rel)


def test_lipschitz_of_constant_value():
    instance = get_instance("P-PROJ")
    assert estimate_lipschitz(instance.program, instance.region, 1000, 0, TOL) < 1e-3
