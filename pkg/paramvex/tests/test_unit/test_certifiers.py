"""
Unit tests for the certifiers
"""
from unittest.mock import patch

import numpy as np
import pytest

from paramvex.core.exceptions import PreconditionViolatedError
from paramvex.models.program import AttainmentMeta
from paramvex.schemas.numeric import Ball, Box, ExtendedReal
from paramvex.schemas.report import Verdict
from paramvex.schemas.solve import SolveOutcome
from paramvex.services.certifiers import (
    check_domain_interior,
    check_equivalence,
    check_graph_epigraph,
    check_lemma,
    check_lipschitz,
    check_local_lower_bound,
    check_theorem1,
    check_theorem2,
    estimate_lipschitz,
    lemma_lower_bound,
    sample_graph_pairs,
)


def _interval(lower, upper):
    return Box(lower=(lower,), upper=(upper,))


class TestEquivalence:
    @pytest.mark.parametrize("instance_id", ["P-LIN", "P-INT", "P-UNB", "P-EXP", "P-PROJ"])
    def test_pass(self, program, instance, tol, instance_id):
        """Test that v and v_phi agree on a coarse grid"""
        grid = instance(instance_id).box.grid(11)
        result = check_equivalence(program(instance_id), grid, tol)
        assert result.verdict is Verdict.PASS
        assert result.details["points"] == 11
        assert result.details["max_gap"] <= 1e-6

    def test_counts_kinds(self, program, instance, tol):
        """Test the per-kind tally on P-INT"""
        result = check_equivalence(program("P-INT"), instance("P-INT").box.grid(5), tol)
        assert result.details["kinds"] == {"finite": 3, "plus_infinity": 2, "minus_infinity": 0}

    def test_fail_reports_first_discrepancy(self, program, tol):
        """Test the counterexample of a broken v_phi"""
        with patch(
            "paramvex.services.certifiers.aux_value_function",
            side_effect=lambda p, y, tol: ExtendedReal.finite(10.0),
        ):
            result = check_equivalence(program("P-LIN"), [np.array([0.0])], tol)
        assert result.verdict is Verdict.FAIL
        assert result.witness["y"] == [0.0]
        assert result.witness["v"] == pytest.approx(0.0, abs=1e-9)
        assert result.witness["v_phi"] == 10.0
        assert result.witness["status"] == "optimal"


class TestGraphEpigraph:
    def test_sample_graph_pairs(self):
        """Test pair count, grouping and determinism"""
        box = _interval(-1.0, 1.0)
        samples = sample_graph_pairs(box, 4, 3, (-2.0, 2.0), seed=5)
        assert len(samples) == 12
        assert all(np.array_equal(samples[0][0], samples[i][0]) for i in range(3))
        assert all(-2.0 <= mu <= 2.0 for _, mu in samples)
        again = sample_graph_pairs(box, 4, 3, (-2.0, 2.0), seed=5)
        assert [mu for _, mu in samples] == [mu for _, mu in again]

    def test_sample_graph_pairs_rejects_bad_input(self):
        """Test argument validation"""
        with pytest.raises(ValueError):
            sample_graph_pairs(_interval(0.0, 1.0), 0, 3, (0.0, 1.0), seed=0)
        with pytest.raises(ValueError):
            sample_graph_pairs(_interval(0.0, 1.0), 1, 3, (1.0, 0.0), seed=0)

    @pytest.mark.parametrize("instance_id", ["P-LIN", "P-INT", "P-RELU"])
    def test_pass(self, program, instance, tol, instance_id):
        """Test the identity on attained instances"""
        samples = sample_graph_pairs(instance(instance_id).box, 10, 20, (-5.0, 5.0), seed=0)
        result = check_graph_epigraph(program(instance_id), samples, tol)
        assert result.verdict is Verdict.PASS
        details = result.details
        assert details["pairs"] == 200
        assert details["compared"] + details["boundary_skipped"] == 200
        assert details["expected_failures"] == 0
        assert result.witness is None

    def test_declared_non_attainment_is_expected_failure(self, program, instance, tol):
        """Test that P-EXP breaks the identity exactly at its infimum"""
        samples = sample_graph_pairs(instance("P-EXP").box, 5, 10, (-5.0, 5.0), seed=0)
        result = check_graph_epigraph(program("P-EXP"), samples, tol)
        assert result.verdict is Verdict.PASS
        assert result.witness["mu"] == 0.0
        assert result.witness["expected"] is True
        assert result.details["expected_failures"] == 5
        assert result.details["declared_non_attainment"] == 50

    def test_false_non_attainment_declaration_fails(self, program, tol):
        """Test that a declaration contradicted by the solver is reported"""
        p = program("P-LIN").model_copy(update={"attainment_meta": AttainmentMeta(everywhere=True)})
        result = check_graph_epigraph(p, [(np.array([0.5]), 1.0)], tol)
        assert result.verdict is Verdict.FAIL
        assert result.witness["status"] == "optimal"


class TestLocalLowerBound:
    def test_certificate(self, program, tol):
        """Test the certified bound on P-LIN"""
        ball = Ball(center=(0.0,), radius=0.5)
        certificate = check_local_lower_bound(program("P-LIN"), ball, 10, tol, seed=3)
        assert certificate is not None
        assert len(certificate.evidence) == 11
        assert certificate.evidence[0] == ((0.0,), pytest.approx(0.0, abs=1e-9))
        assert -0.5 - 1e-6 <= certificate.bound <= min(v for _, v in certificate.evidence)

    def test_minus_infinity_gives_none(self, program, tol):
        """Test P-UNB"""
        ball = Ball(center=(0.0,), radius=0.5)
        assert check_local_lower_bound(program("P-UNB"), ball, 10, tol) is None

    def test_infeasible_ball_gives_none(self, program, tol):
        """Test a ball outside dom F"""
        ball = Ball(center=(-1.0,), radius=0.5)
        assert check_local_lower_bound(program("P-INT"), ball, 10, tol) is None

    def test_partly_infeasible_ball(self, program, tol):
        """Test that infeasible samples are ignored next to finite ones on P-INT"""
        ball = Ball(center=(0.0,), radius=0.5)
        certificate = check_local_lower_bound(program("P-INT"), ball, 20, tol, seed=1)
        assert certificate is not None
        assert 0 < len(certificate.evidence) < 21
        assert all(y[0] >= -tol.feasibility_eps for y, _ in certificate.evidence)
        lowest = min(v for _, v in certificate.evidence)
        assert certificate.bound == pytest.approx(lowest - tol.value_eps)

    def test_minimum_sample_count(self, program, tol):
        with pytest.raises(ValueError):
            check_local_lower_bound(program("P-LIN"), Ball(center=(0.0,), radius=1.0), 5, tol)


def test_domain_interior(program, tol):
    """Test the sampled interior check on P-INT"""
    assert check_domain_interior(program("P-INT"), [0.5], 0.25, tol)
    assert not check_domain_interior(program("P-INT"), [0.1], 0.25, tol)
    assert check_domain_interior(program("P-LIN"), [0.0], 10.0, tol)
    with pytest.raises(ValueError):
        check_domain_interior(program("P-LIN"), [0.0], 0.0, tol)


class TestTheorem1:
    def test_bounded_instance(self, program, tol):
        """Test that all three properties hold on P-LIN"""
        result = check_theorem1(program("P-LIN"), [0.0], 0.5, tol, sample_count=10)
        assert result.verdict is Verdict.PASS
        assert result.details["locally_bounded_below"] is True
        assert result.details["v_phi_above_minus_infinity"] is True
        assert result.details["v_above_minus_infinity"] is True
        assert result.details["samples"] == 11

    def test_unbounded_instance(self, program, tol):
        """Test that all three properties fail together on P-UNB"""
        result = check_theorem1(program("P-UNB"), [1.0], 0.5, tol, sample_count=10)
        assert result.verdict is Verdict.PASS
        assert result.details["locally_bounded_below"] is False
        assert result.details["v_phi_above_minus_infinity"] is False
        assert result.details["v_above_minus_infinity"] is False
        assert result.details["bound"] is None

    def test_declared_non_attainment(self, program, tol):
        """Test that P-EXP violates the closedness precondition"""
        result = check_theorem1(program("P-EXP"), [0.0], 0.5, tol, sample_count=10)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED

    def test_boundary_center(self, program, tol):
        """Test a center on the boundary of dom F"""
        result = check_theorem1(program("P-INT"), [0.0], 0.25, tol, sample_count=10)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED
        assert "interior" in result.details["reason"]

    def test_disagreement_fails(self, program, tol):
        """Test the counterexample when v_phi disagrees with v"""
        with patch(
            "paramvex.services.certifiers.aux_value_function",
            side_effect=lambda p, y, tol: ExtendedReal.minus_infinity(),
        ):
            result = check_theorem1(program("P-LIN"), [0.0], 0.5, tol, sample_count=10)
        assert result.verdict is Verdict.FAIL
        assert result.witness["y"] == [0.0]
        assert result.witness["v_phi"] == "-inf"


class TestTheorem2:
    def test_convex_pass(self, program, tol):
        """Test P-RELU on [0, 2]"""
        result = check_theorem2(program("P-RELU"), _interval(0.0, 2.0), 11, tol)
        assert result.verdict is Verdict.PASS
        assert result.details["pairs"] == 500
        assert result.details["grid_points"] == 11
        assert result.details["max_midpoint_gap"] <= tol.convexity_eps

    def test_two_dimensional_pass(self, max_of_two, tol):
        """Test max(y_1, y_2) on a square"""
        region = Box(lower=(-1.0, -1.0), upper=(1.0, 1.0))
        assert check_theorem2(max_of_two, region, 3, tol).verdict is Verdict.PASS

    def test_improper_fails(self, program, tol):
        """Test that P-UNB is not proper"""
        result = check_theorem2(program("P-UNB"), _interval(0.0, 1.0), 5, tol)
        assert result.verdict is Verdict.FAIL
        assert result.details["property"] == "properness"
        assert result.witness["v"] == "-inf"

    def test_region_outside_domain(self, program, tol):
        """Test that P-INT on [-1, 1] leaves dom F"""
        result = check_theorem2(program("P-INT"), _interval(-1.0, 1.0), 5, tol)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED
        assert result.witness == {"y": [-1.0]}

    def test_concave_values_fail(self, program, tol):
        """Test that a concave value profile breaks midpoint convexity"""
        with patch(
            "paramvex.services.certifiers.evaluate_many",
            side_effect=lambda p, points, tol: [
                SolveOutcome.optimal(-float(y[0]) ** 2, np.zeros(1)) for y in points
            ],
        ):
            result = check_theorem2(program("P-LIN"), _interval(-1.0, 1.0), 5, tol)
        assert result.verdict is Verdict.FAIL
        assert result.details["property"] == "midpoint convexity"
        assert result.witness["v_mid"] > result.witness["v_average"]

    def test_minimum_pair_count(self, program, tol):
        with pytest.raises(ValueError):
            check_theorem2(program("P-RELU"), _interval(0.0, 2.0), 11, tol, pair_count=100)


class TestLemma:
    def test_lemma_lower_bound(self):
        """Test the propagated bound formula"""
        assert lemma_lower_bound(-1.0, -0.9, 1.0) == pytest.approx(-1.1, abs=1e-12)
        assert lemma_lower_bound(-1.0, 0.0, 0.25) == pytest.approx(-5.0)
        assert lemma_lower_bound(0.0, 0.0, 0.05) == 0.0
        assert lemma_lower_bound(1.0, 1.0, 0.5) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            lemma_lower_bound(0.0, 0.0, 0.0)

    def test_pass(self, program, tol):
        """Test the bound on P-LIN for targets on both sides of y0"""
        ball = Ball(center=(0.0,), radius=0.5)
        result = check_lemma(program("P-LIN"), [0.0], ball, [[0.9], [-0.8], [0.3]], tol)
        assert result.verdict is Verdict.PASS
        assert result.details["comparisons"] == 9
        assert result.details["min_slack"] >= -1e-6

    def test_ball_must_be_centered(self, program, tol):
        with pytest.raises(ValueError):
            check_lemma(program("P-LIN"), [0.1], Ball(center=(0.0,), radius=0.5), [[0.5]], tol)

    def test_no_certificate(self, program, tol):
        """Test that P-UNB has no lower bound to propagate"""
        ball = Ball(center=(1.0,), radius=0.5)
        result = check_lemma(program("P-UNB"), [1.0], ball, [[0.5]], tol)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED

    def test_infinite_target(self, program, tol):
        """Test a target outside dom F"""
        ball = Ball(center=(0.5,), radius=0.25)
        result = check_lemma(program("P-INT"), [0.5], ball, [[-0.5]], tol)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED
        assert result.witness == {"y": [-0.5], "v": "+inf"}

    def test_every_alpha_leaves_ball(self, program, tol):
        """Test that skipping every alpha leaves nothing to compare"""
        ball = Ball(center=(0.0,), radius=0.01)
        result = check_lemma(program("P-LIN"), [0.0], ball, [[100.0]], tol)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED

    def test_violation_fails(self, program, tol):
        """Test the counterexample when the bound exceeds v"""
        ball = Ball(center=(0.0,), radius=0.5)
        with patch("paramvex.services.certifiers.lemma_lower_bound", return_value=100.0):
            result = check_lemma(program("P-LIN"), [0.0], ball, [[0.9]], tol)
        assert result.verdict is Verdict.FAIL
        assert result.witness["alpha"] == 0.01
        assert result.witness["bound"] == 100.0


class TestLipschitz:
    def test_estimate_linear(self, program, tol):
        """Test that P-LIN has slope one"""
        estimate = estimate_lipschitz(program("P-LIN"), _interval(-1.0, 1.0), 200, 0, tol)
        assert estimate == pytest.approx(1.0, abs=1e-3)

    def test_estimate_quadratic(self, program, tol):
        """Test that P-RELU on [0, 2] approaches 4 from below"""
        estimate = estimate_lipschitz(program("P-RELU"), _interval(0.0, 2.0), 200, 0, tol)
        assert 3.5 < estimate <= 4.0 + 1e-2

    def test_estimate_requires_finite_values(self, program, tol):
        with pytest.raises(PreconditionViolatedError):
            estimate_lipschitz(program("P-UNB"), _interval(0.0, 1.0), 20, 0, tol)
        with pytest.raises(PreconditionViolatedError):
            estimate_lipschitz(program("P-LIN"), _interval(0.5, 0.5), 20, 0, tol)

    def test_check_against_known_constant(self, program, tol):
        """Test the comparison with the known constant"""
        region = _interval(-1.0, 1.0)
        passed = check_lipschitz(program("P-LIN"), region, 100, 0, tol, known_lipschitz=1.0)
        assert passed.verdict is Verdict.PASS
        assert passed.details["doubled_estimate"] == pytest.approx(1.0, abs=1e-3)
        failed = check_lipschitz(program("P-LIN"), region, 100, 0, tol, known_lipschitz=0.5)
        assert failed.verdict is Verdict.FAIL
        assert failed.witness["known"] == 0.5

    def test_check_constant_value(self, program, tol):
        """Test that a constant v has a vanishing estimate"""
        result = check_lipschitz(program("P-PROJ"), _interval(-0.5, 0.5), 100, 0, tol, 0.0)
        assert result.verdict is Verdict.PASS
        assert result.details["estimate"] < 1e-3

    def test_check_improper(self, program, tol):
        result = check_lipschitz(program("P-UNB"), _interval(0.0, 1.0), 20, 0, tol)
        assert result.verdict is Verdict.PRECONDITION_VIOLATED
