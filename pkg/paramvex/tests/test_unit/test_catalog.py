"""
Unit tests for the built-in catalog
"""
import numpy as np
import pytest

from paramvex.schemas.numeric import ExtendedKind
from paramvex.schemas.report import CHECK_NAMES, Verdict
from paramvex.services.catalog import catalog, get_instance
from paramvex.services.value_analysis import value_function

CATALOG_IDS = [
    "P-LIN",
    "P-RELU",
    "P-INT",
    "P-UNB",
    "P-EXP",
    "P-PROJ",
    "P-EXP-BOX",
    "P-ABS",
    "P-ZERO",
]


def test_catalog_ids_and_order():
    """Test the fixed catalog order"""
    assert [instance.id for instance in catalog()] == CATALOG_IDS


@pytest.mark.parametrize("instance_id", CATALOG_IDS)
def test_value_matches_closed_form(instance_id, tol):
    """Test v against the closed-form value on a 21-point grid"""
    instance = get_instance(instance_id)
    for y in instance.box.grid(21):
        computed = value_function(instance.program, y, tol).value
        expected = instance.program.reference_value(y)
        assert computed.kind is expected.kind, f"{instance_id} at y={y.tolist()}"
        if expected.kind is ExtendedKind.FINITE:
            assert computed.value == pytest.approx(expected.value, abs=1e-6)


@pytest.mark.parametrize("instance_id", CATALOG_IDS)
def test_defaults_are_consistent(instance_id):
    """Test that every default lies in the parameter space of the program"""
    instance = get_instance(instance_id)
    m = instance.program.m
    assert instance.box.dim == instance.region.dim == len(instance.center) == m
    assert set(instance.default_checks) <= set(CHECK_NAMES)
    assert set(instance.expected_verdicts) <= set(instance.default_checks)
    assert instance.region.contains(np.asarray(instance.center))


def test_improper_instances_skip_theorem2():
    """Test the declared verdicts of the pathological instances"""
    assert "theorem2" not in get_instance("P-UNB").default_checks
    assert get_instance("P-EXP").expected_verdicts["theorem1"] is Verdict.PRECONDITION_VIOLATED
    assert get_instance("P-EXP").program.attainment_meta.everywhere
    assert get_instance("P-LIN").expected_verdicts == {}


def test_unknown_instance():
    with pytest.raises(KeyError, match="P-NOPE"):
        get_instance("P-NOPE")
