"""
Pytest configuration file with common fixtures
"""
import io
import json
from pathlib import Path
from typing import Any, Callable, Dict, List, Tuple

import pytest

from paramvex.main import main
from paramvex.models.program import CostSpec, FeasibleMapping, ParametricProgram
from paramvex.schemas.numeric import Tolerances, get_tolerances
from paramvex.services.catalog import CatalogInstance, get_instance


@pytest.fixture
def tol() -> Tolerances:
    """Default tolerance profile"""
    return get_tolerances("default")


@pytest.fixture
def instance() -> Callable[[str], CatalogInstance]:
    """Catalog lookup by id"""
    return get_instance


@pytest.fixture
def program() -> Callable[[str], ParametricProgram]:
    """Catalog program lookup by id"""
    return lambda instance_id: get_instance(instance_id).program


@pytest.fixture
def max_of_two() -> ParametricProgram:
    """
    min x s.t. x >= y_1, x >= y_2, so v(y) = max(y_1, y_2)
    """
    return ParametricProgram(
        name="max-of-two",
        n=1,
        m=2,
        cost=CostSpec.affine_max(P=[[1.0]], Qy=[[0.0, 0.0]], r=[0.0]),
        feasible=FeasibleMapping(
            A=[[-1.0], [-1.0]], B=[[-1.0, 0.0], [0.0, -1.0]], c=[0.0, 0.0]
        ),
    )


@pytest.fixture
def max_of_two_definition() -> Dict[str, Any]:
    """Program definition document of max_of_two"""
    return {
        "name": "max-of-two",
        "n": 1,
        "m": 2,
        "cost": {"kind": "affine_max", "pieces": [{"p": [1.0], "q": [0.0, 0.0], "r": 0.0}]},
        "feasible": {"A": [[-1.0], [-1.0]], "B": [[-1.0, 0.0], [0.0, -1.0]], "c": [0.0, 0.0]},
    }


@pytest.fixture
def write_json(tmp_path: Path) -> Callable[[str, Any], Path]:
    """Write a JSON document into the test directory"""

    def _write(name: str, document: Any) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(document), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def run_cli() -> Callable[[List[str]], Tuple[int, str]]:
    """Run the command line and capture stdout"""

    def _run(argv: List[str]) -> Tuple[int, str]:
        stdout = io.StringIO()
        code = main(argv, stdout=stdout)
        return code, stdout.getvalue()

    return _run
