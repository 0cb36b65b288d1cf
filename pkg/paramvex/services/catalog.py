"""
Built-in catalog of parametric programs with closed-form value functions
"""
import math
from typing import Dict, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from paramvex.models.program import AttainmentMeta, CostSpec, FeasibleMapping, ParametricProgram
from paramvex.schemas.numeric import Box, ExtendedReal
from paramvex.schemas.report import CHECK_NAMES, Verdict


class CatalogInstance(BaseModel):
    """
    A catalog program together with its analysis defaults
    """
    id: str = Field(..., description="Catalog identifier, e.g. P-LIN")
    program: ParametricProgram
    known_domain: str = Field(..., description="dom F in words")
    known_lipschitz: Optional[float] = Field(None, description="Lipschitz constant of v on region")
    notes: str = Field("", description="Closed-form value function")
    pathology: str = Field("none", description="What makes the instance interesting")
    box: Box = Field(..., description="Sweep and equivalence box")
    region: Box = Field(..., description="Analysis region for theorem2, lemma and lipschitz")
    center: Tuple[float, ...] = Field(..., description="Ball center y0")
    radius: float = Field(..., gt=0, description="Ball radius")
    default_checks: Tuple[str, ...] = CHECK_NAMES
    expected_verdicts: Dict[str, Verdict] = Field(
        default_factory=dict, description="Non-pass verdicts the instance is known to produce"
    )

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def _interval(lower: float, upper: float) -> Box:
    return Box(lower=(lower,), upper=(upper,))


# x >= y written as -x <= -y
_X_ABOVE_Y = FeasibleMapping(A=[[-1.0]], B=[[-1.0]], c=[0.0])


def _finite_or_plus(value: Optional[float]) -> ExtendedReal:
    return ExtendedReal.plus_infinity() if value is None else ExtendedReal.finite(value)


def _p_lin() -> CatalogInstance:
    program = ParametricProgram(
        name="P-LIN",
        n=1,
        m=1,
        cost=CostSpec.affine_max(P=[[1.0]], Qy=[[0.0]], r=[0.0]),
        feasible=_X_ABOVE_Y,
        reference_value=lambda y: ExtendedReal.finite(float(y[0])),
    )
    return CatalogInstance(
        id="P-LIN",
        program=program,
        known_domain="R",
        known_lipschitz=1.0,
        notes="min x s.t. x >= y; v(y) = y",
        box=_interval(-1.0, 1.0),
        region=_interval(-1.0, 1.0),
        center=(0.0,),
        radius=0.5,
    )


def _p_relu() -> CatalogInstance:
    program = ParametricProgram(
        name="P-RELU",
        n=1,
        m=1,
        cost=CostSpec.quadratic(Q=[[2.0, 0.0], [0.0, 0.0]], g=[0.0, 0.0]),
        feasible=_X_ABOVE_Y,
        reference_value=lambda y: ExtendedReal.finite(max(0.0, float(y[0])) ** 2),
    )
    return CatalogInstance(
        id="P-RELU",
        program=program,
        known_domain="R",
        known_lipschitz=4.0,
        notes="min x^2 s.t. x >= y; v(y) = max(0, y)^2",
        box=_interval(-2.0, 2.0),
        region=_interval(0.0, 2.0),
        center=(1.0,),
        radius=0.5,
    )


def _p_int() -> CatalogInstance:
    program = ParametricProgram(
        name="P-INT",
        n=1,
        m=1,
        cost=CostSpec.affine_max(P=[[-1.0]], Qy=[[0.0]], r=[0.0]),
        feasible=FeasibleMapping(A=[[-1.0], [1.0]], B=[[0.0], [1.0]], c=[0.0, 0.0]),
        reference_value=lambda y: _finite_or_plus(-float(y[0]) if y[0] >= 0 else None),
    )
    return CatalogInstance(
        id="P-INT",
        program=program,
        known_domain="[0, inf)",
        known_lipschitz=1.0,
        notes="min -x s.t. 0 <= x <= y; v(y) = -y on y >= 0, +inf otherwise",
        pathology="dom F is a proper half-line",
        box=_interval(-1.0, 1.0),
        region=_interval(0.1, 1.0),
        center=(0.5,),
        radius=0.25,
    )


def _p_unb() -> CatalogInstance:
    program = ParametricProgram(
        name="P-UNB",
        n=1,
        m=1,
        cost=CostSpec.affine_max(P=[[-1.0]], Qy=[[0.0]], r=[0.0]),
        feasible=_X_ABOVE_Y,
        reference_value=lambda y: ExtendedReal.minus_infinity(),
    )
    return CatalogInstance(
        id="P-UNB",
        program=program,
        known_domain="R",
        notes="min -x s.t. x >= y; v = -inf everywhere",
        pathology="v = -inf (improper)",
        box=_interval(-1.0, 1.0),
        region=_interval(0.0, 1.0),
        center=(1.0,),
        radius=0.5,
        default_checks=tuple(name for name in CHECK_NAMES if name != "theorem2"),
        expected_verdicts={
            "lemma": Verdict.PRECONDITION_VIOLATED,
            "lipschitz": Verdict.PRECONDITION_VIOLATED,
        },
    )


def _p_exp() -> CatalogInstance:
    program = ParametricProgram(
        name="P-EXP",
        n=1,
        m=1,
        cost=CostSpec.named("exp_neg"),
        feasible=_X_ABOVE_Y,
        attainment_meta=AttainmentMeta(everywhere=True),
        reference_value=lambda y: ExtendedReal.minus_infinity(),
    )
    return CatalogInstance(
        id="P-EXP",
        program=program,
        known_domain="R",
        notes="min exp(-x) s.t. x >= y; infimum 0 never attained",
        pathology="non-closed-valued F_phi",
        box=_interval(-1.0, 1.0),
        region=_interval(-1.0, 1.0),
        center=(0.0,),
        radius=0.5,
        default_checks=tuple(name for name in CHECK_NAMES if name != "theorem2"),
        expected_verdicts={
            "theorem1": Verdict.PRECONDITION_VIOLATED,
            "lemma": Verdict.PRECONDITION_VIOLATED,
            "lipschitz": Verdict.PRECONDITION_VIOLATED,
        },
    )


def _p_proj() -> CatalogInstance:
    def reference(y: np.ndarray) -> ExtendedReal:
        distance = max(0.0, abs(float(y[0])) - 1.0)
        return ExtendedReal.finite(distance**2)

    program = ParametricProgram(
        name="P-PROJ",
        n=1,
        m=1,
        cost=CostSpec.quadratic(Q=[[2.0, -2.0], [-2.0, 2.0]], g=[0.0, 0.0]),
        feasible=FeasibleMapping(A=[[1.0], [-1.0]], B=[[0.0], [0.0]], c=[1.0, 1.0]),
        reference_value=reference,
    )
    return CatalogInstance(
        id="P-PROJ",
        program=program,
        known_domain="R",
        known_lipschitz=0.0,
        notes="min (x - y)^2 s.t. -1 <= x <= 1; v(y) = dist(y, [-1, 1])^2",
        box=_interval(-3.0, 3.0),
        region=_interval(-0.5, 0.5),
        center=(0.0,),
        radius=0.5,
    )


def _p_exp_box() -> CatalogInstance:
    program = ParametricProgram(
        name="P-EXP-BOX",
        n=1,
        m=1,
        cost=CostSpec.named("exp_neg"),
        feasible=FeasibleMapping(A=[[-1.0], [1.0]], B=[[-1.0], [0.0]], c=[0.0, 5.0]),
        reference_value=lambda y: _finite_or_plus(math.exp(-5.0) if y[0] <= 5.0 else None),
    )
    return CatalogInstance(
        id="P-EXP-BOX",
        program=program,
        known_domain="(-inf, 5]",
        known_lipschitz=0.0,
        notes="min exp(-x) s.t. y <= x <= 5; v(y) = exp(-5) for y <= 5",
        pathology="exp_neg with attainment restored by an upper bound",
        box=_interval(-1.0, 6.0),
        region=_interval(-1.0, 1.0),
        center=(0.0,),
        radius=0.5,
    )


def _p_abs() -> CatalogInstance:
    program = ParametricProgram(
        name="P-ABS",
        n=1,
        m=1,
        cost=CostSpec.named("abs_diff"),
        feasible=FeasibleMapping.unconstrained(1, 1),
        reference_value=lambda y: ExtendedReal.finite(0.0),
    )
    return CatalogInstance(
        id="P-ABS",
        program=program,
        known_domain="R",
        known_lipschitz=0.0,
        notes="min |x - y| unconstrained; v = 0",
        pathology="unconstrained decision",
        box=_interval(-2.0, 2.0),
        region=_interval(-1.0, 1.0),
        center=(0.0,),
        radius=0.5,
    )


def _p_zero() -> CatalogInstance:
    program = ParametricProgram(
        name="P-ZERO",
        n=1,
        m=1,
        cost=CostSpec.affine_max(P=[[0.0]], Qy=[[0.0]], r=[0.0]),
        feasible=_X_ABOVE_Y,
        reference_value=lambda y: ExtendedReal.finite(0.0),
    )
    return CatalogInstance(
        id="P-ZERO",
        program=program,
        known_domain="R",
        known_lipschitz=0.0,
        notes="min 0 s.t. x >= y; v = 0",
        pathology="constant cost (degenerate lemma bound)",
        box=_interval(-1.0, 1.0),
        region=_interval(-1.0, 1.0),
        center=(0.0,),
        radius=0.5,
    )


_BUILDERS = (_p_lin, _p_relu, _p_int, _p_unb, _p_exp, _p_proj, _p_exp_box, _p_abs, _p_zero)


def catalog() -> List[CatalogInstance]:
    """
    All catalog instances, in a fixed order

    Programs are built on every call so they are validated against the
    current settings.
    """
    return [build() for build in _BUILDERS]


def get_instance(instance_id: str) -> CatalogInstance:
    """
    Look up a catalog instance by id

    Raises:
        KeyError: if the id is unknown
    """
    for instance in catalog():
        if instance.id == instance_id:
            return instance
    known = ", ".join(instance.id for instance in catalog())
    raise KeyError(f"unknown catalog instance '{instance_id}' (known: {known})")
