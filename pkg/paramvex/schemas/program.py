"""
Pydantic models for program definition files

A program definition is a JSON document::

    {
      "n": 1,
      "m": 1,
      "cost": {"kind": "affine_max", "pieces": [{"p": [1.0], "q": [0.0], "r": 0.0}]},
      "feasible": {"A": [[-1.0]], "B": [[-1.0]], "c": [0.0]}
    }

``cost`` is one of

- ``{"kind": "affine_max", "pieces": [{"p": [...n], "q": [...m], "r": float}, ...]}``
- ``{"kind": "quadratic", "Q": [[...n+m]...], "g": [...n+m], "h": float}``
- ``{"kind": "builtin", "name": "exp_neg" | "abs_diff"}``

``feasible`` encodes F(y) = { x | A x <= c + B y } with row-major matrices;
omit it for an unconstrained program.

``attainment`` declares where the infimum is finite but not attained, either
``{"everywhere": true}`` or a list of parameter boxes
``{"regions": [{"lower": [...m], "upper": [...m]}]}``. Builtin costs with a
finite tail limit need it wherever the tail is reachable.
"""
from typing import Annotated, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class AffinePiece(BaseModel):
    """One affine piece p.x + q.y + r"""
    p: List[float] = Field(..., description="Decision coefficients (length n)")
    q: List[float] = Field(..., description="Parameter coefficients (length m)")
    r: float = Field(0.0, description="Offset")


class AffineMaxCostDefinition(BaseModel):
    """Pointwise maximum of affine pieces"""
    kind: Literal["affine_max"]
    pieces: List[AffinePiece] = Field(..., min_length=1)


class QuadraticCostDefinition(BaseModel):
    """1/2 z'Qz + g'z + h over z = (x, y)"""
    kind: Literal["quadratic"]
    Q: List[List[float]] = Field(..., description="(n+m) x (n+m) PSD matrix")
    g: List[float] = Field(..., description="Linear term (length n+m)")
    h: float = Field(0.0, description="Constant term")


class BuiltinCostDefinition(BaseModel):
    """Named closed-form cost from the builtin registry"""
    kind: Literal["builtin"]
    name: str = Field(..., description="Registry key")


CostDefinition = Annotated[
    Union[AffineMaxCostDefinition, QuadraticCostDefinition, BuiltinCostDefinition],
    Field(discriminator="kind"),
]


class FeasibleDefinition(BaseModel):
    """Polyhedral feasible mapping A x <= c + B y"""
    A: List[List[float]] = Field(..., description="k x n matrix")
    B: List[List[float]] = Field(..., description="k x m matrix")
    c: List[float] = Field(..., description="Offsets (length k)")


class RegionDefinition(BaseModel):
    lower: List[float] = Field(..., description="Lower corner (length m)")
    upper: List[float] = Field(..., description="Upper corner (length m)")

    model_config = ConfigDict(extra="forbid")


class AttainmentDefinition(BaseModel):
    """Parameters where the minimum is not attained"""
    everywhere: bool = False
    regions: List[RegionDefinition] = Field(default_factory=list)

    model_config = ConfigDict(extra="forbid")


class ProgramDefinition(BaseModel):
    """
    Program definition file
    """
    name: str = Field("custom", description="Identifier used in reports")
    n: int = Field(..., ge=1, description="Decision dimension")
    m: int = Field(..., ge=1, description="Parameter dimension")
    cost: CostDefinition
    feasible: Optional[FeasibleDefinition] = None
    attainment: Optional[AttainmentDefinition] = None

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "name": "shifted-lin",
                "n": 1,
                "m": 1,
                "cost": {"kind": "affine_max", "pieces": [{"p": [1.0], "q": [0.0], "r": 0.0}]},
                "feasible": {"A": [[-1.0]], "B": [[-1.0]], "c": [0.0]},
            }
        },
    )
