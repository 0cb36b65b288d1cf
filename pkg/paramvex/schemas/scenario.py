"""
Pydantic models for scenario configuration files

A scenario names the program (a catalog id or a program definition file),
the sweep grid, the checks to run and their parameters. Every omitted
section falls back to the defaults of the catalog instance; custom programs
must spell out the grid box.
"""
from typing import List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from paramvex.schemas.numeric import Box

CheckName = Literal["equivalence", "graph-epigraph", "theorem1", "theorem2", "lemma", "lipschitz"]


class ProgramSource(BaseModel):
    """Where the program comes from"""
    instance: Optional[str] = Field(None, description="Catalog id, e.g. P-LIN")
    definition: Optional[str] = Field(None, description="Path to a program definition JSON file")

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def _exactly_one(self) -> "ProgramSource":
        if (self.instance is None) == (self.definition is None):
            raise ValueError("program needs exactly one of 'instance' or 'definition'")
        return self


class RegionSection(BaseModel):
    """Axis-aligned box given by its corners"""
    lower: List[float]
    upper: List[float]

    model_config = ConfigDict(extra="forbid")

    def to_box(self) -> Box:
        return Box(lower=tuple(self.lower), upper=tuple(self.upper))


class GridSection(BaseModel):
    """Sweep grid"""
    box: Optional[RegionSection] = None
    points_per_dim: int = Field(101, ge=2, description="Grid points per axis")

    model_config = ConfigDict(extra="forbid")


class ToleranceOverrides(BaseModel):
    """Individual fields replacing those of the selected profile"""
    feasibility_eps: Optional[float] = Field(None, gt=0)
    value_eps: Optional[float] = Field(None, gt=0)
    convexity_eps: Optional[float] = Field(None, gt=0)
    unbounded_threshold: Optional[float] = Field(None, gt=0)

    model_config = ConfigDict(extra="forbid")


class BallSection(BaseModel):
    """Ball around y0 for the local checks"""
    center: Optional[List[float]] = None
    radius: Optional[float] = Field(None, gt=0)
    sample_count: int = Field(50, ge=10)

    model_config = ConfigDict(extra="forbid")


class LemmaSection(BallSection):
    target_count: int = Field(20, ge=1, description="Random targets drawn from the region")
    region: Optional[RegionSection] = None


class Theorem2Section(BaseModel):
    region: Optional[RegionSection] = None
    grid_per_dim: int = Field(11, ge=2)
    pair_count: int = Field(500, ge=500)

    model_config = ConfigDict(extra="forbid")


class LipschitzSection(BaseModel):
    region: Optional[RegionSection] = None
    pair_count: int = Field(200, ge=1)
    known: Optional[float] = Field(None, ge=0, description="Known Lipschitz constant")

    model_config = ConfigDict(extra="forbid")


class GraphSection(BaseModel):
    y_count: int = Field(100, ge=1)
    mu_per_y: int = Field(100, ge=1)
    mu_range: Tuple[float, float] = (-5.0, 5.0)

    model_config = ConfigDict(extra="forbid")


class OutputSection(BaseModel):
    csv: Optional[str] = Field(None, description="Sweep CSV path")
    report: Optional[str] = Field(None, description="Analysis report JSON path")

    model_config = ConfigDict(extra="forbid")


class ScenarioConfig(BaseModel):
    """
    One analysis scenario
    """
    program: ProgramSource
    grid: GridSection = Field(default_factory=GridSection)
    checks: Optional[List[CheckName]] = Field(
        None, description="Checks to run; the instance defaults when omitted"
    )
    tolerance_profile: Optional[str] = Field(None, description="Profile name, overrides --tol")
    tolerances: ToleranceOverrides = Field(default_factory=ToleranceOverrides)
    seed: Optional[int] = Field(None, ge=0, description="Overrides --seed")
    outputs: OutputSection = Field(default_factory=OutputSection)
    theorem1: BallSection = Field(default_factory=BallSection)
    theorem2: Theorem2Section = Field(default_factory=Theorem2Section)
    lemma: LemmaSection = Field(default_factory=LemmaSection)
    lipschitz: LipschitzSection = Field(default_factory=LipschitzSection)
    graph: GraphSection = Field(default_factory=GraphSection)

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "program": {"instance": "P-RELU"},
                "grid": {"box": {"lower": [-2.0], "upper": [2.0]}, "points_per_dim": 101},
                "checks": ["equivalence", "theorem2", "lipschitz"],
                "tolerances": {"value_eps": 1e-7},
                "seed": 7,
                "lipschitz": {"region": {"lower": [0.0], "upper": [2.0]}, "known": 4.0},
            }
        },
    )
