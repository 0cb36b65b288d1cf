"""
Scenario resolution and check orchestration
"""
import json
import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from paramvex.core.exceptions import InvalidProgramError, ScenarioError
from paramvex.models.program import ParametricProgram
from paramvex.schemas.numeric import Ball, Box, Tolerances, get_tolerances
from paramvex.schemas.report import CHECK_NAMES, AnalysisReport, CheckResult, ValueGrid, Verdict
from paramvex.schemas.scenario import GraphSection, ProgramSource, RegionSection, ScenarioConfig
from paramvex.services import certifiers
from paramvex.services.catalog import CatalogInstance, get_instance
from paramvex.services.programs import load_program
from paramvex.services.value_analysis import sweep

logger = logging.getLogger(__name__)


class ScenarioPlan(BaseModel):
    """
    A scenario with every default filled in
    """
    name: str
    program: ParametricProgram
    tolerances: Tolerances
    seed: int = Field(..., ge=0)
    box: Box
    points_per_dim: int = Field(..., ge=2)
    checks: Tuple[str, ...]
    expected_verdicts: Dict[str, Verdict] = Field(default_factory=dict)
    theorem1_ball: Ball
    theorem1_samples: int
    theorem2_region: Box
    theorem2_grid: int
    theorem2_pairs: int
    lemma_ball: Ball
    lemma_samples: int
    lemma_region: Box
    lemma_targets: int
    lipschitz_region: Box
    lipschitz_pairs: int
    known_lipschitz: Optional[float] = None
    graph: GraphSection
    csv_path: Optional[str] = None
    report_path: Optional[str] = None

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)


def load_scenario(path: Union[str, Path]) -> ScenarioConfig:
    """
    Read a scenario configuration file

    Raises:
        ScenarioError: if the file cannot be read or does not validate
    """
    path = Path(path)
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
        config = ScenarioConfig.model_validate(document)
    except (OSError, json.JSONDecodeError) as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}") from e
    except ValidationError as e:
        raise ScenarioError(f"invalid scenario {path}: {e}") from e
    logger.info(f"Loaded scenario {path}")
    return config


def _resolve_tolerances(config: ScenarioConfig, profile: str) -> Tolerances:
    try:
        base = get_tolerances(config.tolerance_profile or profile)
        overrides = config.tolerances.model_dump(exclude_none=True)
        return Tolerances(**{**base.model_dump(), **overrides})
    except KeyError as e:
        raise ScenarioError(e.args[0]) from None
    except ValidationError as e:
        raise ScenarioError(f"invalid tolerances: {e}") from e


def _resolve_program(
    source: ProgramSource, base_dir: Path
) -> Tuple[ParametricProgram, Optional[CatalogInstance]]:
    if source.instance is not None:
        try:
            instance = get_instance(source.instance)
        except KeyError as e:
            raise ScenarioError(e.args[0]) from None
        return instance.program, instance

    path = Path(source.definition)
    if not path.is_absolute():
        path = base_dir / path
    try:
        return load_program(path), None
    except InvalidProgramError as e:
        raise ScenarioError(str(e)) from e


def _output_path(path: Optional[str], base_dir: Path) -> Optional[str]:
    if path is None or Path(path).is_absolute():
        return path
    return str(base_dir / path)


def _ball(center: Optional[List[float]], radius: Optional[float], default: Ball) -> Ball:
    try:
        return Ball(
            center=tuple(center) if center is not None else default.center,
            radius=radius if radius is not None else default.radius,
        )
    except ValidationError as e:
        raise ScenarioError(f"invalid ball: {e}") from e


def _region(section: Optional[RegionSection], default: Box) -> Box:
    return section.to_box() if section is not None else default


def _default_ball(region: Box) -> Ball:
    widths = region.upper_array - region.lower_array
    if widths.min() <= 0.0:
        raise ScenarioError("a degenerate region needs an explicit center and radius")
    return Ball(center=region.center, radius=0.25 * float(widths.min()))


def plan_scenario(
    config: ScenarioConfig,
    profile: str = "default",
    seed: int = 0,
    base_dir: Union[str, Path] = ".",
) -> ScenarioPlan:
    """
    Fill in every omitted scenario field

    Catalog instances supply the defaults; custom programs must give a grid
    box and take the rest from it.

    Args:
        config: Parsed scenario
        profile: Tolerance profile unless the scenario names one
        seed: Seed unless the scenario sets one
        base_dir: Directory that relative definition and output paths refer to

    Returns:
        The resolved plan

    Raises:
        ScenarioError: if the scenario is inconsistent or a file is missing
    """
    program, instance = _resolve_program(config.program, Path(base_dir))
    tolerances = _resolve_tolerances(config, profile)

    try:
        if config.grid.box is not None:
            box = config.grid.box.to_box()
        elif instance is not None:
            box = instance.box
        else:
            raise ScenarioError("a custom program needs grid.box")

        region = instance.region if instance is not None else box
        if instance is not None:
            default_ball = Ball(center=instance.center, radius=instance.radius)
        else:
            default_ball = _default_ball(region)
        theorem2_region = _region(config.theorem2.region, region)
        lemma_region = _region(config.lemma.region, region)
        lipschitz_region = _region(config.lipschitz.region, region)
    except ValidationError as e:
        raise ScenarioError(f"invalid region: {e}") from e

    for label, candidate in (
        ("grid.box", box),
        ("theorem2.region", theorem2_region),
        ("lemma.region", lemma_region),
        ("lipschitz.region", lipschitz_region),
    ):
        if candidate.dim != program.m:
            raise ScenarioError(
                f"{label} has dimension {candidate.dim}, program parameter dimension is {program.m}"
            )

    theorem1_ball = _ball(config.theorem1.center, config.theorem1.radius, default_ball)
    lemma_ball = _ball(config.lemma.center, config.lemma.radius, default_ball)
    for label, ball in (("theorem1", theorem1_ball), ("lemma", lemma_ball)):
        if ball.dim != program.m:
            raise ScenarioError(f"{label}.center has dimension {ball.dim}, expected {program.m}")

    if config.checks is not None:
        checks = tuple(config.checks)
    elif instance is not None:
        checks = instance.default_checks
    else:
        checks = CHECK_NAMES

    known = config.lipschitz.known
    if known is None and instance is not None:
        known = instance.known_lipschitz

    return ScenarioPlan(
        name=instance.id if instance is not None else program.name,
        program=program,
        tolerances=tolerances,
        seed=config.seed if config.seed is not None else seed,
        box=box,
        points_per_dim=config.grid.points_per_dim,
        checks=checks,
        expected_verdicts=instance.expected_verdicts if instance is not None else {},
        theorem1_ball=theorem1_ball,
        theorem1_samples=config.theorem1.sample_count,
        theorem2_region=theorem2_region,
        theorem2_grid=config.theorem2.grid_per_dim,
        theorem2_pairs=config.theorem2.pair_count,
        lemma_ball=lemma_ball,
        lemma_samples=config.lemma.sample_count,
        lemma_region=lemma_region,
        lemma_targets=config.lemma.target_count,
        lipschitz_region=lipschitz_region,
        lipschitz_pairs=config.lipschitz.pair_count,
        known_lipschitz=known,
        graph=config.graph,
        csv_path=_output_path(config.outputs.csv, Path(base_dir)),
        report_path=_output_path(config.outputs.report, Path(base_dir)),
    )


def plan_instance(instance_id: str, profile: str = "default", seed: int = 0) -> ScenarioPlan:
    """Plan with every default of a catalog instance"""
    config = ScenarioConfig(program=ProgramSource(instance=instance_id))
    return plan_scenario(config, profile=profile, seed=seed)


def run_sweep(plan: ScenarioPlan) -> ValueGrid:
    return sweep(plan.program, plan.box, plan.points_per_dim, plan.tolerances)


def _run_equivalence(plan: ScenarioPlan) -> CheckResult:
    return certifiers.check_equivalence(
        plan.program, plan.box.grid(plan.points_per_dim), plan.tolerances
    )


def _run_graph_epigraph(plan: ScenarioPlan) -> CheckResult:
    samples = certifiers.sample_graph_pairs(
        plan.box, plan.graph.y_count, plan.graph.mu_per_y, plan.graph.mu_range, plan.seed
    )
    return certifiers.check_graph_epigraph(plan.program, samples, plan.tolerances)


def _run_theorem1(plan: ScenarioPlan) -> CheckResult:
    ball = plan.theorem1_ball
    return certifiers.check_theorem1(
        plan.program,
        ball.center_array,
        ball.radius,
        plan.tolerances,
        seed=plan.seed,
        sample_count=plan.theorem1_samples,
    )


def _run_theorem2(plan: ScenarioPlan) -> CheckResult:
    return certifiers.check_theorem2(
        plan.program,
        plan.theorem2_region,
        plan.theorem2_grid,
        plan.tolerances,
        pair_count=plan.theorem2_pairs,
        seed=plan.seed,
    )


def _run_lemma(plan: ScenarioPlan) -> CheckResult:
    rng = np.random.default_rng(plan.seed)
    targets = [plan.lemma_region.sample(rng) for _ in range(plan.lemma_targets)]
    ball = plan.lemma_ball
    return certifiers.check_lemma(
        plan.program,
        ball.center_array,
        ball,
        targets,
        plan.tolerances,
        seed=plan.seed,
        sample_count=plan.lemma_samples,
    )


def _run_lipschitz(plan: ScenarioPlan) -> CheckResult:
    return certifiers.check_lipschitz(
        plan.program,
        plan.lipschitz_region,
        plan.lipschitz_pairs,
        plan.seed,
        plan.tolerances,
        known_lipschitz=plan.known_lipschitz,
    )


_CHECKS: Dict[str, Callable[[ScenarioPlan], CheckResult]] = {
    "equivalence": _run_equivalence,
    "graph-epigraph": _run_graph_epigraph,
    "theorem1": _run_theorem1,
    "theorem2": _run_theorem2,
    "lemma": _run_lemma,
    "lipschitz": _run_lipschitz,
}


def run_checks(plan: ScenarioPlan) -> AnalysisReport:
    """
    Run the planned checks in order

    Args:
        plan: Resolved scenario

    Returns:
        AnalysisReport; each result records whether its verdict is the one
        the instance declares
    """
    results = []
    for name in plan.checks:
        logger.info(f"Running {name} on {plan.name}")
        result = _CHECKS[name](plan)
        declared = plan.expected_verdicts.get(name)
        if declared is not None:
            result = result.model_copy(update={"expected": result.verdict is declared})
        logger.info(f"{name} on {plan.name}: {result.verdict.value}")
        results.append(result)

    return AnalysisReport(
        instance=plan.name,
        checks=results,
        tolerances=plan.tolerances,
        seed=plan.seed,
        grid={
            "lower": list(plan.box.lower),
            "upper": list(plan.box.upper),
            "points_per_dim": plan.points_per_dim,
        },
    )
