"""
Scenario loading and problem construction for the steer and train commands.
"""

import hashlib
import json
import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from ..dynamics.ensemble import Ensemble
from ..dynamics.output import OutputMap
from ..fields.families import ControlFamily, FamilyKind
from ..geometry.manifold import ManifoldSpec
from ..schemas.scenario import Sampling, ScenarioFile
from ..solver.experiments import classification_problem, two_moons
from ..solver.problem import TrainingProblem
from ..utils.error_handler import InvalidEnsembleError, ScenarioConfigError

logger = logging.getLogger(__name__)

# offset between the source and the target random streams
TARGET_STREAM = 1


def canonical_json(value: Any) -> str:
    return json.dumps(value, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def config_hash_of(payload: Any) -> str:
    """SHA-256 of the canonical JSON of a payload."""
    return hashlib.sha256(canonical_json(payload).encode("utf-8")).hexdigest()


def config_hash(scenario: ScenarioFile) -> str:
    """SHA-256 of the canonical JSON form of a validated scenario."""
    return config_hash_of(scenario.model_dump(mode="json"))


def read_scenario(path: Path) -> Dict[str, Any]:
    """Parse a JSON or TOML scenario file into a plain mapping."""
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise ScenarioConfigError(f"cannot read scenario: {e}", path=str(path)) from e
    try:
        if path.suffix.lower() == ".toml":
            data = tomllib.loads(raw.decode("utf-8"))
        else:
            data = json.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ScenarioConfigError(f"malformed scenario file: {e}", path=str(path)) from e
    if not isinstance(data, dict):
        raise ScenarioConfigError("scenario root must be an object", path=str(path))
    return data


def load_scenario(
    path: Path, command: str, seed: Optional[int] = None
) -> ScenarioFile:
    """
    Read and validate a scenario for ``command``; ``seed`` overrides the
    scenario seed and the optimizer seed.

    Raises:
        ScenarioConfigError: on unreadable, malformed or invalid files
    """
    data = read_scenario(path)
    data.setdefault("command", command)
    try:
        scenario = ScenarioFile.model_validate(data)
    except ValidationError as e:
        raise ScenarioConfigError(
            f"scenario failed validation: {e.error_count()} error(s)",
            path=str(path),
            errors=[err["msg"] for err in e.errors()],
        ) from e
    if scenario.command != command:
        raise ScenarioConfigError(
            f"scenario is for '{scenario.command}', not '{command}'", path=str(path)
        )
    if seed is not None:
        optimizer = scenario.optimizer.model_copy(update={"seed": seed})
        scenario = scenario.model_copy(update={"seed": seed, "optimizer": optimizer})
    return scenario


def _sample(
    manifold: ManifoldSpec, sampling: Sampling, rng: np.random.Generator
) -> np.ndarray:
    return Ensemble.random(manifold, sampling.n, rng, sampling.low, sampling.high).array


def _family(scenario: ScenarioFile) -> ControlFamily:
    family = ControlFamily.from_id(scenario.family)
    if family.kind == FamilyKind.PRODUCT_GH and scenario.nu is not None:
        family = ControlFamily.product_gh(family.d, family.s, scenario.nu)
    return family


def _sources(scenario: ScenarioFile, manifold: ManifoldSpec, rng) -> Ensemble:
    if scenario.points is not None:
        points = np.asarray(scenario.points, dtype=float)
        if points.ndim != 2:
            raise ScenarioConfigError("points must be a list of coordinate lists")
        return Ensemble(manifold, points)
    return Ensemble(manifold, _sample(manifold, scenario.sampling, rng))


def build_steering(
    scenario: ScenarioFile, threads: Optional[int] = None
) -> TrainingProblem:
    """Steering problem with sources and targets drawn as the scenario says."""
    family = _family(scenario)
    manifold = family.manifold
    ensemble = _sources(scenario, manifold, np.random.default_rng(scenario.seed))
    pmap = OutputMap.build(manifold, scenario.pmap)
    if scenario.targets is not None:
        targets = np.asarray(scenario.targets, dtype=float)
    elif scenario.target_rule == "identity":
        targets = pmap(ensemble.array)
    else:
        target_rng = np.random.default_rng(scenario.seed + TARGET_STREAM)
        sampling = scenario.target_sampling or scenario.sampling or Sampling(n=ensemble.N)
        sampling = sampling.model_copy(update={"n": ensemble.N})
        targets = pmap(_sample(manifold, sampling, target_rng))
    return TrainingProblem(
        family=family,
        ensemble=ensemble,
        targets=targets,
        pmap=pmap,
        beta=scenario.beta,
        T=scenario.T,
        steps=scenario.steps,
        substeps=scenario.substeps,
        threads=threads,
    )


def build_training(
    scenario: ScenarioFile, threads: Optional[int] = None
) -> Tuple[TrainingProblem, np.ndarray, np.ndarray]:
    """
    Classification problem on labelled data.

    Returns:
        (problem, data points, labels)
    """
    family = _family(scenario)
    if scenario.dataset is not None:
        points, labels = two_moons(scenario.dataset.n, scenario.dataset.noise, scenario.seed)
    elif scenario.points is not None and scenario.labels is not None:
        if not scenario.points:
            raise InvalidEnsembleError("an ensemble needs at least one point")
        points = np.asarray(scenario.points, dtype=float).reshape(len(scenario.points), -1)
        labels = np.asarray(scenario.labels, dtype=float)
    else:
        raise ScenarioConfigError("training needs a dataset or labelled points")
    problem = classification_problem(
        points,
        labels,
        family,
        beta=scenario.beta,
        T=scenario.T,
        steps=scenario.steps,
        substeps=scenario.substeps,
        threads=threads,
    )
    logger.info(f"Training set: {len(labels)} points, family {family.family_id}")
    return problem, points, labels
