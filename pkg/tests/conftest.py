"""
Shared fixtures: seeded generators, sphere samples, small problems and the
committed scenario files.
"""

import json
from pathlib import Path

import numpy as np
import pytest

from src.core.config import get_settings
from src.dynamics import Ensemble
from src.fields import ControlFamily
from src.geometry import random_unit_vectors
from src.solver import TrainingProblem

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator; every test gets a fresh stream."""
    return np.random.default_rng(20240601)


@pytest.fixture
def unit_vectors(rng) -> np.ndarray:
    return random_unit_vectors(rng, 25)


@pytest.fixture
def gh2() -> ControlFamily:
    return ControlFamily.gh(2)


@pytest.fixture
def gh2_problem(rng, gh2) -> TrainingProblem:
    """Three random sources steered to three random targets in the plane."""
    ensemble = Ensemble.random(gh2.manifold, 3, rng)
    targets = rng.uniform(-1.0, 1.0, size=(3, 2))
    return TrainingProblem.build(gh2, ensemble, targets, beta=1e-2, T=1.0, steps=8)


@pytest.fixture
def scenario_file(tmp_path):
    """Write a scenario mapping to a JSON file and return its path."""

    def write(payload, name: str = "scenario.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return write


@pytest.fixture(autouse=True)
def restore_threads():
    """The CLI may override settings.threads; put it back after each test."""
    settings = get_settings()
    threads = settings.threads
    yield
    settings.threads = threads
