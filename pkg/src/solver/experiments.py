"""
Experiment helpers: the two-moons dataset, the product lift used for
classification, accuracy scoring and beta sweeps.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..dynamics.ensemble import Ensemble
from ..fields.families import ControlFamily, FamilyKind
from ..schemas.scenario import OptimizerConfig
from ..utils.error_handler import DimensionMismatchError, InvalidEnsembleError
from .loss import member_discrepancies
from .optimizer import optimize
from .problem import TrainingProblem

logger = logging.getLogger(__name__)

DEFAULT_BETAS = (0.0, 1e-4, 1e-2)


def two_moons(
    n: int, noise: float = 0.05, seed: int = 0
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Two interleaved half-circles in the plane, centered at the origin.

    Returns:
        (points of shape (n, 2), labels in {0, 1} of shape (n,))
    """
    if n < 1:
        raise ValueError("two_moons needs at least one point")
    rng = np.random.default_rng(seed)
    n_upper = (n + 1) // 2
    n_lower = n - n_upper
    t_upper = np.linspace(0.0, np.pi, n_upper)
    t_lower = np.linspace(0.0, np.pi, n_lower)
    upper = np.column_stack([np.cos(t_upper), np.sin(t_upper)])
    lower = np.column_stack([1.0 - np.cos(t_lower), 0.5 - np.sin(t_lower)])
    points = np.vstack([upper, lower]) - np.array([0.5, 0.25])
    if noise > 0:
        points = points + rng.normal(scale=noise, size=points.shape)
    labels = np.concatenate([np.zeros(n_upper), np.ones(n_lower)])
    return points, labels


def lift_product(points: np.ndarray, nu: Sequence[float]) -> np.ndarray:
    """iota(x) = (x, nu): embed data points into the product state space."""
    points = np.atleast_2d(np.asarray(points, dtype=float))
    nu = np.asarray(nu, dtype=float)
    return np.hstack([points, np.broadcast_to(nu, (points.shape[0], nu.size))])


def classification_accuracy(
    outputs: np.ndarray, labels: np.ndarray, tolerance: float = 0.25
) -> float:
    """Fraction of members whose output lies within ``tolerance`` of its label."""
    outputs = np.asarray(outputs, dtype=float)
    labels = np.asarray(labels, dtype=float)
    if outputs.ndim > 1:
        outputs = outputs.reshape(outputs.shape[0], -1)
        labels = labels.reshape(labels.shape[0], -1)
        distance = np.linalg.norm(outputs - labels, axis=-1)
    else:
        distance = np.abs(outputs - labels)
    return float(np.mean(distance <= tolerance))


def classification_problem(
    points: np.ndarray,
    labels: np.ndarray,
    family: ControlFamily,
    **kwargs,
) -> TrainingProblem:
    """Product-system problem moving the label coordinates of iota(x) onto the labels."""
    if family.kind != FamilyKind.PRODUCT_GH:
        raise DimensionMismatchError(
            "classification uses the product system", family=family.family_id
        )
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        raise InvalidEnsembleError("an ensemble needs at least one point")
    points = np.atleast_2d(points)
    if points.shape[1] != family.d:
        raise DimensionMismatchError(
            "data dimension differs from the family", data=points.shape[1], d=family.d
        )
    ensemble = Ensemble(family.manifold, lift_product(points, family.nu))
    label_axes = list(range(family.d, family.d + family.s))
    targets = np.asarray(labels, dtype=float).reshape(points.shape[0], family.s)
    return TrainingProblem.build(family, ensemble, targets, pmap=label_axes, **kwargs)


def beta_sweep(
    problem: TrainingProblem,
    config: Optional[OptimizerConfig] = None,
    betas: Sequence[float] = DEFAULT_BETAS,
) -> List[Dict[str, float]]:
    """Optimize the same problem for each beta and report the achieved values."""
    rows = []
    for beta in betas:
        result = optimize(problem.with_options(beta=float(beta)), config)
        final = result.final
        worst = float(np.max(member_discrepancies(problem, final.trajectory.terminal)))
        rows.append(
            {
                "beta": float(beta),
                "loss": final.loss,
                "discrepancy": final.discrepancy,
                "max_member_discrepancy": worst,
                "iterations": result.iterations,
            }
        )
        logger.info(f"beta={beta:g}: loss {final.loss:.6e}, worst member {worst:.3e}")
    return rows
