"""
Exact gradient of the RK4-discretized loss with respect to the schedule.

The forward pass stores every substep node; the reverse pass recomputes the
RK4 stages and transposes each step, including the sphere retraction.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..fields.families import ControlFamily
from .ensemble import Ensemble
from .integrator import TrajectoryBundle, flow_ensemble
from .output import OutputMap, check_targets, terminal_covector
from .schedule import ControlSchedule

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class GradientResult:
    """
    Loss value and its schedule gradient.

    Attributes:
        loss: Discrepancy plus penalty
        discrepancy: 1/2 sum_k |p(z_k(T)) - c_k|^2
        penalty: beta/2 sum_j sum_i u_ji^2 dt
        gradient: dJ/du, shape (S, r)
        discrepancy_gradient: Gradient of the discrepancy term alone
        trajectory: Forward solution used
    """

    loss: float
    discrepancy: float
    penalty: float
    gradient: np.ndarray
    discrepancy_gradient: np.ndarray
    trajectory: TrajectoryBundle


def _stages(family: ControlFamily, y: np.ndarray, u: np.ndarray, h: float):
    Y1 = y
    k1 = family.velocity(Y1, u)
    Y2 = y + 0.5 * h * k1
    k2 = family.velocity(Y2, u)
    Y3 = y + 0.5 * h * k2
    k3 = family.velocity(Y3, u)
    Y4 = y + h * k3
    return (Y1, Y2, Y3, Y4)


def _retraction_transpose(lam: np.ndarray, raw: np.ndarray) -> np.ndarray:
    """DP(y)^T lam for P(y) = y / |y|."""
    radius = np.linalg.norm(raw, axis=-1, keepdims=True)
    unit = raw / radius
    return (lam - np.sum(lam * unit, axis=-1, keepdims=True) * unit) / radius


def discrepancy_value(pmap: OutputMap, terminal: np.ndarray, targets: np.ndarray) -> float:
    return 0.5 * float(np.sum(pmap.difference(terminal, targets) ** 2))


def penalty_value(sched: ControlSchedule, beta: float) -> float:
    return 0.5 * beta * float(np.sum(sched.values**2)) * sched.dt


def discrete_gradient(
    family: ControlFamily,
    sched: ControlSchedule,
    ensemble: Ensemble,
    targets: np.ndarray,
    pmap: OutputMap,
    beta: float,
    substeps: Optional[int] = None,
    traj: Optional[TrajectoryBundle] = None,
) -> GradientResult:
    """
    dJ/du[j, i] of the discretized loss by reverse-mode transposition of
    every RK4 substep.
    """
    if beta < 0:
        raise ValueError("beta must be non-negative")
    targets = check_targets(pmap, targets, ensemble.N)
    traj = traj or flow_ensemble(family, sched, ensemble, substeps=substeps)
    M = traj.substeps
    h = sched.dt / M
    weights = (h / 6.0, h / 3.0, h / 3.0, h / 6.0)
    nodes = traj.substep_states
    sphere = family.manifold.is_sphere

    lam = terminal_covector(pmap, nodes[-1], targets)
    grad = np.zeros_like(sched.values)
    for q in range(nodes.shape[0] - 2, -1, -1):
        j = q // M
        u = sched.values[j]
        lam_raw = _retraction_transpose(lam, traj.raw_ends[q]) if sphere else lam
        stages = _stages(family, nodes[q], u, h)
        values = [family.values(Y) for Y in stages]
        jacs = [np.einsum("krnm,r->knm", family.jacobians(Y), u) for Y in stages]

        a = [lam_raw * w for w in weights]
        g4 = a[3]
        g3 = a[2] + h * np.einsum("kn,knm->km", g4, jacs[3])
        g2 = a[1] + 0.5 * h * np.einsum("kn,knm->km", g3, jacs[2])
        g1 = a[0] + 0.5 * h * np.einsum("kn,knm->km", g2, jacs[1])
        bars = (g1, g2, g3, g4)

        lam = lam_raw + sum(np.einsum("kn,knm->km", g, J) for g, J in zip(bars, jacs))
        grad[j] += sum(np.einsum("kn,krn->r", g, V) for g, V in zip(bars, values))

    discrepancy = discrepancy_value(pmap, traj.terminal, targets)
    penalty = penalty_value(sched, beta)
    total = grad + beta * sched.values * sched.dt
    return GradientResult(
        loss=discrepancy + penalty,
        discrepancy=discrepancy,
        penalty=penalty,
        gradient=total,
        discrepancy_gradient=grad,
        trajectory=traj,
    )
