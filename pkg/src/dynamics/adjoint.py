"""
Continuous (Pontryagin) adjoint along a stored trajectory.

Covectors are rows: d psi / dt = -psi A(t) with A(t) = sum_i u_i(t) Df_i(z(t)),
terminal value psi(T) = -(p(z(T)) - c)^T Dp(z(T)).
"""

import logging
from dataclasses import dataclass

import numpy as np

from ..fields.families import ControlFamily
from .integrator import TrajectoryBundle
from .output import OutputMap, check_targets, terminal_covector
from .schedule import ControlSchedule

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class AdjointBundle:
    """
    Attributes:
        psi: Covectors at the control grid, shape (S + 1, N, n)
        substep_psi: Covectors at every substep node, shape (S * M + 1, N, n)
    """

    psi: np.ndarray
    substep_psi: np.ndarray

    @property
    def initial(self) -> np.ndarray:
        return self.psi[0]

    @property
    def terminal(self) -> np.ndarray:
        return self.psi[-1]


def _system_matrix(family: ControlFamily, z: np.ndarray, u: np.ndarray) -> np.ndarray:
    """A = sum_i u_i Df_i(z) per member, shape (N, n, n)."""
    return np.einsum("krnm,r->knm", family.jacobians(z), u)


def _hermite_midpoint(family: ControlFamily, z0: np.ndarray, z1: np.ndarray, u, h, sphere):
    mid = 0.5 * (z0 + z1) + (h / 8.0) * (family.velocity(z0, u) - family.velocity(z1, u))
    if sphere:
        mid = mid / np.linalg.norm(mid, axis=-1, keepdims=True)
    return mid


def _covector_times(psi: np.ndarray, A: np.ndarray) -> np.ndarray:
    return np.einsum("kn,knm->km", psi, A)


def adjoint_pass(
    family: ControlFamily,
    sched: ControlSchedule,
    traj: TrajectoryBundle,
    targets: np.ndarray,
    pmap: OutputMap,
) -> AdjointBundle:
    """
    Backward RK4 for the adjoint on the trajectory's substep grid.

    The state at substep midpoints is taken from the cubic Hermite
    interpolant of the stored nodes.

    Raises:
        DimensionMismatchError: if the target count differs from the ensemble size
    """
    targets = check_targets(pmap, targets, traj.n_members)
    M = traj.substeps
    h = sched.dt / M
    nodes = traj.substep_states
    total = nodes.shape[0] - 1
    sphere = family.manifold.is_sphere

    psi_nodes = np.empty_like(nodes)
    psi = -terminal_covector(pmap, nodes[-1], targets)
    psi_nodes[-1] = psi
    for q in range(total - 1, -1, -1):
        u = sched.values[q // M]
        z0, z1 = nodes[q], nodes[q + 1]
        A1 = _system_matrix(family, z1, u)
        Am = _system_matrix(family, _hermite_midpoint(family, z0, z1, u, h, sphere), u)
        A0 = _system_matrix(family, z0, u)
        k1 = -_covector_times(psi, A1)
        k2 = -_covector_times(psi - 0.5 * h * k1, Am)
        k3 = -_covector_times(psi - 0.5 * h * k2, Am)
        k4 = -_covector_times(psi - h * k3, A0)
        psi = psi - (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        psi_nodes[q] = psi
    return AdjointBundle(psi=psi_nodes[::M], substep_psi=psi_nodes)


def switching_functions(
    family: ControlFamily, states: np.ndarray, psi: np.ndarray
) -> np.ndarray:
    """F_i = sum_k psi_k f_i(z_k) at every node, shape (T, r)."""
    values = family.values(states)
    return np.einsum("tkn,tkrn->tr", psi, values)
