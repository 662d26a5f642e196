"""
Structural properties of ensemble flows: order on the line, cyclic order on
the circle, and the area factor of sphere flow maps.
"""

import numpy as np

from ..core.constants import FD_STEP
from ..fields.families import ControlFamily
from ..geometry.manifold import TWO_PI
from ..geometry.sphere import tangent_frame, unit_coords
from .ensemble import Ensemble
from .integrator import flow_ensemble
from .schedule import ControlSchedule


def _scalar_states(states: np.ndarray) -> np.ndarray:
    states = np.asarray(states, dtype=float)
    if states.ndim == 3:
        if states.shape[-1] != 1:
            raise ValueError("order predicates need one-dimensional states")
        states = states[..., 0]
    return states


def order_preserved(states: np.ndarray) -> bool:
    """Members keep their initial (strict) order at every time. states: (T, N[, 1])."""
    states = _scalar_states(states)
    perm = np.argsort(states[0], kind="stable")
    return bool(np.all(np.diff(states[:, perm], axis=1) > 0))


def cyclic_order_preserved(states: np.ndarray) -> bool:
    """
    Members keep their initial cyclic order on the circle at every time.

    Angles may be lifted; consecutive gaps (mod 2 pi) in initial cyclic order
    must stay positive and wind exactly once.
    """
    states = np.mod(_scalar_states(states), TWO_PI)
    if states.shape[1] < 3:
        return True
    perm = np.argsort(states[0], kind="stable")
    ordered = states[:, perm]
    closed = np.concatenate([ordered, ordered[:, :1]], axis=1)
    gaps = np.mod(np.diff(closed, axis=1), TWO_PI)
    winds_once = np.abs(gaps.sum(axis=1) - TWO_PI) < 1e-9
    return bool(np.all(gaps > 0) and np.all(winds_once))


def flow_map_area_factor(
    family: ControlFamily,
    sched: ControlSchedule,
    x: np.ndarray,
    eps: float = 1e3 * FD_STEP,
    substeps=None,
) -> float:
    """
    Determinant of the flow map's tangent Jacobian at x on the sphere.

    Central differences over an orthonormal tangent frame (e1, e2) with
    e1 x e2 = x; the image vectors are paired with the image normal.
    """
    xs = unit_coords(x)
    frame = tangent_frame(xs)
    probes = [xs]
    for e in frame:
        for sign in (1.0, -1.0):
            p = xs + sign * eps * e
            probes.append(p / np.linalg.norm(p))
    ensemble = Ensemble(family.manifold, np.stack(probes))
    terminal = flow_ensemble(family, sched, ensemble, substeps=substeps).terminal
    d1 = (terminal[1] - terminal[2]) / (2 * eps)
    d2 = (terminal[3] - terminal[4]) / (2 * eps)
    return float(np.dot(np.cross(d1, d2), terminal[0]))
