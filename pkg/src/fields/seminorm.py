"""
Grid estimates of the seminorms ||X||_{r,K}.
"""

import logging

import numpy as np

from ..geometry.manifold import CompactBox

logger = logging.getLogger(__name__)


def seminorm(X, K: CompactBox, r: int = 0) -> float:
    """
    Sup of |X| over the sample grid of K, plus the sup of the Jacobian
    max-entry norm when r = 1.

    The value is a lower bound of the true sup that tightens with the grid
    resolution of K.
    """
    if r not in (0, 1):
        raise ValueError("seminorm order must be 0 or 1")
    grid = K.grid()
    if grid.shape[0] == 0:
        raise ValueError("compact box produced an empty grid")
    total = float(np.max(np.linalg.norm(X.value(grid), axis=-1)))
    if r == 1:
        total += float(np.max(np.abs(X.jacobian(grid))))
    logger.debug(f"Seminorm r={r} on grid {K.resolution}: {total:.6g}")
    return total
