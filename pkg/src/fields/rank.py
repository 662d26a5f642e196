"""
Evaluation-map rank test for bracket generation at an ensemble.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Optional

import numpy as np
from scipy import linalg

from ..core.config import get_settings
from ..schemas import RankReport
from .brackets import enumerate_words, field_for
from .families import ControlFamily

logger = logging.getLogger(__name__)


def _points_of(ensemble) -> np.ndarray:
    points = getattr(ensemble, "array", ensemble)
    return np.atleast_2d(np.asarray(points, dtype=float))


def evaluation_rank(
    family: ControlFamily,
    ensemble,
    depth: Optional[int] = None,
    rtol: Optional[float] = None,
    threads: Optional[int] = None,
) -> RankReport:
    """
    Rank of the matrix whose rows are (Y(x^1), ..., Y(x^N)) for every bracket
    word Y with at most ``depth`` leaves (default from settings).

    Full rank N * dim certifies bracket generation at the ensemble.
    """
    settings = get_settings()
    rtol = settings.rank_rtol if rtol is None else rtol
    depth = depth or settings.bracket_depth
    threads = threads or settings.threads
    points = _points_of(ensemble)
    words = enumerate_words(family.r, depth)

    # symbolic construction is sequential; numeric evaluation may fan out
    fields = [field_for(family, w) for w in words]

    def row(f) -> np.ndarray:
        return f.value(points).ravel()

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(row, fields))
    else:
        rows = [row(f) for f in fields]

    matrix = np.vstack(rows)
    sigma = linalg.svdvals(matrix)
    sigma_max = float(sigma[0]) if sigma.size else 0.0
    threshold = rtol * sigma_max
    rank = int(np.sum(sigma > threshold)) if sigma_max > 0 else 0
    expected = points.shape[0] * family.manifold.dim
    logger.debug(
        f"Evaluation rank {rank}/{expected} for {family.family_id} "
        f"at depth {depth} over {len(words)} words"
    )
    return RankReport(
        family=family.family_id,
        n_points=points.shape[0],
        depth=depth,
        n_words=len(words),
        rank=rank,
        expected_rank=expected,
        full_rank=rank >= expected,
        sigma_max=sigma_max,
        threshold=threshold,
    )
