"""
Ensembles: finite sets of pairwise-distinct points moved by one control.
"""

import logging
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np
from scipy.spatial.distance import pdist

from ..core.constants import DISTINCT_TOL
from ..geometry.manifold import ManifoldSpec, Point
from ..geometry.sphere import random_unit_vectors
from ..utils.error_handler import DimensionMismatchError, InvalidEnsembleError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class Ensemble:
    """
    N pairwise-distinct points of one manifold.

    Attributes:
        manifold: The state manifold
        array: Stored coordinates, shape (N, ambient_dim)
    """

    manifold: ManifoldSpec
    array: np.ndarray

    def __post_init__(self):
        arr = np.array(self.array, dtype=float)
        if arr.size == 0:
            raise InvalidEnsembleError("an ensemble needs at least one point")
        if arr.ndim != 2:
            raise DimensionMismatchError("ensemble coordinates must form an (N, dim) array")
        arr = self.manifold.validate(arr)
        if arr.shape[0] > 1:
            gaps = pdist(arr, metric=lambda a, b: float(self.manifold.distance(a, b)))
            closest = float(np.min(gaps))
            if closest < DISTINCT_TOL:
                raise InvalidEnsembleError(
                    "ensemble points must be pairwise distinct", min_distance=closest
                )
        arr.setflags(write=False)
        object.__setattr__(self, "array", arr)

    @classmethod
    def from_points(cls, points: Sequence[Point]) -> "Ensemble":
        if not points:
            raise InvalidEnsembleError("an ensemble needs at least one point")
        manifold = points[0].manifold
        if any(p.manifold != manifold for p in points):
            raise DimensionMismatchError("ensemble points live on different manifolds")
        return cls(manifold, np.stack([p.coords for p in points]))

    @classmethod
    def random(
        cls,
        manifold: ManifoldSpec,
        n: int,
        rng: np.random.Generator,
        low: float = -1.0,
        high: float = 1.0,
    ) -> "Ensemble":
        """Uniform sample from a coordinate box (uniform on the sphere)."""
        if n < 1:
            raise InvalidEnsembleError("an ensemble needs at least one point", n=n)
        if manifold.is_sphere:
            return cls(manifold, random_unit_vectors(rng, n))
        return cls(manifold, rng.uniform(low, high, size=(n, manifold.ambient_dim)))

    @property
    def N(self) -> int:
        return self.array.shape[0]

    @property
    def points(self) -> List[Point]:
        return [Point(self.manifold, row) for row in self.array]

    def permuted(self, perm: Sequence[int]) -> "Ensemble":
        return Ensemble(self.manifold, self.array[np.asarray(perm)])

    def __len__(self) -> int:
        return self.N
