"""
Output maps p: coordinate projections (or the identity) of the state.
"""

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from ..geometry.manifold import TWO_PI, ManifoldSpec
from ..utils.error_handler import DimensionMismatchError

PmapSpec = Union[str, Sequence[int], None]


@dataclass(frozen=True)
class OutputMap:
    """
    Coordinate projection selecting ``indices`` of the state.

    Attributes:
        indices: Selected state coordinates
        periodic: Whether the selected coordinates are angles (wrapped differences)
    """

    indices: tuple
    periodic: bool = False

    @classmethod
    def build(cls, manifold: ManifoldSpec, spec: PmapSpec = "identity") -> "OutputMap":
        n = manifold.ambient_dim
        if spec is None or spec == "identity":
            indices = tuple(range(n))
        elif isinstance(spec, str):
            raise DimensionMismatchError(f"unknown output map '{spec}'")
        else:
            indices = tuple(int(i) for i in spec)
        if not indices or any(not 0 <= i < n for i in indices):
            raise DimensionMismatchError(
                "projection indices out of range", indices=list(indices), dim=n
            )
        return cls(indices, periodic=manifold.is_torus)

    @property
    def out_dim(self) -> int:
        return len(self.indices)

    def __call__(self, z: np.ndarray) -> np.ndarray:
        return np.asarray(z, dtype=float)[..., list(self.indices)]

    def difference(self, z: np.ndarray, targets: np.ndarray) -> np.ndarray:
        """p(z) - c, wrapped to (-pi, pi] for angles."""
        diff = self(z) - np.asarray(targets, dtype=float)
        if self.periodic:
            diff = np.mod(diff + np.pi, TWO_PI) - np.pi
        return diff

    def pullback(self, covector: np.ndarray, state_dim: int) -> np.ndarray:
        """w^T Dp: embed output covectors (..., s) into state covectors (..., n)."""
        covector = np.asarray(covector, dtype=float)
        full = np.zeros(covector.shape[:-1] + (state_dim,))
        full[..., list(self.indices)] = covector
        return full


def check_targets(pmap: OutputMap, targets: np.ndarray, n_members: int) -> np.ndarray:
    targets = np.asarray(targets, dtype=float)
    if targets.ndim == 1:
        targets = targets.reshape(-1, 1) if pmap.out_dim == 1 else targets[None, :]
    if targets.shape[0] != n_members:
        raise DimensionMismatchError(
            "one target per ensemble member", targets=targets.shape[0], members=n_members
        )
    if targets.shape[1] != pmap.out_dim:
        raise DimensionMismatchError(
            "target dimension differs from the output map", expected=pmap.out_dim
        )
    return targets


def terminal_covector(
    pmap: OutputMap, terminal: np.ndarray, targets: np.ndarray, state_dim: Optional[int] = None
) -> np.ndarray:
    """(p(z) - c)^T Dp(z) for every member, shape (N, n)."""
    state_dim = state_dim or terminal.shape[-1]
    return pmap.pullback(pmap.difference(terminal, targets), state_dim)
