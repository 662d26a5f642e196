"""
Manifold primitives: where ensemble states live.

Points are stored in ambient/chart coordinates: a box of R^d, angles on the
torus T^d (reduced to [0, 2pi)), unit vectors in R^3 for the 2-sphere, and
concatenated coordinates for the product R^d x R^s.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..core.constants import SPHERE_CONSTRUCT_TOL, TANGENCY_TOL
from ..utils.error_handler import ConstraintViolationError, DimensionMismatchError

TWO_PI = 2.0 * np.pi


class ManifoldKind(str, Enum):
    """Supported state spaces."""

    EUCLIDEAN = "euclidean"
    TORUS = "torus"
    SPHERE2 = "sphere2"
    PRODUCT = "product"


@dataclass(frozen=True)
class ManifoldSpec:
    """
    Description of a state manifold.

    Attributes:
        kind: One of the supported manifold kinds
        d: Dimension of the (first) factor; 2 for the sphere
        s: Dimension of the second Euclidean factor of a product, else 0
    """

    kind: ManifoldKind
    d: int
    s: int = 0

    def __post_init__(self):
        if self.d < 1:
            raise DimensionMismatchError("manifold dimension must be positive", d=self.d)
        if self.kind == ManifoldKind.PRODUCT and self.s < 1:
            raise DimensionMismatchError("product factor dimension must be positive", s=self.s)
        if self.kind == ManifoldKind.SPHERE2 and self.d != 2:
            raise DimensionMismatchError("the sphere is two-dimensional", d=self.d)

    @classmethod
    def euclidean(cls, d: int) -> "ManifoldSpec":
        return cls(ManifoldKind.EUCLIDEAN, d)

    @classmethod
    def torus(cls, d: int) -> "ManifoldSpec":
        return cls(ManifoldKind.TORUS, d)

    @classmethod
    def sphere2(cls) -> "ManifoldSpec":
        return cls(ManifoldKind.SPHERE2, 2)

    @classmethod
    def product(cls, d: int, s: int) -> "ManifoldSpec":
        return cls(ManifoldKind.PRODUCT, d, s)

    @property
    def ambient_dim(self) -> int:
        """Length of a coordinate vector."""
        if self.kind == ManifoldKind.SPHERE2:
            return 3
        return self.d + self.s

    @property
    def dim(self) -> int:
        """Intrinsic dimension."""
        if self.kind == ManifoldKind.SPHERE2:
            return 2
        return self.d + self.s

    @property
    def is_sphere(self) -> bool:
        return self.kind == ManifoldKind.SPHERE2

    @property
    def is_torus(self) -> bool:
        return self.kind == ManifoldKind.TORUS

    def validate(self, coords: np.ndarray) -> np.ndarray:
        """
        Check coordinates against the manifold constraint.

        Returns the stored form: torus angles reduced to [0, 2pi), everything
        else unchanged. Works on a single point or a stack of points.
        """
        coords = np.asarray(coords, dtype=float)
        if coords.shape[-1] != self.ambient_dim:
            raise DimensionMismatchError(
                f"expected {self.ambient_dim} coordinates, got {coords.shape[-1]}",
                manifold=self.kind.value,
            )
        if not np.all(np.isfinite(coords)):
            raise ConstraintViolationError("coordinates must be finite")
        if self.kind == ManifoldKind.TORUS:
            return np.mod(coords, TWO_PI)
        if self.kind == ManifoldKind.SPHERE2:
            radius = np.linalg.norm(coords, axis=-1)
            if np.any(np.abs(radius - 1.0) > SPHERE_CONSTRUCT_TOL):
                raise ConstraintViolationError(
                    "sphere point is not of unit norm",
                    max_deviation=float(np.max(np.abs(radius - 1.0))),
                )
        return coords

    def difference(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Coordinate difference a - b, wrapped to (-pi, pi] on the torus."""
        diff = np.asarray(a, dtype=float) - np.asarray(b, dtype=float)
        if self.kind == ManifoldKind.TORUS:
            diff = np.mod(diff + np.pi, TWO_PI) - np.pi
        return diff

    def distance(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Distance used for ensemble distinctness (chordal on the sphere)."""
        return np.linalg.norm(self.difference(a, b), axis=-1)

    def retract(self, coords: np.ndarray) -> np.ndarray:
        """Map integrator output back onto the manifold (sphere: radial projection)."""
        if self.kind == ManifoldKind.SPHERE2:
            return coords / np.linalg.norm(coords, axis=-1, keepdims=True)
        return coords


@dataclass(frozen=True, eq=False)
class Point:
    """A point of a manifold in stored coordinates."""

    manifold: ManifoldSpec
    coords: np.ndarray

    def __post_init__(self):
        coords = self.manifold.validate(np.array(self.coords, dtype=float))
        if coords.ndim != 1:
            raise DimensionMismatchError("a point has a one-dimensional coordinate vector")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)

    @classmethod
    def on_sphere(cls, coords: Sequence[float]) -> "Point":
        """Build a sphere point, projecting the input to unit norm first."""
        arr = np.asarray(coords, dtype=float)
        return cls(ManifoldSpec.sphere2(), arr / np.linalg.norm(arr))

    def __repr__(self) -> str:
        return f"<Point({self.manifold.kind.value}, {np.array2string(self.coords, precision=6)})>"


@dataclass(frozen=True, eq=False)
class TangentVector:
    """A tangent vector in ambient components at a base point."""

    base: Point
    components: np.ndarray

    def __post_init__(self):
        comps = np.array(self.components, dtype=float)
        if comps.shape != self.base.coords.shape:
            raise DimensionMismatchError("tangent vector and base point differ in length")
        if self.base.manifold.is_sphere:
            norm = np.linalg.norm(comps)
            normal = abs(float(np.dot(comps, self.base.coords)))
            # floor covers vectors that vanish up to rounding
            if normal > TANGENCY_TOL * norm + 1e-14:
                raise ConstraintViolationError(
                    "vector is not tangent to the sphere", normal_component=normal
                )
        comps.setflags(write=False)
        object.__setattr__(self, "components", comps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


Bounds = Tuple[Tuple[float, float], ...]


@dataclass(frozen=True)
class CompactBox:
    """
    Compact sampling region K for seminorms and truncation reports.

    For the sphere the two bounds are the polar angle theta and the azimuth
    phi; the grid is mapped to unit vectors.
    """

    manifold: ManifoldSpec
    bounds: Bounds
    resolution: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        axes = 2 if self.manifold.is_sphere else self.manifold.ambient_dim
        if len(self.bounds) != axes:
            raise DimensionMismatchError(f"expected {axes} bound pairs, got {len(self.bounds)}")
        resolution = self.resolution or tuple([65] * axes)
        if len(resolution) != axes:
            raise DimensionMismatchError("resolution must have one entry per axis")
        if any(n < 2 for n in resolution):
            raise ValueError("grid resolution must be at least 2 per axis")
        if any(not lo < hi for lo, hi in self.bounds):
            raise ValueError("compact box must be nonempty")
        object.__setattr__(self, "resolution", tuple(int(n) for n in resolution))

    @classmethod
    def cube(
        cls, manifold: ManifoldSpec, lo: float, hi: float, resolution: int = 65
    ) -> "CompactBox":
        axes = 2 if manifold.is_sphere else manifold.ambient_dim
        return cls(manifold, tuple([(lo, hi)] * axes), tuple([resolution] * axes))

    @classmethod
    def full_torus(cls, d: int, resolution: int = 257) -> "CompactBox":
        return cls(ManifoldSpec.torus(d), tuple([(0.0, 2 * np.pi)] * d), tuple([resolution] * d))

    @classmethod
    def full_sphere(cls, resolution: int = 65) -> "CompactBox":
        return cls(
            ManifoldSpec.sphere2(),
            ((0.0, np.pi), (0.0, 2 * np.pi)),
            (resolution, 2 * resolution),
        )

    def grid(self) -> np.ndarray:
        """Sample points of the box as an (M, ambient_dim) array."""
        axes = [np.linspace(lo, hi, n) for (lo, hi), n in zip(self.bounds, self.resolution)]
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = np.stack([m.ravel() for m in mesh], axis=-1)
        if self.manifold.is_sphere:
            theta, phi = flat[:, 0], flat[:, 1]
            return np.stack(
                [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)],
                axis=-1,
            )
        return flat


ArrayOrPoint = Union[Point, np.ndarray, Sequence[float]]


def coords_of(x: ArrayOrPoint, manifold: Optional[ManifoldSpec] = None) -> np.ndarray:
    """Coordinates of a Point or array-like, checked against an expected manifold."""
    if isinstance(x, Point):
        if manifold is not None and x.manifold != manifold:
            raise DimensionMismatchError(
                "point lives on a different manifold",
                expected=manifold.kind.value,
                got=x.manifold.kind.value,
            )
        return x.coords
    return np.asarray(x, dtype=float)
