"""
The named control-affine systems.

A family fixes a state manifold and a tuple of generator fields f_1..f_r; the
dynamics are dz/dt = sum_i u_i f_i(z).
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Tuple

import numpy as np
import sympy as sp

from ..geometry.manifold import ManifoldSpec, Point, TangentVector, coords_of
from ..geometry.polynomial import (
    GENERATORS,
    X1,
    X3,
    Polynomial3,
    default_harmonic_basis,
)
from ..utils.error_handler import DimensionMismatchError, ScenarioConfigError
from .symbolic import (
    SymbolicField,
    compile_exprs,
    coordinate_field,
    coordinate_symbols,
    evaluate_exprs,
    gradient_extension,
    hamiltonian_extension,
)

logger = logging.getLogger(__name__)


class FamilyKind(str, Enum):
    """Supported generator families."""

    GH = "gh"
    TORUS1 = "torus1"
    TORUSD = "torusd"
    SPHERE_SYMP = "sphere-symp"
    SPHERE_FULL = "sphere-full"
    PRODUCT_GH = "product-gh"


# linear and quadratic harmonics whose spherical gradients complete the sphere system
SPHERE_GRADIENT_HARMONICS = {
    "grad_l": Polynomial3.from_expr(X3),
    "grad_q": Polynomial3.from_expr(X1 * X3),
}


def _gh_generators(coords: Tuple[sp.Symbol, ...]) -> List[SymbolicField]:
    gamma = sum(c**2 for c in coords) / 2
    weight = sp.exp(-gamma)
    n = len(coords)
    fs = [coordinate_field(coords, i, weight, label=f"f{i + 1}") for i in range(n)]
    gs = [coordinate_field(coords, i, 1, label=f"g{i + 1}") for i in range(n)]
    return fs + gs


def _torus1_generators(coords: Tuple[sp.Symbol, ...]) -> List[SymbolicField]:
    (phi,) = coords
    return [
        coordinate_field(coords, 0, 1, label="d"),
        coordinate_field(coords, 0, sp.sin(phi), label="sin"),
        coordinate_field(coords, 0, sp.sin(2 * phi), label="sin2"),
    ]


def _torusd_generators(coords: Tuple[sp.Symbol, ...]) -> List[SymbolicField]:
    d = len(coords)
    coupling = sum(sp.sin(c) for c in coords)
    f0 = [coordinate_field(coords, i, 1, label=f"f0_{i + 1}") for i in range(d)]
    f1 = [coordinate_field(coords, i, sp.sin(coords[i]), label=f"f1_{i + 1}") for i in range(d)]
    f2 = [
        coordinate_field(coords, i, sp.sin(2 * coords[i]), label=f"f2_{i + 1}")
        for i in range(d)
    ]
    g = [coordinate_field(coords, i, coupling, label=f"g_{i + 1}") for i in range(d)]
    return f0 + f1 + f2 + g


def _sphere_generators(full: bool) -> List[SymbolicField]:
    fields = [
        hamiltonian_extension(h.poly, label=f"ham_{name}")
        for name, h in default_harmonic_basis().items()
    ]
    if full:
        fields += [
            gradient_extension(F, label=name) for name, F in SPHERE_GRADIENT_HARMONICS.items()
        ]
    return fields


@dataclass(frozen=True)
class ControlFamily:
    """
    One of the named systems.

    Attributes:
        kind: Which system
        d: Dimension of the (first) state factor
        s: Dimension of the label factor for the product system
        nu: Base point of the label factor (product system only)
    """

    kind: FamilyKind
    d: int = 1
    s: int = 0
    nu: Tuple[float, ...] = ()
    _cache: Dict[Any, Any] = field(default_factory=dict, compare=False, repr=False, hash=False)

    def __post_init__(self):
        if self.d < 1:
            raise DimensionMismatchError("family dimension must be positive", d=self.d)
        if self.kind == FamilyKind.PRODUCT_GH:
            if self.s < 1:
                raise DimensionMismatchError("product family needs a label dimension", s=self.s)
            nu = tuple(float(v) for v in (self.nu or [0.0] * self.s))
            if len(nu) != self.s:
                raise DimensionMismatchError("base point nu must have s entries", s=self.s)
            object.__setattr__(self, "nu", nu)
        if self.kind == FamilyKind.TORUS1 and self.d != 1:
            raise DimensionMismatchError("the circle system is one-dimensional", d=self.d)
        if self.kind in (FamilyKind.SPHERE_SYMP, FamilyKind.SPHERE_FULL):
            object.__setattr__(self, "d", 2)

    @classmethod
    def gh(cls, d: int) -> "ControlFamily":
        return cls(FamilyKind.GH, d)

    @classmethod
    def torus1(cls) -> "ControlFamily":
        return cls(FamilyKind.TORUS1, 1)

    @classmethod
    def torus(cls, d: int) -> "ControlFamily":
        return cls.torus1() if d == 1 else cls(FamilyKind.TORUSD, d)

    @classmethod
    def sphere_symp(cls) -> "ControlFamily":
        return cls(FamilyKind.SPHERE_SYMP, 2)

    @classmethod
    def sphere_full(cls) -> "ControlFamily":
        return cls(FamilyKind.SPHERE_FULL, 2)

    @classmethod
    def product_gh(cls, d: int, s: int, nu=None) -> "ControlFamily":
        return cls(FamilyKind.PRODUCT_GH, d, s, tuple(nu) if nu is not None else ())

    @classmethod
    def from_id(cls, family_id: str) -> "ControlFamily":
        """
        Parse "gh:d", "torus:1", "torus:d", "sphere:symp", "sphere:full"
        or "product-gh:d,s".
        """
        try:
            name, _, arg = family_id.strip().partition(":")
            if name == "gh":
                return cls.gh(int(arg))
            if name == "torus":
                return cls.torus(int(arg))
            if name == "sphere" and arg == "symp":
                return cls.sphere_symp()
            if name == "sphere" and arg == "full":
                return cls.sphere_full()
            if name == "product-gh":
                d, s = (int(p) for p in arg.split(","))
                return cls.product_gh(d, s)
        except ValueError as e:
            raise ScenarioConfigError(f"malformed family id '{family_id}'") from e
        raise ScenarioConfigError(f"unknown family id '{family_id}'")

    @property
    def family_id(self) -> str:
        if self.kind == FamilyKind.GH:
            return f"gh:{self.d}"
        if self.kind in (FamilyKind.TORUS1, FamilyKind.TORUSD):
            return f"torus:{self.d}"
        if self.kind == FamilyKind.SPHERE_SYMP:
            return "sphere:symp"
        if self.kind == FamilyKind.SPHERE_FULL:
            return "sphere:full"
        return f"product-gh:{self.d},{self.s}"

    @property
    def manifold(self) -> ManifoldSpec:
        if self.kind == FamilyKind.GH:
            return ManifoldSpec.euclidean(self.d)
        if self.kind in (FamilyKind.TORUS1, FamilyKind.TORUSD):
            return ManifoldSpec.torus(self.d)
        if self.kind == FamilyKind.PRODUCT_GH:
            return ManifoldSpec.product(self.d, self.s)
        return ManifoldSpec.sphere2()

    @property
    def coords(self) -> Tuple[sp.Symbol, ...]:
        if "coords" not in self._cache:
            if self.kind in (FamilyKind.SPHERE_SYMP, FamilyKind.SPHERE_FULL):
                coords = GENERATORS
            elif self.kind in (FamilyKind.TORUS1, FamilyKind.TORUSD):
                coords = coordinate_symbols("phi", self.d)
            else:
                coords = coordinate_symbols("z", self.manifold.ambient_dim)
            self._cache["coords"] = coords
        return self._cache["coords"]

    @property
    def generators(self) -> Tuple[SymbolicField, ...]:
        if "generators" not in self._cache:
            coords = self.coords
            if self.kind in (FamilyKind.GH, FamilyKind.PRODUCT_GH):
                gens = _gh_generators(coords)
            elif self.kind == FamilyKind.TORUS1:
                gens = _torus1_generators(coords)
            elif self.kind == FamilyKind.TORUSD:
                gens = _torusd_generators(coords)
            else:
                gens = _sphere_generators(full=self.kind == FamilyKind.SPHERE_FULL)
            self._cache["generators"] = tuple(gens)
            logger.debug(f"Built {len(gens)} generators for {self.family_id}")
        return self._cache["generators"]

    @property
    def r(self) -> int:
        """Number of controls."""
        return len(self.generators)

    @property
    def labels(self) -> List[str]:
        return [g.label for g in self.generators]

    def _stacked(self, key: str) -> Callable:
        """One compiled function returning every generator's values or Jacobian entries."""
        if key not in self._cache:
            if key == "values":
                exprs = [c for g in self.generators for c in g.components]
            else:
                exprs = [e for g in self.generators for e in g.jacobian_expr]
            self._cache[key] = compile_exprs(self.coords, exprs)
        return self._cache[key]

    def prepare(self) -> None:
        """Build generators and compiled evaluators before threads share the family."""
        self._stacked("values")
        self._stacked("jacobians")

    def _points(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != len(self.coords):
            raise DimensionMismatchError(
                f"expected {len(self.coords)} coordinates, got {z.shape[-1]}",
                family=self.family_id,
            )
        return z

    def values(self, z: np.ndarray) -> np.ndarray:
        """All generator values at points (..., n) -> (..., r, n)."""
        z = self._points(z)
        n = z.shape[-1]
        flat = evaluate_exprs(self._stacked("values"), z, self.r * n)
        return flat.reshape(z.shape[:-1] + (self.r, n))

    def jacobians(self, z: np.ndarray) -> np.ndarray:
        """All generator Jacobians at points (..., n) -> (..., r, n, n)."""
        z = self._points(z)
        n = z.shape[-1]
        flat = evaluate_exprs(self._stacked("jacobians"), z, self.r * n * n)
        return flat.reshape(z.shape[:-1] + (self.r, n, n))

    def velocity(self, z: np.ndarray, u: np.ndarray) -> np.ndarray:
        """sum_i u_i f_i(z) for one control vector u of length r."""
        return np.einsum("...rn,r->...n", self.values(z), np.asarray(u, dtype=float))

    def check_index(self, i: int) -> None:
        if not 0 <= i < self.r:
            raise DimensionMismatchError(
                f"generator index {i} out of range 0..{self.r - 1}", family=self.family_id
            )


def eval_generator(family: ControlFamily, i: int, x) -> TangentVector:
    """Value of generator i at a point of the family's manifold."""
    family.check_index(i)
    coords = coords_of(x, family.manifold)
    point = x if isinstance(x, Point) else Point(family.manifold, coords)
    value = family.generators[i].value(point.coords)
    return TangentVector(point, value)
