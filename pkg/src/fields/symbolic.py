"""
Vector fields with symbolic components.

Components are sympy expressions over coordinate symbols; Jacobians and Lie
brackets are exact symbolic derivatives, evaluation goes through
``sympy.lambdify`` onto numpy.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Sequence, Tuple

import numpy as np
import sympy as sp

from ..geometry.polynomial import GENERATORS, Polynomial3
from ..utils.error_handler import DimensionMismatchError


def coordinate_symbols(prefix: str, count: int) -> Tuple[sp.Symbol, ...]:
    """Real symbols prefix1..prefixN."""
    return tuple(sp.symbols(f"{prefix}1:{count + 1}", real=True))


def compile_exprs(coords: Sequence[sp.Symbol], exprs: Sequence[sp.Expr]) -> Callable:
    return sp.lambdify(tuple(coords), list(exprs), modules="numpy", cse=True)


def evaluate_exprs(fn: Callable, z: np.ndarray, count: int) -> np.ndarray:
    outputs = fn(*np.moveaxis(z, -1, 0))
    shape = z.shape[:-1]
    return np.stack(
        [np.broadcast_to(np.asarray(out, dtype=float), shape) for out in outputs[:count]],
        axis=-1,
    )


@dataclass(frozen=True, eq=False)
class SymbolicField:
    """
    Vector field sum_j components[j] d/d coords[j].

    Attributes:
        coords: Coordinate symbols of the chart (or ambient space)
        components: One sympy expression per coordinate
        label: Human-readable name used in reports
    """

    coords: Tuple[sp.Symbol, ...]
    components: Tuple[sp.Expr, ...]
    label: str = ""

    def __post_init__(self):
        if len(self.coords) != len(self.components):
            raise DimensionMismatchError(
                "field needs one component per coordinate",
                coords=len(self.coords),
                components=len(self.components),
            )
        object.__setattr__(self, "components", tuple(sp.sympify(c) for c in self.components))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @cached_property
    def jacobian_expr(self) -> sp.Matrix:
        """Matrix of partial derivatives d components[i] / d coords[j]."""
        return sp.Matrix(self.components).jacobian(sp.Matrix(self.coords))

    def bracket(self, other: "SymbolicField") -> "SymbolicField":
        """[X, Y] = DY X - DX Y."""
        if tuple(self.coords) != tuple(other.coords):
            raise DimensionMismatchError(
                "fields live on different coordinate systems",
                left=self.label,
                right=other.label,
            )
        x = sp.Matrix(self.components)
        y = sp.Matrix(other.components)
        result = other.jacobian_expr * x - self.jacobian_expr * y
        return SymbolicField(
            self.coords,
            tuple(sp.expand(c) for c in result),
            label=f"[{self.label},{other.label}]",
        )

    @cached_property
    def _value_fn(self) -> Callable:
        return compile_exprs(self.coords, self.components)

    @cached_property
    def _jacobian_fn(self) -> Callable:
        return compile_exprs(self.coords, list(self.jacobian_expr))

    def value(self, z: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (..., dim)."""
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"expected {self.dim} coordinates, got {z.shape[-1]}", field=self.label
            )
        return evaluate_exprs(self._value_fn, z, self.dim)

    def jacobian(self, z: np.ndarray) -> np.ndarray:
        """Jacobian at points of shape (..., dim) -> (..., dim, dim)."""
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.dim:
            raise DimensionMismatchError(
                f"expected {self.dim} coordinates, got {z.shape[-1]}", field=self.label
            )
        flat = evaluate_exprs(self._jacobian_fn, z, self.dim * self.dim)
        return flat.reshape(z.shape[:-1] + (self.dim, self.dim))

    def __repr__(self) -> str:
        return f"SymbolicField({self.label or list(self.components)})"


def coordinate_field(
    coords: Tuple[sp.Symbol, ...], axis: int, coef: sp.Expr = 1, label: str = ""
) -> SymbolicField:
    """coef * d/d coords[axis]."""
    comps = [sp.Integer(0)] * len(coords)
    comps[axis] = sp.sympify(coef)
    return SymbolicField(coords, tuple(comps), label=label)


def hamiltonian_extension(phi: Polynomial3, label: str = "") -> SymbolicField:
    """Ambient field x x grad(phi) on R^3."""
    x = sp.Matrix(GENERATORS)
    grad = sp.Matrix([g.as_expr() for g in phi.gradient])
    return SymbolicField(GENERATORS, tuple(sp.expand(c) for c in x.cross(grad)), label=label)


def gradient_extension(F: Polynomial3, label: str = "") -> SymbolicField:
    """Ambient field grad F - <grad F, x> x, tangent along the sphere."""
    x = sp.Matrix(GENERATORS)
    grad = sp.Matrix([g.as_expr() for g in F.gradient])
    radial = (grad.T * x)[0, 0]
    return SymbolicField(GENERATORS, tuple(sp.expand(c) for c in grad - radial * x), label=label)


def ambient_gradient(F: Polynomial3, label: str = "") -> SymbolicField:
    """Plain gradient field of F on R^3."""
    return SymbolicField(GENERATORS, tuple(g.as_expr() for g in F.gradient), label=label)


def euler_field() -> SymbolicField:
    """E(x) = x."""
    return SymbolicField(GENERATORS, GENERATORS, label="E")
