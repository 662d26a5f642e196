"""
Hermite expansions on R^d (probabilists' convention, weight e^{-|z|^2/2}).

A target Y is expanded as Y(z) ~ sum_m c_m He_m(z) e^{-gamma(z)} with
gamma(z) = |z|^2 / 2 and He_m the product of one-dimensional polynomials.
"""

import logging
import math
import string
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import hermite_e, legendre
from scipy.special import factorial

from ..core.config import get_settings
from ..geometry.manifold import CompactBox
from ..schemas import TruncationReport
from ..utils.error_handler import DimensionMismatchError, QuadratureError

logger = logging.getLogger(__name__)

MAX_DIMENSION = 3

ScalarFunction = Callable[[np.ndarray], np.ndarray]


def gamma(z: np.ndarray) -> np.ndarray:
    """gamma(z) = <z, z> / 2 over the last axis."""
    return 0.5 * np.sum(np.asarray(z, dtype=float) ** 2, axis=-1)


def _contract(coeffs: np.ndarray, vanders: Sequence[np.ndarray]) -> np.ndarray:
    """sum_m coeffs[m] prod_i vanders[i][..., m_i]."""
    letters = string.ascii_lowercase[: len(vanders)]
    spec = ",".join(f"...{c}" for c in letters) + f",{letters}->..."
    return np.einsum(spec, *vanders, coeffs)


def multi_indices(d: int, n: int) -> Iterator[Tuple[int, ...]]:
    """Multi-indices m in N^d with |m| <= n."""
    for m in np.ndindex(*([n + 1] * d)):
        if sum(m) <= n:
            yield tuple(int(k) for k in m)


@dataclass(frozen=True, eq=False)
class HermiteSeries:
    """
    Truncated Hermite series.

    Attributes:
        d: Dimension of the domain
        order: Truncation order n
        coefficients: Dense array of shape (n + 1,) * d; entries with |m| > n are zero
    """

    d: int
    order: int
    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coefficients, dtype=float)
        if coeffs.shape != (self.order + 1,) * self.d:
            raise DimensionMismatchError(
                "coefficient array does not match dimension and order",
                shape=coeffs.shape,
            )
        total = np.sum(np.indices(coeffs.shape), axis=0)
        coeffs[total > self.order] = 0.0
        coeffs.setflags(write=False)
        object.__setattr__(self, "coefficients", coeffs)

    def coefficient(self, m: Tuple[int, ...]) -> float:
        if len(m) != self.d:
            raise DimensionMismatchError("multi-index length differs from dimension")
        if any(k > self.order for k in m) or sum(m) > self.order:
            return 0.0
        return float(self.coefficients[tuple(m)])

    def _vanders(self, z: np.ndarray) -> list:
        z = np.asarray(z, dtype=float)
        if z.shape[-1] != self.d:
            raise DimensionMismatchError(f"expected points with {self.d} coordinates")
        return [hermite_e.hermevander(z[..., i], self.order) for i in range(self.d)]

    def polynomial(self, z: np.ndarray) -> np.ndarray:
        """S_n(z) = sum_m c_m He_m(z)."""
        return _contract(self.coefficients, self._vanders(z))

    def weighted(self, z: np.ndarray) -> np.ndarray:
        """S_n(z) e^{-gamma(z)}, the approximation of Y."""
        return self.polynomial(z) * np.exp(-gamma(z))

    __call__ = weighted

    def derivative_series(self, axis: int) -> "HermiteSeries":
        """
        Series of d/dz_axis (S_n e^{-gamma}).

        Uses d/dz (He_m e^{-z^2/2}) = -He_{m+1} e^{-z^2/2}, so the result has
        order n + 1 and coefficients shifted by one along ``axis``.
        """
        if not 0 <= axis < self.d:
            raise DimensionMismatchError(f"axis {axis} out of range for dimension {self.d}")
        shifted = np.zeros((self.order + 2,) * self.d)
        target = [slice(0, self.order + 1)] * self.d
        target[axis] = slice(1, self.order + 2)
        shifted[tuple(target)] = -self.coefficients
        return HermiteSeries(self.d, self.order + 1, shifted)

    def gradient(self, z: np.ndarray) -> np.ndarray:
        """Gradient of S_n e^{-gamma} at points (..., d) -> (..., d)."""
        return np.stack([self.derivative_series(i).weighted(z) for i in range(self.d)], axis=-1)

    def l2_mass(self) -> float:
        """sum_m c_m^2 m! (2 pi)^{d/2}, the weighted L2 norm of S_n."""
        total = 0.0
        for m in multi_indices(self.d, self.order):
            total += self.coefficients[m] ** 2 * math.prod(math.factorial(k) for k in m)
        return total * (2 * np.pi) ** (self.d / 2)


def _product_rule(nodes: np.ndarray, weights: np.ndarray, d: int):
    mesh = np.meshgrid(*([nodes] * d), indexing="ij")
    points = np.stack(mesh, axis=-1)
    w = weights
    for _ in range(d - 1):
        w = np.multiply.outer(w, weights)
    return points, w


def hermite_coeffs(
    Y: ScalarFunction,
    n: int,
    d: int = 1,
    nodes: Optional[int] = None,
    support: Optional[Sequence[Tuple[float, float]]] = None,
) -> HermiteSeries:
    """
    Coefficients c_m = (int Y He_m dz) / ((2 pi)^{d/2} m!) for |m| <= n.

    Without ``support`` the integral uses Gauss-Hermite (weight e^{-z^2/2})
    product quadrature applied to Y e^{gamma}. With a ``support`` box the
    target is taken to vanish outside it and Gauss-Legendre product
    quadrature on the box is used.

    Args:
        Y: Scalar function evaluated on arrays of shape (..., d)
        n: Truncation order
        d: Dimension, at most 3
        nodes: Quadrature nodes per axis, default 2n + hermite_extra_nodes
        support: Optional box ((lo, hi),) * d containing the support of Y

    Raises:
        QuadratureError: if fewer than 2n + 2 nodes per axis are requested
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    if not 1 <= d <= MAX_DIMENSION:
        raise DimensionMismatchError(f"Hermite expansions support 1 <= d <= {MAX_DIMENSION}", d=d)
    nodes = nodes if nodes is not None else 2 * n + get_settings().hermite_extra_nodes
    if nodes < 2 * n + 2:
        raise QuadratureError(
            f"{nodes} nodes per axis are too few for order {n}", required=2 * n + 2
        )

    if support is None:
        x, w = hermite_e.hermegauss(nodes)
        points, weights = _product_rule(x, w, d)
        integrand = np.asarray(Y(points), dtype=float) * np.exp(gamma(points)) * weights
        vanders = [hermite_e.hermevander(x, n)] * d
    else:
        if len(support) != d:
            raise DimensionMismatchError("support box needs one interval per axis")
        t, w = legendre.leggauss(nodes)
        axes, axis_weights = [], []
        for lo, hi in support:
            half = 0.5 * (hi - lo)
            axes.append(half * t + 0.5 * (hi + lo))
            axis_weights.append(half * w)
        mesh = np.meshgrid(*axes, indexing="ij")
        points = np.stack(mesh, axis=-1)
        weights = axis_weights[0]
        for aw in axis_weights[1:]:
            weights = np.multiply.outer(weights, aw)
        integrand = np.asarray(Y(points), dtype=float) * weights
        vanders = [hermite_e.hermevander(a, n) for a in axes]

    coeffs = integrand
    for vander in vanders:
        coeffs = np.tensordot(coeffs, vander, axes=([0], [0]))

    factorials = np.prod(factorial(np.indices((n + 1,) * d)), axis=0)
    coeffs = coeffs / ((2 * np.pi) ** (d / 2) * factorials)
    logger.debug(f"Hermite coefficients d={d} n={n} with {nodes} nodes per axis")
    return HermiteSeries(d, n, coeffs)


def hermite_norms(max_order: int, nodes: Optional[int] = None) -> np.ndarray:
    """int He_m^2 e^{-z^2/2} dz / sqrt(2 pi) for m = 0..max_order (equals m!)."""
    nodes = nodes or 2 * max_order + get_settings().hermite_extra_nodes
    x, w = hermite_e.hermegauss(nodes)
    vander = hermite_e.hermevander(x, max_order)
    return (w[:, None] * vander**2).sum(axis=0) / np.sqrt(2 * np.pi)


def truncation_report(series: HermiteSeries, Y: ScalarFunction, K: CompactBox) -> TruncationReport:
    """
    Grid sup of |S_n e^{-gamma} - Y| over K and of every first partial of
    S_n e^{-gamma}; ell is the observed ||.||_{1,K} bound of the partial sum.
    """
    grid = K.grid()
    approx = series.weighted(grid)
    sup_error = float(np.max(np.abs(approx - np.asarray(Y(grid), dtype=float))))
    deriv_sup = float(np.max(np.abs(series.gradient(grid))))
    ell = float(np.max(np.abs(approx))) + deriv_sup
    return TruncationReport(
        basis="hermite",
        order=series.order,
        sup_error=sup_error,
        deriv_sup=deriv_sup,
        ell=ell,
        grid=list(K.resolution),
    )
