"""
Laplace series: L2 projection onto spherical harmonics of bounded degree.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional, Tuple

import numpy as np
from numpy.polynomial import legendre
from scipy import linalg

from ..geometry.manifold import CompactBox
from ..geometry.polynomial import SolidHarmonic, solid_harmonic_basis
from ..schemas import TruncationReport
from ..utils.error_handler import QuadratureError

logger = logging.getLogger(__name__)


@lru_cache(maxsize=16)
def _basis(max_degree: int) -> Tuple[SolidHarmonic, ...]:
    return tuple(solid_harmonic_basis(max_degree))


def sphere_quadrature(n_theta: int, n_phi: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Legendre in cos(theta) times uniform azimuth.

    Exact for polynomials of degree <= min(2 n_theta - 1, n_phi - 1).
    Returns unit vectors (M, 3) and weights (M,) summing to 4 pi.
    """
    t, wt = legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    tt, pp = np.meshgrid(t, phi, indexing="ij")
    s = np.sqrt(1.0 - tt**2)
    points = np.stack([s * np.cos(pp), s * np.sin(pp), tt], axis=-1).reshape(-1, 3)
    weights = np.repeat(wt * (2 * np.pi / n_phi), n_phi)
    return points, weights


@dataclass(frozen=True, eq=False)
class LaplaceSeries:
    """Coefficients over the real solid-harmonic basis of degree <= order."""

    order: int
    coefficients: np.ndarray

    @property
    def basis(self) -> Tuple[SolidHarmonic, ...]:
        return _basis(self.order)

    def coefficient(self, degree: int, order: int, part: str = "cos") -> float:
        for h, c in zip(self.basis, self.coefficients):
            if (h.degree, h.order, h.part) == (degree, order, part):
                return float(c)
        return 0.0

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape[:-1])
        for h, c in zip(self.basis, self.coefficients):
            if c != 0.0:
                total = total + c * h.harmonic(x)
        return total

    def spherical_gradient(self, x: np.ndarray) -> np.ndarray:
        """Tangential gradient of the partial sum at unit vectors (..., 3)."""
        x = np.asarray(x, dtype=float)
        grad = np.zeros(x.shape)
        for h, c in zip(self.basis, self.coefficients):
            if c != 0.0:
                grad = grad + c * h.harmonic.poly.grad_at(x)
        return grad - np.sum(grad * x, axis=-1, keepdims=True) * x


def laplace_project(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    points: Optional[Tuple[int, int]] = None,
) -> LaplaceSeries:
    """
    L2 projection of f onto harmonics of degree <= n.

    Args:
        f: Scalar function on unit vectors (..., 3)
        n: Maximal degree
        points: (Gauss-Legendre nodes, azimuth points); default (n + 2, 2n + 4)

    Raises:
        QuadratureError: if the rule is not exact to degree 2n
    """
    if n < 0:
        raise ValueError("degree must be non-negative")
    n_theta, n_phi = points or (n + 2, 2 * n + 4)
    if 2 * n_theta - 1 < 2 * n or n_phi - 1 < 2 * n:
        raise QuadratureError(
            f"sphere rule ({n_theta}, {n_phi}) is not exact to degree {2 * n}", degree=n
        )
    nodes, weights = sphere_quadrature(n_theta, n_phi)
    basis = _basis(n)
    B = np.stack([h.harmonic(nodes) for h in basis], axis=-1)
    values = np.asarray(f(nodes), dtype=float)
    gram = B.T @ (weights[:, None] * B)
    rhs = B.T @ (weights * values)
    coeffs = linalg.solve(gram, rhs, assume_a="pos")
    logger.debug(f"Laplace projection n={n} with {nodes.shape[0]} nodes")
    return LaplaceSeries(n, coeffs)


def laplace_report(series: LaplaceSeries, f, resolution: int = 65) -> TruncationReport:
    """Sup error and sup of the spherical gradient of the partial sum over S."""
    K = CompactBox.full_sphere(resolution)
    grid = K.grid()
    approx = series(grid)
    sup_error = float(np.max(np.abs(approx - np.asarray(f(grid), dtype=float))))
    deriv_sup = float(np.max(np.linalg.norm(series.spherical_gradient(grid), axis=-1)))
    return TruncationReport(
        basis="laplace",
        order=series.order,
        sup_error=sup_error,
        deriv_sup=deriv_sup,
        ell=float(np.max(np.abs(approx))) + deriv_sup,
        grid=list(K.resolution),
    )
