"""
Real Fourier series on the torus T^d.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from ..core.config import get_settings
from ..geometry.manifold import TWO_PI, CompactBox
from ..schemas import TruncationReport
from ..utils.error_handler import DimensionMismatchError

logger = logging.getLogger(__name__)

MAX_DIMENSION = 3


def half_lattice(d: int, n: int) -> List[Tuple[int, ...]]:
    """Nonzero alpha in Z^d with |alpha|_1 <= n whose first nonzero entry is positive."""
    result = []
    for alpha in np.ndindex(*([2 * n + 1] * d)):
        a = tuple(int(k) - n for k in alpha)
        if 0 < sum(abs(k) for k in a) <= n:
            first = next(k for k in a if k != 0)
            if first > 0:
                result.append(a)
    return result


@dataclass(frozen=True, eq=False)
class FourierSeries:
    """
    Y(phi) ~ a0 + sum_alpha a_alpha cos(alpha . phi) + b_alpha sin(alpha . phi).

    Attributes:
        d: Torus dimension
        order: Maximal total degree |alpha|_1
        a0: Mean value
        alphas: Frequencies from the half lattice, shape (K, d)
        a: Cosine coefficients, shape (K,)
        b: Sine coefficients, shape (K,)
    """

    d: int
    order: int
    a0: float
    alphas: np.ndarray
    a: np.ndarray
    b: np.ndarray

    def coefficient(self, alpha: Tuple[int, ...], kind: str = "cos") -> float:
        if not any(alpha):
            return self.a0 if kind == "cos" else 0.0
        for idx, row in enumerate(self.alphas):
            if tuple(int(k) for k in row) == tuple(alpha):
                return float(self.a[idx] if kind == "cos" else self.b[idx])
        return 0.0

    def _phase(self, phi: np.ndarray) -> np.ndarray:
        phi = np.asarray(phi, dtype=float)
        if phi.shape[-1] != self.d:
            raise DimensionMismatchError(f"expected angles with {self.d} coordinates")
        return phi @ self.alphas.T

    def __call__(self, phi: np.ndarray) -> np.ndarray:
        phase = self._phase(phi)
        return self.a0 + np.cos(phase) @ self.a + np.sin(phase) @ self.b

    def gradient(self, phi: np.ndarray) -> np.ndarray:
        """Partial derivatives at angles (..., d) -> (..., d)."""
        phase = self._phase(phi)
        weights = -np.sin(phase) * self.a + np.cos(phase) * self.b
        return weights @ self.alphas


def fourier_project(
    Y: Callable[[np.ndarray], np.ndarray],
    n: int,
    d: int = 1,
    points: Optional[int] = None,
) -> FourierSeries:
    """
    Trapezoid-rule coefficients up to total degree n, computed with an FFT
    on a uniform grid of max(4n + 16, fourier_min_points) points per axis.
    """
    if n < 0:
        raise ValueError("order must be non-negative")
    if not 1 <= d <= MAX_DIMENSION:
        raise DimensionMismatchError(f"Fourier expansions support 1 <= d <= {MAX_DIMENSION}", d=d)
    m = points or max(4 * n + 16, get_settings().fourier_min_points)
    if m < 2 * n + 1:
        raise ValueError(f"{m} grid points cannot resolve order {n}")
    axis = TWO_PI * np.arange(m) / m
    grid = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1)
    values = np.asarray(Y(grid), dtype=float)
    spectrum = np.fft.fftn(values) / m**d

    alphas = half_lattice(d, n)
    index = tuple(np.array(alphas, dtype=int).reshape(-1, d).T % m)
    c = spectrum[index] if alphas else np.zeros(0, dtype=complex)
    logger.debug(f"Fourier projection d={d} n={n} on {m} points per axis")
    return FourierSeries(
        d=d,
        order=n,
        a0=float(spectrum[(0,) * d].real),
        alphas=np.array(alphas, dtype=float).reshape(-1, d),
        a=2.0 * c.real,
        b=-2.0 * c.imag,
    )


def fourier_report(series: FourierSeries, Y, K: CompactBox) -> TruncationReport:
    """Truncation report with weight 1 on a torus box."""
    grid = K.grid()
    approx = series(grid)
    sup_error = float(np.max(np.abs(approx - np.asarray(Y(grid), dtype=float))))
    deriv_sup = float(np.max(np.abs(series.gradient(grid))))
    return TruncationReport(
        basis="fourier",
        order=series.order,
        sup_error=sup_error,
        deriv_sup=deriv_sup,
        ell=float(np.max(np.abs(approx))) + deriv_sup,
        grid=list(K.resolution),
    )
