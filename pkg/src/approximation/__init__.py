"""
Hermite, Fourier and Laplace expansions with truncation reports.
"""

from .fourier import FourierSeries, fourier_project, fourier_report, half_lattice
from .hermite import (
    HermiteSeries,
    gamma,
    hermite_coeffs,
    hermite_norms,
    multi_indices,
    truncation_report,
)
from .laplace import LaplaceSeries, laplace_project, laplace_report, sphere_quadrature
from .reports import (
    DEFAULT_ORDERS,
    derivative_spread,
    gaussian_target,
    periodic_target,
    sphere_target,
    strictly_decreasing,
    truncation_ladder,
)

__all__ = [
    "FourierSeries",
    "fourier_project",
    "fourier_report",
    "half_lattice",
    "HermiteSeries",
    "gamma",
    "hermite_coeffs",
    "hermite_norms",
    "multi_indices",
    "truncation_report",
    "LaplaceSeries",
    "laplace_project",
    "laplace_report",
    "sphere_quadrature",
    "DEFAULT_ORDERS",
    "derivative_spread",
    "gaussian_target",
    "periodic_target",
    "sphere_target",
    "strictly_decreasing",
    "truncation_ladder",
]
