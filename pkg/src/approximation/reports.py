"""
Truncation ladders: reports for an increasing sequence of orders.
"""

import logging
from typing import Dict, List, Sequence

import numpy as np

from ..geometry.manifold import CompactBox, ManifoldSpec
from ..schemas import TruncationReport
from .fourier import fourier_project, fourier_report
from .hermite import hermite_coeffs, truncation_report
from .laplace import laplace_project, laplace_report

logger = logging.getLogger(__name__)

DEFAULT_ORDERS: Dict[str, List[int]] = {
    "hermite": [4, 8, 12, 16],
    "fourier": [4, 8, 12, 16],
    "laplace": [2, 4, 6, 8],
}


def gaussian_target(z: np.ndarray) -> np.ndarray:
    """e^{-|z|^2}, smooth with Gaussian decay."""
    return np.exp(-np.sum(np.asarray(z) ** 2, axis=-1))


def periodic_target(phi: np.ndarray) -> np.ndarray:
    """1 / (2 - cos phi), analytic and 2 pi periodic."""
    return 1.0 / (2.0 - np.cos(np.asarray(phi)[..., 0]))


def sphere_target(x: np.ndarray) -> np.ndarray:
    """e^{x3}, smooth on the sphere."""
    return np.exp(np.asarray(x)[..., 2])


def truncation_ladder(basis: str, orders: Sequence[int] = ()) -> List[TruncationReport]:
    """
    Reports for the built-in target of each basis:
    hermite on [-3, 3], fourier on the full circle, laplace on the sphere.
    """
    orders = list(orders) or DEFAULT_ORDERS[basis]
    reports = []
    for n in orders:
        if basis == "hermite":
            K = CompactBox.cube(ManifoldSpec.euclidean(1), -3.0, 3.0, resolution=601)
            series = hermite_coeffs(gaussian_target, n)
            reports.append(truncation_report(series, gaussian_target, K))
        elif basis == "fourier":
            K = CompactBox.full_torus(1, resolution=1025)
            reports.append(fourier_report(fourier_project(periodic_target, n), periodic_target, K))
        elif basis == "laplace":
            reports.append(laplace_report(laplace_project(sphere_target, n), sphere_target))
        else:
            raise ValueError(f"unknown basis '{basis}'")
        logger.info(f"{basis} n={n}: sup_error={reports[-1].sup_error:.3e}")
    return reports


def strictly_decreasing(reports: Sequence[TruncationReport]) -> bool:
    errors = [r.sup_error for r in reports]
    return all(b < a for a, b in zip(errors, errors[1:]))


def derivative_spread(reports: Sequence[TruncationReport]) -> float:
    """(max - min) / max of the derivative sups along a ladder."""
    sups = [r.deriv_sup for r in reports]
    top = max(sups)
    return (top - min(sups)) / top if top > 0 else 0.0
