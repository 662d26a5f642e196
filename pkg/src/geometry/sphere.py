"""
Calculus on the unit sphere S in R^3.

Functions on S are restrictions of polynomials F on R^3. Vector fields on S
are handled through ambient extensions that expose value and Jacobian.
"""

from typing import Protocol

import numpy as np

from ..core.constants import SPHERE_OP_TOL
from ..utils.error_handler import ConstraintViolationError
from .manifold import ArrayOrPoint, ManifoldSpec, Point, TangentVector, coords_of
from .polynomial import Polynomial3

SPHERE = ManifoldSpec.sphere2()


class AmbientField(Protocol):
    """Smooth vector field on (a neighbourhood of S in) R^3."""

    def value(self, x: np.ndarray) -> np.ndarray:
        ...

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        ...


def unit_coords(x: ArrayOrPoint) -> np.ndarray:
    """Coordinates of a sphere point, renormalized after the drift check."""
    coords = coords_of(x, SPHERE)
    if coords.shape[-1] != 3:
        raise ConstraintViolationError("sphere points have three coordinates")
    radius = np.linalg.norm(coords, axis=-1, keepdims=True)
    drift = np.abs(radius - 1.0)
    if np.any(drift > SPHERE_OP_TOL):
        raise ConstraintViolationError(
            "point is off the unit sphere", deviation=float(np.max(drift))
        )
    return coords / radius


def cross_matrix(a: np.ndarray) -> np.ndarray:
    """Matrices [a]x with [a]x b = a x b, stacked over leading axes."""
    a = np.asarray(a, dtype=float)
    zero = np.zeros(a.shape[:-1])
    return np.stack(
        [
            np.stack([zero, -a[..., 2], a[..., 1]], axis=-1),
            np.stack([a[..., 2], zero, -a[..., 0]], axis=-1),
            np.stack([-a[..., 1], a[..., 0], zero], axis=-1),
        ],
        axis=-2,
    )


def _tangent(x: np.ndarray, v: np.ndarray) -> TangentVector:
    return TangentVector(Point(SPHERE, x), v)


def project_tangent(v: np.ndarray, x: ArrayOrPoint) -> TangentVector:
    """pr_S v = v - <v, x> x."""
    xs = unit_coords(x)
    v = np.asarray(v, dtype=float)
    return _tangent(xs, v - np.dot(v, xs) * xs)


def spherical_gradient(F: Polynomial3, x: ArrayOrPoint) -> TangentVector:
    """Projection of the ambient gradient of F onto T_x S."""
    xs = unit_coords(x)
    grad = F.grad_at(xs)
    return _tangent(xs, grad - np.dot(grad, xs) * xs)


def hamiltonian_field(phi: Polynomial3, x: ArrayOrPoint) -> TangentVector:
    """Hamiltonian vector field x x grad(phi)(x) of the area form."""
    xs = unit_coords(x)
    return _tangent(xs, np.cross(xs, phi.grad_at(xs)))


def spherical_divergence(X: AmbientField, x: ArrayOrPoint) -> float:
    """
    Divergence of pr_S X with respect to the area form.

    Equals the tangential trace of D(pr_S X):
    div X - 2 <X, x> - <DX(x) x, x>.
    """
    xs = unit_coords(x)
    value = np.asarray(X.value(xs), dtype=float)
    jac = np.asarray(X.jacobian(xs), dtype=float)
    return float(np.trace(jac) - 2.0 * np.dot(value, xs) - xs @ jac @ xs)


def euler_divergence(X: AmbientField, x: ArrayOrPoint) -> float:
    """
    div X - 3 <X, x>.

    Coincides with the ambient divergence for fields tangent along S; it is
    not the surface divergence in general (see spherical_divergence).
    """
    xs = unit_coords(x)
    value = np.asarray(X.value(xs), dtype=float)
    jac = np.asarray(X.jacobian(xs), dtype=float)
    return float(np.trace(jac) - 3.0 * np.dot(value, xs))


class SphericalGradientField:
    """Ambient extension grad F(x) - <grad F(x), x> x of the spherical gradient."""

    def __init__(self, F: Polynomial3):
        self.F = F

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        grad = self.F.grad_at(x)
        return grad - np.sum(grad * x, axis=-1, keepdims=True) * x

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        grad = self.F.grad_at(x)
        hess = self.F.hessian_at(x)
        radial = np.sum(grad * x, axis=-1)
        d_radial = np.einsum("...ij,...j->...i", hess, x) + grad
        eye = np.broadcast_to(np.eye(3), hess.shape)
        return hess - x[..., :, None] * d_radial[..., None, :] - radial[..., None, None] * eye


class HamiltonianVectorField:
    """Ambient field x x grad(phi)(x)."""

    def __init__(self, phi: Polynomial3):
        self.phi = phi

    def value(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.cross(x, self.phi.grad_at(x))

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        grad = self.phi.grad_at(x)
        hess = self.phi.hessian_at(x)
        return -cross_matrix(grad) + cross_matrix(x) @ hess


def spherical_laplacian(F: Polynomial3, x: ArrayOrPoint) -> float:
    """div_S grad_S f; equals -k(k+1) f for a spherical harmonic of degree k."""
    return spherical_divergence(SphericalGradientField(F), x)


def random_unit_vectors(rng: np.random.Generator, count: int) -> np.ndarray:
    """Uniform random points of S as a (count, 3) array."""
    raw = rng.standard_normal((count, 3))
    return raw / np.linalg.norm(raw, axis=-1, keepdims=True)


def tangent_frame(x: np.ndarray) -> np.ndarray:
    """Orthonormal basis (2, 3) of T_x S."""
    xs = unit_coords(x)
    helper = np.array([1.0, 0.0, 0.0]) if abs(xs[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(xs, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(xs, e1)
    return np.stack([e1, e2])
