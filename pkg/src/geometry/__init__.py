"""
Manifold primitives, exact polynomials on R^3 and calculus on the 2-sphere.
"""

from .manifold import (
    TWO_PI,
    CompactBox,
    ManifoldKind,
    ManifoldSpec,
    Point,
    TangentVector,
    coords_of,
)
from .polynomial import (
    GENERATORS,
    HarmonicPolynomial,
    Polynomial3,
    SolidHarmonic,
    default_harmonic_basis,
    laplacian3,
    planar_harmonic,
    random_harmonic,
    solid_harmonic_basis,
)
from .sphere import (
    AmbientField,
    HamiltonianVectorField,
    SphericalGradientField,
    euler_divergence,
    hamiltonian_field,
    project_tangent,
    random_unit_vectors,
    spherical_divergence,
    spherical_gradient,
    spherical_laplacian,
    tangent_frame,
    unit_coords,
)

__all__ = [
    "TWO_PI",
    "CompactBox",
    "ManifoldKind",
    "ManifoldSpec",
    "Point",
    "TangentVector",
    "coords_of",
    "GENERATORS",
    "HarmonicPolynomial",
    "Polynomial3",
    "SolidHarmonic",
    "default_harmonic_basis",
    "laplacian3",
    "planar_harmonic",
    "random_harmonic",
    "solid_harmonic_basis",
    "AmbientField",
    "HamiltonianVectorField",
    "SphericalGradientField",
    "euler_divergence",
    "hamiltonian_field",
    "project_tangent",
    "random_unit_vectors",
    "spherical_divergence",
    "spherical_gradient",
    "spherical_laplacian",
    "tangent_frame",
    "unit_coords",
]
