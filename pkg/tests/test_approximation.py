"""
Tests for Hermite, Fourier and Laplace expansions and truncation ladders.
"""

import numpy as np
import pytest
from numpy.polynomial import hermite_e
from scipy.special import factorial

from src.approximation import (
    DEFAULT_ORDERS,
    HermiteSeries,
    derivative_spread,
    fourier_project,
    half_lattice,
    hermite_coeffs,
    hermite_norms,
    laplace_project,
    multi_indices,
    strictly_decreasing,
    truncation_ladder,
)
from src.geometry import random_harmonic, random_unit_vectors
from src.utils.error_handler import DimensionMismatchError, QuadratureError


def bump(phi):
    """C^2 bump (1 - t^2)^3 of half-width one centred at pi."""
    t = phi[..., 0] - np.pi
    return np.where(np.abs(t) < 1.0, (1.0 - t**2) ** 3, 0.0)


def trapezoid_coefficients(Y, n, m):
    """Cosine and sine coefficients k = 0..n by direct sums over m uniform nodes."""
    phi = 2 * np.pi * np.arange(m) / m
    values = Y(phi[:, None])
    k = np.arange(n + 1)[:, None]
    a = 2.0 / m * np.cos(k * phi) @ values
    b = 2.0 / m * np.sin(k * phi) @ values
    a[0] /= 2.0
    return a, b


class TestHermite:
    """Test Hermite coefficients and series."""

    def test_norms_are_factorials(self):
        """int He_m^2 e^{-z^2/2} / sqrt(2 pi) = m! for m <= 10."""
        norms = hermite_norms(10)
        expected = factorial(np.arange(11))
        assert np.max(np.abs(norms - expected) / expected) < 1e-10

    @pytest.mark.parametrize("power", [0, 1])
    def test_low_modes(self, power):
        """e^{-gamma} and z e^{-gamma} are the modes 0 and 1."""
        series = hermite_coeffs(lambda z: z[..., 0] ** power * np.exp(-0.5 * z[..., 0] ** 2), 4)
        expected = np.zeros(5)
        expected[power] = 1.0
        assert np.allclose(series.coefficients, expected, atol=1e-12)

    def test_single_mode_recovered(self):
        """He_2 e^{-gamma} has the single coefficient c_2 = 1."""

        def Y(z):
            return hermite_e.hermeval(z[..., 0], [0, 0, 1]) * np.exp(-0.5 * z[..., 0] ** 2)

        series = hermite_coeffs(Y, 6)
        expected = np.zeros(7)
        expected[2] = 1.0
        assert np.allclose(series.coefficients, expected, atol=1e-12)

    def test_two_dimensional_product_mode(self):
        """He_1(z1) He_2(z2) e^{-gamma} maps to c_(1,2) = 1."""

        def Y(z):
            he = hermite_e.hermeval(z[..., 0], [0, 1]) * hermite_e.hermeval(z[..., 1], [0, 0, 1])
            return he * np.exp(-0.5 * np.sum(z**2, axis=-1))

        series = hermite_coeffs(Y, 4, d=2)
        assert series.coefficient((1, 2)) == pytest.approx(1.0, abs=1e-12)
        assert series.coefficient((2, 1)) == pytest.approx(0.0, abs=1e-12)

    def test_compact_support_matches_full_line(self):
        """A bump supported in [-1, 1] has the same coefficients either way."""

        def bump(z):
            x = z[..., 0]
            inside = np.abs(x) < 1.0
            safe = np.where(inside, x, 0.0)
            return np.where(inside, np.exp(-1.0 / (1.0 - safe**2)), 0.0)

        boxed = hermite_coeffs(bump, 4, support=[(-1.0, 1.0)], nodes=200)
        assert boxed.coefficient((0,)) > 0.0
        assert boxed.coefficient((1,)) == pytest.approx(0.0, abs=1e-12)

    def test_too_few_nodes(self):
        """Fewer than 2n + 2 nodes is refused."""
        with pytest.raises(QuadratureError):
            hermite_coeffs(lambda z: np.exp(-z[..., 0] ** 2), 6, nodes=10)

    def test_dimension_limit(self):
        """Expansions run in at most three dimensions."""
        with pytest.raises(DimensionMismatchError):
            hermite_coeffs(lambda z: z[..., 0], 2, d=4)

    def test_gradient_matches_finite_differences(self, rng):
        """The derivative series differentiates S_n e^{-gamma}."""
        series = HermiteSeries(2, 3, rng.normal(size=(4, 4)))
        z = rng.uniform(-1.5, 1.5, size=(6, 2))
        eps = 1e-6
        for axis in range(2):
            bump = np.zeros(2)
            bump[axis] = eps
            fd = (series(z + bump) - series(z - bump)) / (2 * eps)
            assert np.allclose(series.gradient(z)[:, axis], fd, atol=1e-7)

    def test_orders_above_n_are_dropped(self):
        """Entries with |m| > n are zeroed."""
        series = HermiteSeries(2, 2, np.ones((3, 3)))
        assert series.coefficient((2, 2)) == 0.0
        assert len(list(multi_indices(2, 2))) == 6

    def test_derivative_shift_in_one_dimension(self):
        """d/dz of (1 + He_1/2 + He_2/4) e^{-gamma} has coefficients -(0, 1, 1/2, 1/4)."""
        series = HermiteSeries(1, 2, np.array([1.0, 0.5, 0.25]))
        c = series.coefficients

        def Y_prime(z):
            x = z[..., 0]
            poly = hermite_e.hermeval(x, hermite_e.hermeder(c)) - x * hermite_e.hermeval(x, c)
            return poly * np.exp(-0.5 * x**2)

        shifted = series.derivative_series(0).coefficients
        assert np.allclose(shifted, [0.0, -1.0, -0.5, -0.25])
        assert np.allclose(hermite_coeffs(Y_prime, 3).coefficients, shifted, atol=1e-12)

    def test_derivative_shift_along_second_axis(self, rng):
        """The shifted series equals the projection of the partial derivative."""
        series = HermiteSeries(2, 2, rng.normal(size=(3, 3)))
        c = series.coefficients

        def Y_prime(z):
            x1, x2 = z[..., 0], z[..., 1]
            d2 = hermite_e.hermeval2d(x1, x2, hermite_e.hermeder(c, axis=1))
            poly = d2 - x2 * hermite_e.hermeval2d(x1, x2, c)
            return poly * np.exp(-0.5 * (x1**2 + x2**2))

        expected = hermite_coeffs(Y_prime, 3, d=2).coefficients
        assert np.allclose(series.derivative_series(1).coefficients, expected, atol=1e-12)

    def test_parseval_bound(self):
        """The weighted mass of S_n grows with n and stays below int Y^2 e^{gamma}."""
        bound = np.sqrt(np.pi / 1.5)
        masses = [
            hermite_coeffs(lambda z: np.exp(-np.sum(z**2, axis=-1)), n).l2_mass()
            for n in (2, 4, 8, 16)
        ]
        assert all(a <= b * (1 + 1e-12) for a, b in zip(masses, masses[1:]))
        assert masses[-1] <= bound * (1 + 1e-9)

    def test_projection_is_idempotent(self):
        """Projecting a truncated series again returns its coefficients."""
        series = hermite_coeffs(lambda z: np.exp(-np.sum(z**2, axis=-1)), 6)
        again = hermite_coeffs(series, 6)
        assert np.allclose(again.coefficients, series.coefficients, atol=1e-12)


class TestFourier:
    """Test Fourier projection on the torus."""

    def test_trigonometric_polynomial_recovered(self):
        """Coefficients of 1 + cos phi + 0.5 sin 2 phi are exact."""

        def Y(phi):
            p = phi[..., 0]
            return 1.0 + np.cos(p) + 0.5 * np.sin(2 * p)

        series = fourier_project(Y, 4)
        assert series.a0 == pytest.approx(1.0)
        assert series.coefficient((1,), "cos") == pytest.approx(1.0)
        assert series.coefficient((2,), "sin") == pytest.approx(0.5)
        assert series.coefficient((3,), "cos") == pytest.approx(0.0, abs=1e-14)

    def test_single_sine(self):
        """sin 2phi has b_2 = 1 and nothing else."""
        series = fourier_project(lambda phi: np.sin(2 * phi[..., 0]), 6)
        assert series.coefficient((2,), "sin") == pytest.approx(1.0)
        assert series.a0 == pytest.approx(0.0, abs=1e-12)
        assert np.max(np.abs(series.a)) < 1e-12

    def test_gradient(self):
        """The series gradient differentiates each mode."""
        series = fourier_project(lambda phi: np.sin(3 * phi[..., 0]), 4)
        phi = np.linspace(0.0, 2 * np.pi, 7)[:, None]
        assert np.allclose(series.gradient(phi)[:, 0], 3 * np.cos(3 * phi[:, 0]), atol=1e-12)

    def test_half_lattice(self):
        """One representative per +-alpha pair."""
        assert half_lattice(1, 3) == [(1,), (2,), (3,)]
        assert len(half_lattice(2, 1)) == 2

    def test_projection_is_idempotent(self):
        """Projecting a truncated series again returns its coefficients."""
        series = fourier_project(bump, 8)
        again = fourier_project(series, 8)
        assert again.a0 == pytest.approx(series.a0, abs=1e-14)
        assert np.allclose(again.a, series.a, atol=1e-14)
        assert np.allclose(again.b, series.b, atol=1e-14)

    def test_bump_matches_trapezoid_sums(self):
        """FFT coefficients equal direct trapezoid sums on the same grid."""
        m, n = 256, 12
        series = fourier_project(bump, n, points=m)
        oracle = trapezoid_coefficients(bump, n, m)
        assert series.a0 == pytest.approx(oracle[0][0], abs=1e-14)
        assert np.allclose(series.a, oracle[0][1:], atol=1e-13)
        assert np.allclose(series.b, oracle[1][1:], atol=1e-13)

    def test_bump_default_grid(self):
        """The default grid is close to a fine trapezoid rule for a C^2 bump."""
        n = 12
        series = fourier_project(bump, n)
        oracle = trapezoid_coefficients(bump, n, 4096)
        assert np.max(np.abs(series.a - oracle[0][1:])) < 1e-4
        assert np.max(np.abs(series.b - oracle[1][1:])) < 1e-4


class TestLaplace:
    """Test projection onto spherical harmonics."""

    def test_harmonic_is_reproduced(self, rng):
        """Projecting a degree-3 harmonic at degree 3 is exact."""
        F = random_harmonic(3, rng)
        series = laplace_project(F, 3)
        points = random_unit_vectors(rng, 30)
        scale = max(1.0, float(np.max(np.abs(F(points)))))
        assert np.max(np.abs(series(points) - F(points))) / scale < 1e-9

    def test_linear_function(self, rng):
        """x3 projects onto itself."""
        series = laplace_project(lambda x: x[..., 2], 3)
        points = random_unit_vectors(rng, 20)
        assert np.allclose(series(points), points[:, 2], atol=1e-10)

    def test_constant(self):
        """The constant function is the degree-0 coefficient."""
        series = laplace_project(lambda x: np.full(x.shape[:-1], 2.5), 2)
        assert series.coefficient(0, 0) == pytest.approx(2.5)
        assert series.coefficient(2, 1, "sin") == pytest.approx(0.0, abs=1e-12)

    def test_coarse_rule_refused(self):
        """The sphere rule must integrate degree 2n exactly."""
        with pytest.raises(QuadratureError):
            laplace_project(lambda x: x[..., 2], 4, points=(3, 9))

    def test_square_splits_into_mean_and_quadratic(self, rng):
        """x3^2 = 1/3 + (2 x3^2 - x1^2 - x2^2) / 3 on the sphere."""
        def f(x):
            return x[..., 2] ** 2

        points = random_unit_vectors(rng, 25)
        assert np.allclose(laplace_project(f, 0)(points), 1.0 / 3.0, atol=1e-12)
        assert np.allclose(laplace_project(f, 1)(points), 1.0 / 3.0, atol=1e-12)
        full = laplace_project(f, 2)
        assert np.allclose(full(points), points[:, 2] ** 2, atol=1e-12)
        quadratic = full(points) - laplace_project(f, 0)(points)
        x1, x2, x3 = points.T
        assert np.allclose(quadratic, (2 * x3**2 - x1**2 - x2**2) / 3.0, atol=1e-12)

    def test_projection_is_idempotent(self):
        """Projecting a truncated series again returns its coefficients."""
        series = laplace_project(lambda x: np.exp(x[..., 0]) * x[..., 2], 3)
        again = laplace_project(series, 3)
        assert np.allclose(again.coefficients, series.coefficients, atol=1e-12)


class TestTruncationLadders:
    """Test truncation reports on the built-in targets."""

    @pytest.mark.parametrize("basis", ["hermite", "fourier", "laplace"])
    def test_ladder_decreases(self, basis):
        """Sup errors strictly decrease and derivative sups stay within 20%."""
        reports = truncation_ladder(basis)
        assert [r.order for r in reports] == DEFAULT_ORDERS[basis]
        assert strictly_decreasing(reports)
        assert derivative_spread(reports) < 0.2
        assert all(r.ell >= r.deriv_sup for r in reports)

    def test_unknown_basis(self):
        """Only the three bases exist."""
        with pytest.raises(ValueError):
            truncation_ladder("wavelet", [2])
