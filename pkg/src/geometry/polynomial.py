"""
Exact polynomials on R^3 and spherical harmonics.

Coefficients are exact rationals (sympy ``Poly`` over QQ); evaluation is in
double precision through the monomial table.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Mapping, NamedTuple, Tuple, Union

import numpy as np
import sympy as sp

from ..utils.error_handler import ConstraintViolationError

X1, X2, X3 = sp.symbols("x1 x2 x3", real=True)
GENERATORS = (X1, X2, X3)

Exponent = Tuple[int, int, int]
RationalLike = Union[int, str, Fraction, float, sp.Rational]


def _rational(value: RationalLike) -> sp.Rational:
    if isinstance(value, Fraction):
        return sp.Rational(value.numerator, value.denominator)
    return sp.Rational(value)


def _fraction(value: sp.Expr) -> Fraction:
    rational = sp.Rational(value)
    return Fraction(int(rational.p), int(rational.q))


@dataclass(frozen=True, eq=False)
class Polynomial3:
    """Polynomial in x1, x2, x3 with exact rational coefficients."""

    poly: sp.Poly

    @classmethod
    def from_expr(cls, expr: Union[sp.Expr, int]) -> "Polynomial3":
        return cls(sp.Poly(sp.expand(expr), *GENERATORS, domain=sp.QQ))

    @classmethod
    def from_terms(cls, terms: Mapping[Exponent, RationalLike]) -> "Polynomial3":
        expr = sp.Integer(0)
        for (a, b, c), coef in terms.items():
            expr += _rational(coef) * X1**a * X2**b * X3**c
        return cls.from_expr(expr)

    @classmethod
    def zero(cls) -> "Polynomial3":
        return cls.from_expr(0)

    @classmethod
    def coordinate(cls, axis: int) -> "Polynomial3":
        return cls.from_expr(GENERATORS[axis])

    @cached_property
    def terms(self) -> Dict[Exponent, Fraction]:
        """Monomial table; zero coefficients are absent."""
        table = {}
        for monom, coef in self.poly.terms():
            if coef != 0:
                table[tuple(int(e) for e in monom)] = _fraction(coef)
        return table

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def as_expr(self) -> sp.Expr:
        return self.poly.as_expr()

    def diff(self, axis: int) -> "Polynomial3":
        return Polynomial3(self.poly.diff(GENERATORS[axis]))

    @cached_property
    def gradient(self) -> Tuple["Polynomial3", "Polynomial3", "Polynomial3"]:
        return tuple(self.diff(i) for i in range(3))

    @cached_property
    def hessian(self) -> Tuple[Tuple["Polynomial3", ...], ...]:
        return tuple(tuple(g.diff(j) for j in range(3)) for g in self.gradient)

    def __add__(self, other: "Polynomial3") -> "Polynomial3":
        return Polynomial3(self.poly + other.poly)

    def __sub__(self, other: "Polynomial3") -> "Polynomial3":
        return Polynomial3(self.poly - other.poly)

    def __neg__(self) -> "Polynomial3":
        return Polynomial3(-self.poly)

    def __mul__(self, other: Union["Polynomial3", RationalLike]) -> "Polynomial3":
        if isinstance(other, Polynomial3):
            return Polynomial3(self.poly * other.poly)
        return Polynomial3(self.poly * _rational(other))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial3):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(tuple(sorted(self.terms.items())))

    def __repr__(self) -> str:
        return f"Polynomial3({self.as_expr()})"

    @cached_property
    def _table(self) -> Tuple[np.ndarray, np.ndarray]:
        exps = np.array(list(self.terms.keys()), dtype=int).reshape(-1, 3)
        coefs = np.array([float(c) for c in self.terms.values()], dtype=float)
        return exps, coefs

    def __call__(self, x: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (..., 3)."""
        x = np.asarray(x, dtype=float)
        exps, coefs = self._table
        if coefs.size == 0:
            return np.zeros(x.shape[:-1])
        monomials = np.prod(x[..., None, :] ** exps, axis=-1)
        return monomials @ coefs

    def grad_at(self, x: np.ndarray) -> np.ndarray:
        """Gradient at points of shape (..., 3) -> (..., 3)."""
        return np.stack([g(x) for g in self.gradient], axis=-1)

    def hessian_at(self, x: np.ndarray) -> np.ndarray:
        """Hessian at points of shape (..., 3) -> (..., 3, 3)."""
        rows = [np.stack([h(x) for h in row], axis=-1) for row in self.hessian]
        return np.stack(rows, axis=-2)

    def to_json(self) -> str:
        monomials = [
            {"exp": list(exp), "coef": str(coef)} for exp, coef in sorted(self.terms.items())
        ]
        return json.dumps({"monomials": monomials}, sort_keys=True)

    @classmethod
    def from_json(cls, payload: Union[str, Mapping]) -> "Polynomial3":
        data = json.loads(payload) if isinstance(payload, str) else payload
        terms = {}
        for entry in data["monomials"]:
            a, b, c = (int(e) for e in entry["exp"])
            terms[(a, b, c)] = Fraction(entry["coef"])
        return cls.from_terms(terms)


def laplacian3(F: Polynomial3) -> Polynomial3:
    """Exact sum of unmixed second derivatives."""
    result = Polynomial3.zero()
    for axis in range(3):
        result = result + F.diff(axis).diff(axis)
    return result


@dataclass(frozen=True, eq=False)
class HarmonicPolynomial:
    """Homogeneous harmonic polynomial; its restriction is a spherical harmonic."""

    poly: Polynomial3
    degree: int

    def __post_init__(self):
        if self.poly.is_zero:
            raise ConstraintViolationError("a spherical harmonic must be nonzero")
        if any(sum(exp) != self.degree for exp in self.poly.terms):
            raise ConstraintViolationError(
                "polynomial is not homogeneous of the stated degree", degree=self.degree
            )
        if not laplacian3(self.poly).is_zero:
            raise ConstraintViolationError("polynomial is not harmonic", degree=self.degree)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.poly(x)


def _real_imag_parts(expr: sp.Expr) -> Tuple[sp.Expr, sp.Expr]:
    """Split a polynomial with Gaussian-rational coefficients into real parts."""
    poly = sp.Poly(sp.expand(expr), *GENERATORS)
    real, imag = sp.Integer(0), sp.Integer(0)
    for (a, b, c), coef in poly.terms():
        monom = X1**a * X2**b * X3**c
        real += sp.re(coef) * monom
        imag += sp.im(coef) * monom
    return real, imag


def default_harmonic_basis() -> Dict[str, HarmonicPolynomial]:
    """Three linear harmonics, one quadratic and one cubic."""
    return {
        "l1": HarmonicPolynomial(Polynomial3.from_expr(X1), 1),
        "l2": HarmonicPolynomial(Polynomial3.from_expr(X2), 1),
        "l3": HarmonicPolynomial(Polynomial3.from_expr(X3), 1),
        "q": HarmonicPolynomial(Polynomial3.from_expr(X1 * X2), 2),
        "c": HarmonicPolynomial(Polynomial3.from_expr(X3 * (X1**2 - X2**2)), 3),
    }


def planar_harmonic(k: int) -> HarmonicPolynomial:
    """Re((x1 + i x2)^k), harmonic in the first two variables."""
    real, _ = _real_imag_parts((X1 + sp.I * X2) ** k)
    return HarmonicPolynomial(Polynomial3.from_expr(real), k)


def random_harmonic(degree: int, rng: np.random.Generator, terms: int = 3) -> HarmonicPolynomial:
    """
    Random homogeneous harmonic with exact rational coefficients.

    Uses powers of isotropic linear forms a.x with a = (1 - s^2, i(1 + s^2), 2s):
    since a.a = 0 every power is harmonic, and so are its real and imaginary parts.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    while True:
        expr = sp.Integer(0)
        for _ in range(terms):
            s = sp.Rational(int(rng.integers(-9, 10)), int(rng.integers(1, 10)))
            a = (1 - s**2, sp.I * (1 + s**2), 2 * s)
            perm = rng.permutation(3)
            form = sum(a[j] * GENERATORS[int(perm[j])] for j in range(3))
            real, imag = _real_imag_parts(form**degree)
            w_re = sp.Rational(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
            w_im = sp.Rational(int(rng.integers(-5, 6)), int(rng.integers(1, 5)))
            expr += w_re * real + w_im * imag
        poly = Polynomial3.from_expr(expr)
        if not poly.is_zero:
            return HarmonicPolynomial(poly, degree)


class SolidHarmonic(NamedTuple):
    """Labelled real solid harmonic: degree l, order m, 'cos' or 'sin' part."""

    degree: int
    order: int
    part: str
    harmonic: HarmonicPolynomial


def solid_harmonic_basis(max_degree: int) -> List[SolidHarmonic]:
    """
    Real solid harmonics of every degree up to max_degree (2l + 1 per degree).

    Built as Re/Im((x1 + i x2)^m) * r^(l-m) P_l^(m)(x3 / r), which is a
    homogeneous polynomial since P_l^(m) has the parity of l - m.
    """
    t = sp.Symbol("t")
    r2 = X1**2 + X2**2 + X3**2
    basis: List[SolidHarmonic] = []
    for l in range(max_degree + 1):
        legendre = sp.legendre(l, t)
        for m in range(l + 1):
            derivative = sp.Poly(sp.diff(legendre, t, m), t)
            radial = sp.Integer(0)
            for (j,), coef in derivative.terms():
                radial += coef * X3**j * r2 ** ((l - m - j) // 2)
            real, imag = _real_imag_parts((X1 + sp.I * X2) ** m)
            basis.append(
                SolidHarmonic(l, m, "cos", HarmonicPolynomial(Polynomial3.from_expr(real * radial), l))
            )
            if m > 0:
                basis.append(
                    SolidHarmonic(
                        l, m, "sin", HarmonicPolynomial(Polynomial3.from_expr(imag * radial), l)
                    )
                )
    return basis
