"""
Property suites run by the ``verify`` command.

Every check uses fixed seeds and returns a PropertyResult; a check that
raises is reported as a failure with the error text.
"""

import logging
from typing import Callable, Dict, List

import numpy as np
import sympy as sp
from numpy.polynomial import hermite_e
from scipy.special import factorial

from ..approximation import (
    derivative_spread,
    hermite_norms,
    laplace_project,
    strictly_decreasing,
    truncation_ladder,
)
from ..core.constants import EXACT_TOL, GRADIENT_FD_TOL, MIXED_TOL, TANGENCY_TOL
from ..dynamics import (
    ControlSchedule,
    Ensemble,
    cyclic_order_preserved,
    discrete_gradient,
    flow_ensemble,
    flow_map_area_factor,
    order_preserved,
    rescale_schedule,
    split_schedule,
)
from ..dynamics.output import OutputMap
from ..fields import (
    ControlFamily,
    ad_chain,
    ambient_gradient,
    bracket_field,
    coordinate_field,
    coordinate_symbols,
    enumerate_words,
    euler_field,
    evaluation_rank,
    field_for,
    gradient_extension,
    lie_bracket,
)
from ..geometry import (
    ManifoldSpec,
    euler_divergence,
    planar_harmonic,
    random_harmonic,
    random_unit_vectors,
    spherical_divergence,
    spherical_laplacian,
)
from ..geometry.polynomial import Polynomial3, X3
from ..schemas.reports import PropertyResult, VerifyReport
from ..utils.error_handler import UnknownSuiteError

logger = logging.getLogger(__name__)

Check = Callable[[], PropertyResult]

SEED = 20240601
N_SPHERE_POINTS = 100
N_ORDER_SCHEDULES = 200


def _result(name: str, ok: bool, **detail) -> PropertyResult:
    return PropertyResult(name=name, status="pass" if ok else "fail", detail=detail)


def _relative_gap(lhs: np.ndarray, rhs: np.ndarray) -> float:
    lhs, rhs = np.asarray(lhs, dtype=float), np.asarray(rhs, dtype=float)
    return float(np.max(np.abs(lhs - rhs)) / max(1.0, float(np.max(np.abs(rhs)))))


def _scaled_gap(lhs: np.ndarray, rhs: np.ndarray, scale: float) -> float:
    """Gap measured against the size of the terms that produced it."""
    gap = np.max(np.abs(np.asarray(lhs, dtype=float) - np.asarray(rhs, dtype=float)))
    return float(gap / max(scale, np.finfo(float).tiny))


# geometry


def check_euler_identity() -> PropertyResult:
    rng = np.random.default_rng(SEED)
    x = random_unit_vectors(rng, N_SPHERE_POINTS)
    worst = 0.0
    for k in range(1, 5):
        F = random_harmonic(k, rng).poly
        radial = np.sum(F.grad_at(x) * x, axis=-1)
        worst = max(worst, _relative_gap(radial, k * F(x)))
    return _result("euler-identity", worst < MIXED_TOL, max_rel_error=worst)


def check_laplacian_eigenfunctions() -> PropertyResult:
    rng = np.random.default_rng(SEED + 1)
    points = random_unit_vectors(rng, 20)
    worst = 0.0
    for k in range(1, 5):
        F = random_harmonic(k, rng).poly
        lap = np.array([spherical_laplacian(F, x) for x in points])
        worst = max(worst, _relative_gap(lap, -k * (k + 1) * F(points)))
    return _result("laplacian-eigenfunctions", worst < MIXED_TOL, max_rel_error=worst)


def check_gradient_bracket_divergence() -> PropertyResult:
    rng = np.random.default_rng(SEED + 2)
    points = random_unit_vectors(rng, 20)
    worst_euler = worst_surface = 0.0
    for k, l in [(1, 2), (2, 1), (3, 1), (2, 4), (3, 3)]:
        F, G = random_harmonic(k, rng).poly, random_harmonic(l, rng).poly
        Z = bracket_field(gradient_extension(F), gradient_extension(G))
        inner = np.sum(F.grad_at(points) * G.grad_at(points), axis=-1)
        product = k * l * F(points) * G(points)
        base = inner - product
        # the k = l case has a zero right-hand side; compare with the term sizes
        scale = (k + l + 3) ** 2 * float(np.max(np.abs(inner) + np.abs(product)))
        euler = np.array([euler_divergence(Z, x) for x in points])
        surface = np.array([spherical_divergence(Z, x) for x in points])
        worst_euler = max(
            worst_euler, _scaled_gap(euler, (k - l) * (k + l + 3) * base, scale)
        )
        worst_surface = max(
            worst_surface, _scaled_gap(surface, (k - l) * (k + l + 1) * base, scale)
        )
    ok = worst_euler < MIXED_TOL and worst_surface < MIXED_TOL
    return _result(
        "gradient-bracket-divergence",
        ok,
        euler_form_error=worst_euler,
        surface_form_error=worst_surface,
    )


def check_pole_example() -> PropertyResult:
    """div of [grad f, grad x3] for f = Re (x1 + i x2)^2 equals -12 x3 f (Euler form)."""
    rng = np.random.default_rng(SEED + 3)
    points = random_unit_vectors(rng, 20)
    f = planar_harmonic(2).poly
    Z = bracket_field(gradient_extension(f), gradient_extension(Polynomial3.from_expr(X3)))
    lhs = np.array([euler_divergence(Z, x) for x in points])
    gap = _relative_gap(lhs, -12.0 * points[:, 2] * f(points))
    return _result("bracket-divergence-example", gap < MIXED_TOL, max_rel_error=gap)


def check_euler_bracket() -> PropertyResult:
    rng = np.random.default_rng(SEED + 4)
    points = rng.uniform(-1.0, 1.0, size=(20, 3))
    worst = 0.0
    for k in range(1, 5):
        F = random_harmonic(k, rng).poly
        grad, E = ambient_gradient(F), euler_field()
        lhs = np.array([lie_bracket(grad, E, x).components for x in points])
        worst = max(worst, _relative_gap(lhs, (2 - k) * F.grad_at(points)))
    return _result("gradient-euler-bracket", worst < MIXED_TOL, max_rel_error=worst)


# fields


def check_gh_rank() -> PropertyResult:
    rng = np.random.default_rng(SEED + 10)
    family = ControlFamily.gh(2)
    ranks = {}
    for n in (1, 2, 3):
        ensemble = Ensemble.random(family.manifold, n, rng)
        report = evaluation_rank(family, ensemble, depth=3)
        ranks[n] = [report.rank, report.expected_rank]
    ok = all(r >= e for r, e in ranks.values())
    return _result("gh-full-rank", ok, ranks=ranks)


def check_torus_rank() -> PropertyResult:
    family = ControlFamily.torus1()
    ensemble = Ensemble(family.manifold, np.array([[0.3], [2.0], [4.4]]))
    report = evaluation_rank(family, ensemble, depth=2)
    return _result("torus1-full-rank", report.full_rank, rank=report.rank)


def check_insufficient_depth() -> PropertyResult:
    """Symmetric pair under GH(2): generators alone span only half the ensemble space."""
    family = ControlFamily.gh(2)
    ensemble = Ensemble(family.manifold, np.array([[1.0, 0.0], [0.0, 1.0]]))
    shallow = evaluation_rank(family, ensemble, depth=1)
    deep = evaluation_rank(family, ensemble, depth=2)
    detail = {
        "depth1_rank": shallow.rank,
        "depth2_rank": deep.rank,
        "expected": shallow.expected_rank,
    }
    if not deep.full_rank:
        return PropertyResult(name="gh-depth-ladder", status="fail", detail=detail)
    status = "pass" if shallow.full_rank else "expected-insufficient-depth"
    return PropertyResult(name="gh-depth-ladder", status=status, detail=detail)


def check_gh_ad_chain() -> PropertyResult:
    rng = np.random.default_rng(SEED + 11)
    family = ControlFamily.gh(2)
    z = rng.uniform(-2.0, 2.0, size=(15, 2))
    weight = np.exp(-0.5 * np.sum(z**2, axis=-1))
    worst = 0.0
    for m in range(5):
        values = field_for(family, ad_chain(2, 0, m)).value(z)
        he_m = hermite_e.hermeval(z[:, 0], [0] * m + [1])
        worst = max(worst, _relative_gap(values[:, 0], (-1) ** m * he_m * weight))
        worst = max(worst, float(np.max(np.abs(values[:, 1]))))
    return _result("gh-hermite-chain", worst < MIXED_TOL, max_rel_error=worst)


def check_sphere_divergence_free() -> PropertyResult:
    rng = np.random.default_rng(SEED + 12)
    family = ControlFamily.sphere_symp()
    points = random_unit_vectors(rng, 10)
    worst = 0.0
    for word in enumerate_words(family.r, 2):
        Y = field_for(family, word)
        worst = max(worst, max(abs(spherical_divergence(Y, x)) for x in points))
    return _result("sphere-symp-divergence-free", worst < TANGENCY_TOL, max_divergence=worst)


def check_torus_derivative_bracket() -> PropertyResult:
    coords = coordinate_symbols("phi", 1)
    (phi,) = coords
    d = coordinate_field(coords, 0, 1)
    angles = np.linspace(0.0, 2 * np.pi, 17)[:, None]
    worst = 0.0
    for k in range(1, 5):
        Y = coordinate_field(coords, 0, sp.sin(k * phi))
        values = np.array([lie_bracket(d, Y, a).components[0] for a in angles])
        worst = max(worst, _relative_gap(values, k * np.cos(k * angles[:, 0])))
    return _result("torus-derivative-bracket", worst < EXACT_TOL * 100, max_error=worst)


# approximation


def check_hermite_norms() -> PropertyResult:
    norms = hermite_norms(10)
    expected = factorial(np.arange(11))
    gap = float(np.max(np.abs(norms - expected) / expected))
    return _result("hermite-norms", gap < 1e-10, max_rel_error=gap)


def _ladder_check(basis: str, spread_limit: float) -> PropertyResult:
    reports = truncation_ladder(basis)
    spread = derivative_spread(reports)
    ok = strictly_decreasing(reports) and spread < spread_limit
    return _result(
        f"{basis}-ladder",
        ok,
        orders=[r.order for r in reports],
        sup_errors=[r.sup_error for r in reports],
        derivative_spread=spread,
    )


def check_hermite_ladder() -> PropertyResult:
    return _ladder_check("hermite", 0.2)


def check_fourier_ladder() -> PropertyResult:
    return _ladder_check("fourier", 0.2)


def check_laplace_ladder() -> PropertyResult:
    return _ladder_check("laplace", 0.2)


def check_laplace_reproduces_harmonics() -> PropertyResult:
    rng = np.random.default_rng(SEED + 20)
    F = random_harmonic(3, rng)
    series = laplace_project(F, 3)
    points = random_unit_vectors(rng, 50)
    gap = _relative_gap(series(points), F(points))
    return _result("laplace-reproduces-harmonics", gap < MIXED_TOL, max_rel_error=gap)


# dynamics


def check_line_order() -> PropertyResult:
    rng = np.random.default_rng(SEED + 30)
    family = ControlFamily.gh(1)
    violations = 0
    for _ in range(N_ORDER_SCHEDULES):
        ensemble = Ensemble.random(family.manifold, 5, rng, -2.0, 2.0)
        sched = ControlSchedule.random_uniform(1.0, 10, family.r, rng, scale=2.0)
        if not order_preserved(flow_ensemble(family, sched, ensemble).states):
            violations += 1
    return _result("line-order-preserved", violations == 0, violations=violations)


def check_circle_order() -> PropertyResult:
    rng = np.random.default_rng(SEED + 31)
    family = ControlFamily.torus1()
    violations = 0
    for _ in range(N_ORDER_SCHEDULES):
        ensemble = Ensemble.random(family.manifold, 5, rng, 0.0, 2 * np.pi)
        sched = ControlSchedule.random_uniform(1.0, 10, family.r, rng, scale=2.0)
        if not cyclic_order_preserved(flow_ensemble(family, sched, ensemble).states):
            violations += 1
    return _result("circle-cyclic-order-preserved", violations == 0, violations=violations)


def check_area_preservation() -> PropertyResult:
    rng = np.random.default_rng(SEED + 32)
    family = ControlFamily.sphere_symp()
    sched = ControlSchedule.random_uniform(1.0, 10, family.r, rng, scale=1.0)
    factors = [flow_map_area_factor(family, sched, x) for x in random_unit_vectors(rng, 5)]
    worst = float(np.max(np.abs(np.array(factors) - 1.0)))
    return _result("sphere-area-preserved", worst < 1e-3, max_deviation=worst)


def check_gradient_exactness() -> PropertyResult:
    rng = np.random.default_rng(SEED + 33)
    family = ControlFamily.gh(2)
    ensemble = Ensemble.random(family.manifold, 2, rng)
    targets = rng.uniform(-1.0, 1.0, size=(2, 2))
    pmap = OutputMap.build(family.manifold)
    beta, eps = 1e-2, 1e-5
    sched = ControlSchedule.random_uniform(1.0, 5, family.r, rng, scale=0.5)

    def loss_at(values: np.ndarray) -> float:
        return discrete_gradient(
            family, sched.with_values(values), ensemble, targets, pmap, beta
        ).loss

    gradient = discrete_gradient(family, sched, ensemble, targets, pmap, beta).gradient
    worst = 0.0
    for _ in range(5):
        j, i = int(rng.integers(sched.steps)), int(rng.integers(sched.r))
        bump = np.zeros_like(sched.values)
        bump[j, i] = eps
        fd = (loss_at(sched.values + bump) - loss_at(sched.values - bump)) / (2 * eps)
        worst = max(worst, abs(fd - gradient[j, i]) / max(abs(gradient[j, i]), 1e-3))
    return _result("discrete-gradient-exact", worst < GRADIENT_FD_TOL, max_rel_error=worst)


def check_scaling_invariance() -> PropertyResult:
    rng = np.random.default_rng(SEED + 34)
    family = ControlFamily.gh(2)
    ensemble = Ensemble.random(family.manifold, 3, rng)
    sched = ControlSchedule.random_uniform(1.0, 8, family.r, rng, scale=1.0)
    base = flow_ensemble(family, sched, ensemble).terminal
    stretched = flow_ensemble(family, rescale_schedule(sched, 2.5), ensemble).terminal
    gap = float(np.max(np.abs(base - stretched)))
    return _result("time-rescaling-invariance", gap < 1e-10, max_gap=gap)


def check_sphere_constraint() -> PropertyResult:
    rng = np.random.default_rng(SEED + 35)
    family = ControlFamily.sphere_full()
    ensemble = Ensemble(ManifoldSpec.sphere2(), random_unit_vectors(rng, 4))
    sched = ControlSchedule.random_uniform(1.0, 10, family.r, rng, scale=1.0)
    traj = flow_ensemble(family, sched, ensemble)
    drift = float(np.max(np.abs(np.linalg.norm(traj.substep_states, axis=-1) - 1.0)))
    return _result("sphere-constraint-kept", drift < MIXED_TOL, max_drift=drift)


def _rk4_ratio(family: ControlFamily, ensemble: Ensemble, sched: ControlSchedule) -> float:
    reference = flow_ensemble(family, sched, ensemble, substeps=40).terminal
    coarse = flow_ensemble(family, sched, ensemble, substeps=2).terminal
    fine = flow_ensemble(family, sched, ensemble, substeps=4).terminal
    return float(np.max(np.abs(coarse - reference)) / np.max(np.abs(fine - reference)))


def check_rk4_order() -> PropertyResult:
    rng = np.random.default_rng(SEED + 36)
    gh = ControlFamily.gh(2)
    torus = ControlFamily.torus1()
    ratios = [
        _rk4_ratio(
            gh,
            Ensemble.random(gh.manifold, 3, rng),
            ControlSchedule.random_uniform(1.0, 4, gh.r, rng, scale=1.0),
        ),
        _rk4_ratio(
            torus,
            Ensemble.random(torus.manifold, 3, rng),
            ControlSchedule.random_uniform(1.0, 4, torus.r, rng, scale=1.0),
        ),
    ]
    ok = all(12.0 <= q <= 20.0 for q in ratios)
    return _result("rk4-fourth-order", ok, ratios=ratios)


def check_flow_split() -> PropertyResult:
    rng = np.random.default_rng(SEED + 37)
    family = ControlFamily.gh(2)
    ensemble = Ensemble.random(family.manifold, 3, rng)
    sched = ControlSchedule.random_uniform(1.0, 10, family.r, rng, scale=1.0)
    first, second = split_schedule(sched)
    middle = flow_ensemble(family, first, ensemble).terminal
    joined = flow_ensemble(family, second, Ensemble(family.manifold, middle)).terminal
    gap = float(np.max(np.abs(joined - flow_ensemble(family, sched, ensemble).terminal)))
    return _result("flow-split-exact", gap < EXACT_TOL, max_gap=gap)


SUITES: Dict[str, List[Check]] = {
    "geometry": [
        check_euler_identity,
        check_laplacian_eigenfunctions,
        check_gradient_bracket_divergence,
        check_pole_example,
        check_euler_bracket,
    ],
    "fields": [
        check_gh_rank,
        check_torus_rank,
        check_insufficient_depth,
        check_gh_ad_chain,
        check_sphere_divergence_free,
        check_torus_derivative_bracket,
    ],
    "approximation": [
        check_hermite_norms,
        check_hermite_ladder,
        check_fourier_ladder,
        check_laplace_ladder,
        check_laplace_reproduces_harmonics,
    ],
    "dynamics": [
        check_line_order,
        check_circle_order,
        check_area_preservation,
        check_gradient_exactness,
        check_scaling_invariance,
        check_sphere_constraint,
        check_rk4_order,
        check_flow_split,
    ],
}


def suite_names() -> List[str]:
    return list(SUITES) + ["all"]


def run_suite(name: str) -> VerifyReport:
    """
    Run one named suite, or every suite for "all".

    Raises:
        UnknownSuiteError: for names outside suite_names()
    """
    if name == "all":
        checks = [c for suite in SUITES.values() for c in suite]
    elif name in SUITES:
        checks = SUITES[name]
    else:
        raise UnknownSuiteError(f"unknown suite '{name}'", known=suite_names())

    results = []
    for check in checks:
        try:
            result = check()
        except Exception as e:
            logger.warning(f"Check {check.__name__} raised: {e}")
            result = PropertyResult(
                name=check.__name__.removeprefix("check_").replace("_", "-"),
                status="fail",
                detail={"error": str(e)},
            )
        logger.info(f"{name}: {result.name} -> {result.status}")
        results.append(result)
    return VerifyReport(suite=name, results=results)
