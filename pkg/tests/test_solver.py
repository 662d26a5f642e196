"""
Tests for the Bolza loss, the descent loop, maximum-principle diagnostics
and the classification helpers.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from src.core.config import get_settings
from src.dynamics import ControlSchedule, Ensemble
from src.fields import ControlFamily
from src.schemas import OptimizerConfig
from src.solver import (
    TrainingProblem,
    beta_sweep,
    classification_accuracy,
    classification_problem,
    conjugate_direction,
    interval_means,
    lift_product,
    loss,
    member_discrepancies,
    optimize,
    pmp_residual,
    two_moons,
)
from src.utils.error_handler import (
    DimensionMismatchError,
    InvalidEnsembleError,
    ScenarioConfigError,
)


def matched_problem(rng, family, beta=1e-3):
    ensemble = Ensemble.random(family.manifold, 3, rng)
    return TrainingProblem.build(family, ensemble, ensemble.array, beta=beta, T=1.0, steps=6)


class TestTrainingProblem:
    """Test problem construction."""

    def test_target_count_checked(self, rng, gh2):
        """One target per member."""
        ensemble = Ensemble.random(gh2.manifold, 3, rng)
        with pytest.raises(DimensionMismatchError):
            TrainingProblem.build(gh2, ensemble, np.zeros((2, 2)))

    def test_negative_beta_rejected(self, rng, gh2):
        """beta is non-negative."""
        ensemble = Ensemble.random(gh2.manifold, 2, rng)
        with pytest.raises(ValueError):
            TrainingProblem.build(gh2, ensemble, ensemble.array, beta=-1.0)

    def test_with_options(self, gh2_problem):
        """Copies change only the named settings."""
        copy = gh2_problem.with_options(beta=0.5)
        assert copy.beta == 0.5
        assert copy.steps == gh2_problem.steps
        assert gh2_problem.beta == 1e-2


class TestLoss:
    """Test the discretized Bolza loss."""

    def test_zero_schedule(self, rng, gh2):
        """With u = 0 only the discrepancy remains."""
        ensemble = Ensemble.random(gh2.manifold, 3, rng)
        offset = np.array([0.3, -0.4])
        problem = TrainingProblem.build(gh2, ensemble, ensemble.array + offset, beta=1.0)
        assert loss(problem, problem.zero_schedule()) == pytest.approx(3 * 0.5 * 0.25)

    def test_translation_hits_targets(self, rng, gh2):
        """A constant g1 control reaches shifted targets; only the penalty is left."""
        ensemble = Ensemble.random(gh2.manifold, 3, rng)
        beta = 0.2
        problem = TrainingProblem.build(
            gh2, ensemble, ensemble.array + [0.5, 0.0], beta=beta, T=1.0, steps=4
        )
        values = np.tile([0.0, 0.0, 0.5, 0.0], (4, 1))
        sched = ControlSchedule.from_horizon(1.0, values)
        assert loss(problem, sched) == pytest.approx(beta * 0.25 / 2, abs=1e-14)

    def test_grid_mismatch(self, gh2_problem):
        """Schedules on another grid are refused."""
        with pytest.raises(ValueError):
            loss(gh2_problem, ControlSchedule.zeros(1.0, 5, 4))

    def test_permutation_invariance(self, rng, gh2_problem):
        """Relabelling members with their targets leaves the loss unchanged."""
        sched = gh2_problem.random_schedule(rng, 1.0)
        permuted = gh2_problem.permuted([2, 0, 1])
        assert loss(permuted, sched) == pytest.approx(loss(gh2_problem, sched), rel=1e-13)

    def test_member_discrepancies(self, rng, gh2):
        """One distance per member."""
        problem = matched_problem(rng, gh2)
        gaps = member_discrepancies(problem, problem.ensemble.array + [0.0, 0.1])
        assert np.allclose(gaps, 0.1)


class TestOptimizer:
    """Test the descent loop."""

    def test_matched_start_stops_immediately(self, rng, gh2):
        """Targets equal to sources: zero schedule, iteration 0."""
        result = optimize(matched_problem(rng, gh2))
        assert result.iterations == 0
        assert result.converged
        assert np.all(result.schedule.values == 0.0)

    def test_loss_decreases(self, gh2_problem):
        """Every accepted step strictly lowers the loss."""
        result = optimize(gh2_problem, OptimizerConfig(max_iterations=30, seed=1))
        losses = [h.loss for h in result.history]
        assert len(losses) > 1
        assert all(b < a for a, b in zip(losses, losses[1:]))

    def test_unpacks_to_schedule_and_history(self, gh2_problem):
        """The result unpacks as (schedule, history)."""
        sched, history = optimize(gh2_problem, OptimizerConfig(max_iterations=3))
        assert sched.steps == gh2_problem.steps
        assert history[0].iteration == 0

    def test_initial_schedule_used(self, rng, gh2_problem):
        """An explicit start is the first iterate."""
        start = gh2_problem.random_schedule(rng, 0.5)
        result = optimize(gh2_problem, OptimizerConfig(max_iterations=1), initial=start)
        assert result.history[0].loss == pytest.approx(loss(gh2_problem, start))

    def test_seed_determines_result(self, gh2_problem):
        """The same seed gives bit-identical schedules."""
        config = OptimizerConfig(max_iterations=10, seed=4)
        first = optimize(gh2_problem, config).schedule.values
        second = optimize(gh2_problem, config).schedule.values
        assert np.array_equal(first, second)

    def test_config_rejects_unknown_keys(self):
        """Optimizer settings are a closed set."""
        with pytest.raises(ValidationError):
            OptimizerConfig(momentum=0.9)

    def test_config_defaults_and_directions(self):
        """The iteration cap comes from settings; only the two directions are accepted."""
        assert OptimizerConfig().max_iterations == get_settings().optimizer_max_iterations
        assert OptimizerConfig().direction == "conjugate"
        with pytest.raises(ValidationError):
            OptimizerConfig(direction="newton")
        with pytest.raises(ValidationError):
            OptimizerConfig(barzilai_borwein=True)

    def test_steepest_descent_decreases(self, gh2_problem):
        """Plain gradient directions also lower the loss at every step."""
        config = OptimizerConfig(max_iterations=20, direction="steepest", seed=1)
        losses = [h.loss for h in optimize(gh2_problem, config).history]
        assert len(losses) > 1
        assert all(b < a for a, b in zip(losses, losses[1:]))

    @pytest.mark.slow
    def test_steers_random_planar_ensembles(self):
        """GH(2) moves three random points within 1e-2 of random targets."""
        family = ControlFamily.gh(2)
        reached = 0
        for seed in range(10):
            rng = np.random.default_rng(seed)
            ensemble = Ensemble.random(family.manifold, 3, rng)
            targets = rng.uniform(-1.0, 1.0, size=(3, 2))
            problem = TrainingProblem.build(family, ensemble, targets, beta=1e-4, steps=20)
            result = optimize(problem, OptimizerConfig(max_iterations=500, seed=seed))
            gaps = member_discrepancies(problem, result.final.trajectory.terminal)
            reached += int(np.max(gaps) < 1e-2)
        assert reached >= 9


class TestConjugateDirection:
    """Test the Polak-Ribiere update."""

    def test_descent_direction(self):
        """A nearly orthogonal gradient pair gives a descent direction mixing in the old one."""
        prev_grad = np.array([[1.0, 0.0], [0.0, 0.0]])
        grad = np.array([[0.1, 1.0], [0.0, 0.5]])
        prev_dir = -prev_grad
        direction = conjugate_direction(grad, prev_grad, prev_dir)
        assert float(np.sum(grad * direction)) < 0.0
        assert not np.array_equal(direction, -grad)

    def test_powell_restart(self):
        """Strongly correlated successive gradients restart along -grad."""
        grad = np.array([[1.0, 2.0]])
        direction = conjugate_direction(grad, 0.9 * grad, -grad)
        assert np.array_equal(direction, -grad)

    def test_zero_previous_gradient(self):
        grad = np.array([[0.3, -0.4]])
        assert np.array_equal(conjugate_direction(grad, np.zeros_like(grad), -grad), -grad)

    def test_ascent_update_rejected(self):
        """An update pointing uphill is replaced by -grad."""
        prev_grad = np.array([[0.0, 2.0]])
        grad = np.array([[1.0, 0.1]])
        direction = conjugate_direction(grad, prev_grad, np.array([[10.0, 0.0]]))
        assert np.array_equal(direction, -grad)


class TestMaximumPrinciple:
    """Test the stationarity residual and the Hamiltonian profile."""

    def test_interval_means(self):
        """Trapezoid means of linear data are interval midpoints."""
        t = np.linspace(0.0, 1.0, 9)
        means = interval_means(np.column_stack([t, np.ones_like(t)]), 2, 0.25)
        assert np.allclose(means[:, 0], [0.125, 0.375, 0.625, 0.875])
        assert np.allclose(means[:, 1], 1.0)

    def test_matched_targets(self, rng, gh2):
        """Zero schedule at matched targets: zero residual and Hamiltonian."""
        problem = matched_problem(rng, gh2, beta=1e-2)
        report = pmp_residual(problem, problem.zero_schedule())
        assert report.residual == 0.0
        assert report.mean_hamiltonian == 0.0
        assert report.spread == 0.0
        assert len(report.hamiltonian) == problem.steps + 1

    def test_beta_must_be_positive(self, rng, gh2):
        """The normal-case diagnostics need beta > 0."""
        problem = matched_problem(rng, gh2, beta=0.0)
        with pytest.raises(ScenarioConfigError):
            pmp_residual(problem, problem.zero_schedule())

    def test_optimization_lowers_residual(self, gh2_problem):
        """An optimized schedule is closer to stationarity than a random one."""
        random = gh2_problem.random_schedule(np.random.default_rng(3), 1.0)
        result = optimize(gh2_problem, OptimizerConfig(max_iterations=200, seed=2))
        assert (
            pmp_residual(gh2_problem, result.schedule).residual
            < pmp_residual(gh2_problem, random).residual
        )

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_residual_tracks_discrete_gradient(self, gh2_problem, seed):
        """sup |beta u - F_bar| stays within ten times |grad| / dt."""
        sched = gh2_problem.random_schedule(np.random.default_rng(seed), 0.5)
        grad_norm = float(np.linalg.norm(gh2_problem.gradient(sched).gradient))
        report = pmp_residual(gh2_problem, sched)
        assert report.residual < 10.0 * grad_norm / gh2_problem.dt

    @pytest.mark.slow
    def test_hamiltonian_spread_shrinks_with_steps(self, gh2_problem):
        """Finer control grids give a flatter Hamiltonian at the optimum."""
        config = OptimizerConfig(max_iterations=1000, grad_tol=1e-10, seed=2)
        spreads = []
        for steps in (8, 16, 32):
            problem = gh2_problem.with_options(steps=steps)
            result = optimize(problem, config)
            spreads.append(pmp_residual(problem, result.schedule).spread)
        assert spreads[0] > spreads[1] > spreads[2]

    @pytest.mark.slow
    def test_optimum_keeps_hamiltonian_constant(self, gh2_problem):
        """At a converged schedule M varies by less than one percent."""
        config = OptimizerConfig(max_iterations=2000, grad_tol=1e-10, seed=2)
        problem = gh2_problem.with_options(steps=40)
        result = optimize(problem, config)
        report = pmp_residual(problem, result.schedule)
        assert report.mean_hamiltonian > 0.0
        assert report.spread < 1e-2


class TestClassification:
    """Test the two-moons data and the product lift."""

    def test_two_moons_shapes(self):
        """Upper moon first, labelled 0; lower moon labelled 1."""
        points, labels = two_moons(41, noise=0.0)
        assert points.shape == (41, 2)
        assert labels.tolist() == [0.0] * 21 + [1.0] * 20

    def test_two_moons_seeded(self):
        """The noise stream is seeded."""
        a, _ = two_moons(10, seed=5)
        b, _ = two_moons(10, seed=5)
        c, _ = two_moons(10, seed=6)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_lift(self):
        """iota(x) = (x, nu)."""
        lifted = lift_product(np.array([[1.0, 2.0], [3.0, 4.0]]), [0.5])
        assert lifted.tolist() == [[1.0, 2.0, 0.5], [3.0, 4.0, 0.5]]

    def test_accuracy(self):
        """Outputs within the tolerance count as hits."""
        outputs = np.array([[0.1], [0.9], [0.6], [-0.3]])
        labels = np.array([0.0, 1.0, 1.0, 0.0])
        assert classification_accuracy(outputs, labels, 0.25) == pytest.approx(0.5)

    def test_problem_projects_label_axes(self):
        """Targets are compared with the label coordinates only."""
        points, labels = two_moons(6, noise=0.0)
        problem = classification_problem(points, labels, ControlFamily.product_gh(2, 1))
        assert problem.pmap.indices == (2,)
        assert problem.targets.shape == (6, 1)
        assert np.allclose(problem.ensemble.array[:, 2], 0.0)

    def test_problem_needs_product_family(self):
        """Classification runs on the product system."""
        with pytest.raises(DimensionMismatchError):
            classification_problem(np.zeros((2, 2)), [0.0, 1.0], ControlFamily.gh(2))

    def test_empty_data_rejected(self):
        """No points, no ensemble."""
        with pytest.raises(InvalidEnsembleError):
            classification_problem(np.zeros((0, 2)), [], ControlFamily.product_gh(2, 1))

    def test_data_dimension_checked(self):
        """Data points live in the first factor."""
        with pytest.raises(DimensionMismatchError):
            classification_problem(np.zeros((2, 3)), [0.0, 1.0], ControlFamily.product_gh(2, 1))

    def test_beta_sweep_rows(self, gh2_problem):
        """One row per beta with the achieved values."""
        rows = beta_sweep(gh2_problem, OptimizerConfig(max_iterations=3), betas=(0.0, 1e-2))
        assert [row["beta"] for row in rows] == [0.0, 1e-2]
        assert all(row["max_member_discrepancy"] >= 0.0 for row in rows)

    @pytest.mark.slow
    def test_two_moons_accuracy(self):
        """The product system separates two moons to at least 90% accuracy."""
        points, labels = two_moons(40, noise=0.05, seed=11)
        problem = classification_problem(
            points, labels, ControlFamily.product_gh(2, 1), beta=1e-4, T=1.0, steps=20
        )
        result = optimize(problem, OptimizerConfig(max_iterations=500, seed=11))
        outputs = problem.pmap(result.final.trajectory.terminal)
        assert classification_accuracy(outputs, problem.targets) >= 0.9
