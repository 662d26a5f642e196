"""
Descent on piecewise-constant schedules.

Directions are taken in the L2(0, T) metric, where the gradient of the loss is
the discrete gradient divided by the interval length. The default direction is
Polak-Ribiere conjugate with Powell restarts; ``direction="steepest"`` uses the
negative gradient. Armijo backtracking shortens a trial step until the loss
drops sufficiently, so every accepted step strictly decreases the loss. A trial
step accepted at once is extended while the loss keeps dropping.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..dynamics.gradient import GradientResult
from ..dynamics.integrator import TrajectoryBundle
from ..dynamics.schedule import ControlSchedule
from ..schemas.reports import HistoryEntry
from ..schemas.scenario import OptimizerConfig
from ..utils.error_handler import IntegrationError
from .loss import check_schedule, loss
from .problem import TrainingProblem

logger = logging.getLogger(__name__)

STEP_MIN = 1e-12
STEP_MAX = 1e8
EXPANSION = 2.0
POWELL_RESTART = 0.2

Trial = Tuple[ControlSchedule, TrajectoryBundle, float]


@dataclass
class OptimizationResult:
    """
    Outcome of one descent run.

    Attributes:
        schedule: Best schedule found
        history: Accepted iterations (iteration 0 is the starting point)
        final: Loss and gradient at ``schedule``
        converged: Stopped on the gradient or loss tolerance
        line_search_failed: Backtracking ran out before sufficient decrease
    """

    schedule: ControlSchedule
    history: List[HistoryEntry] = field(default_factory=list)
    final: Optional[GradientResult] = None
    converged: bool = False
    line_search_failed: bool = False

    @property
    def iterations(self) -> int:
        return self.history[-1].iteration if self.history else 0

    @property
    def grad_norm(self) -> float:
        return self.history[-1].grad_norm if self.history else float("nan")

    def __iter__(self):
        yield self.schedule
        yield self.history


def _initial_schedule(
    problem: TrainingProblem, config: OptimizerConfig, initial: Optional[ControlSchedule]
) -> Tuple[ControlSchedule, GradientResult]:
    if initial is not None:
        check_schedule(problem, initial)
        return initial, problem.gradient(initial)
    zero = problem.zero_schedule()
    at_zero = problem.gradient(zero)
    if at_zero.loss <= config.loss_tol or config.init_scale == 0:
        return zero, at_zero
    rng = np.random.default_rng(config.seed)
    noisy = problem.random_schedule(rng, config.init_scale)
    return noisy, problem.gradient(noisy)


def conjugate_direction(
    grad: np.ndarray, prev_grad: np.ndarray, prev_dir: np.ndarray
) -> np.ndarray:
    """
    Polak-Ribiere (non-negative) update of the previous direction.

    Falls back to the negative gradient on a Powell restart or when the
    update is not a descent direction.
    """
    gg = float(np.sum(grad * grad))
    prev_gg = float(np.sum(prev_grad * prev_grad))
    if prev_gg == 0.0 or abs(float(np.sum(grad * prev_grad))) >= POWELL_RESTART * gg:
        return -grad
    beta = max(0.0, float(np.sum(grad * (grad - prev_grad))) / prev_gg)
    direction = -grad + beta * prev_dir
    if float(np.sum(grad * direction)) >= 0.0:
        return -grad
    return direction


def _try(problem: TrainingProblem, u: np.ndarray) -> Optional[Trial]:
    sched = ControlSchedule(u, problem.dt)
    try:
        traj = problem.flow(sched)
        return sched, traj, loss(problem, sched, traj=traj)
    except IntegrationError:
        return None


def _line_search(
    problem: TrainingProblem,
    config: OptimizerConfig,
    u: np.ndarray,
    current_loss: float,
    direction: np.ndarray,
    slope: float,
    step: float,
) -> Tuple[Optional[Trial], float]:
    """Armijo backtracking along ``direction``; ``slope`` is dJ/dstep at step 0."""

    def sufficient(s: float, value: float) -> bool:
        return value < current_loss and value <= current_loss + config.armijo_c1 * s * slope

    for attempt in range(config.max_backtracks):
        trial = _try(problem, u + step * direction)
        if trial is not None and sufficient(step, trial[2]):
            break
        step *= config.backtrack
    else:
        return None, step

    if attempt == 0:
        for _ in range(config.max_expansions):
            longer = step * EXPANSION
            candidate = _try(problem, u + longer * direction)
            if candidate is None or candidate[2] >= trial[2]:
                break
            if not sufficient(longer, candidate[2]):
                break
            trial, step = candidate, longer
    return trial, step


def optimize(
    problem: TrainingProblem,
    config: Optional[OptimizerConfig] = None,
    initial: Optional[ControlSchedule] = None,
) -> OptimizationResult:
    """
    Minimize the discretized loss over schedules.

    Starts from the zero schedule when it already meets the loss tolerance,
    from ``initial`` when given, and otherwise from uniform noise of
    amplitude ``config.init_scale``.

    Args:
        problem: The training problem
        config: Descent parameters
        initial: Optional starting schedule

    Returns:
        OptimizationResult; unpacks as (schedule, history)
    """
    config = config or OptimizerConfig()
    sched, current = _initial_schedule(problem, config, initial)
    u = sched.values

    g = current.gradient
    gnorm = float(np.linalg.norm(g))
    result = OptimizationResult(schedule=sched, final=current)
    result.history.append(
        HistoryEntry(iteration=0, loss=current.loss, grad_norm=gnorm, step=0.0)
    )
    logger.info(
        f"Optimizing {problem.family.family_id}: N={problem.ensemble.N}, "
        f"S={problem.steps}, beta={problem.beta:g}, initial loss {current.loss:.6e}"
    )
    if current.loss <= config.loss_tol or gnorm <= config.grad_tol:
        result.converged = True
        return result

    dt = problem.dt
    prev_grad: Optional[np.ndarray] = None
    prev_dir: Optional[np.ndarray] = None
    prev_step, prev_slope = config.initial_step, None
    for iteration in range(1, config.max_iterations + 1):
        grad = g / dt
        candidates = [-grad]
        if config.direction == "conjugate" and prev_grad is not None:
            conjugate = conjugate_direction(grad, prev_grad, prev_dir)
            if not np.array_equal(conjugate, -grad):
                candidates.insert(0, conjugate)

        accepted = None
        for direction in candidates:
            slope = float(np.sum(g * direction))
            step = config.initial_step
            if prev_slope is not None:
                step = float(np.clip(prev_step * prev_slope / slope, STEP_MIN, STEP_MAX))
            accepted, step = _line_search(
                problem, config, u, current.loss, direction, slope, step
            )
            if accepted is not None:
                break
            if direction is not candidates[-1]:
                logger.debug(f"iter {iteration}: line search failed, restarting along -grad")

        if accepted is None:
            logger.warning(
                f"Line search failed at iteration {iteration}; returning best schedule "
                f"(loss {current.loss:.6e})"
            )
            result.line_search_failed = True
            break

        trial, traj, _ = accepted
        prev_grad, prev_dir = grad, direction
        prev_step, prev_slope = step, slope
        current = problem.gradient(trial, traj=traj)
        sched, u, g = trial, trial.values, current.gradient
        gnorm = float(np.linalg.norm(g))
        result.schedule, result.final = sched, current
        result.history.append(
            HistoryEntry(iteration=iteration, loss=current.loss, grad_norm=gnorm, step=step)
        )
        logger.debug(
            f"iter {iteration}: loss {current.loss:.6e}, |grad| {gnorm:.3e}, step {step:.3e}"
        )
        if gnorm <= config.grad_tol or current.loss <= config.loss_tol:
            result.converged = True
            break

    logger.info(
        f"Finished after {result.iterations} iterations: loss {current.loss:.6e}, "
        f"|grad| {gnorm:.3e}, converged={result.converged}"
    )
    return result
