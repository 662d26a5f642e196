"""
The steer, train, verify and approx commands.

Each command returns a process exit code: 0 on success, 1 when the numerics
did not reach the requested quality (artifacts are still written), 2 for
usage and configuration errors (no artifacts).
"""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..approximation import DEFAULT_ORDERS, strictly_decreasing, truncation_ladder
from ..schemas.common import MessageResponse
from ..schemas.scenario import ScenarioFile
from ..solver import (
    OptimizationResult,
    TrainingProblem,
    classification_accuracy,
    member_discrepancies,
    optimize,
    pmp_residual,
)
from ..utils.error_handler import (
    EXIT_NUMERIC,
    EXIT_OK,
    EnsembleControlError,
    handle_config_error,
    handle_numeric_error,
)
from .artifacts import ArtifactWriter, artifact_meta, rows_to_csv
from .scenario import (
    build_steering,
    build_training,
    config_hash,
    config_hash_of,
    load_scenario,
)
from .verify import run_suite

logger = logging.getLogger(__name__)

BASES = ("hermite", "fourier", "laplace")


def _announce(command: str, exit_code: int, message: str) -> int:
    response = MessageResponse(command=command, exit_code=exit_code, message=message)
    print(response.model_dump_json())
    return exit_code


def _history_csv(result: OptimizationResult) -> str:
    return rows_to_csv(
        ["iter", "loss", "grad_norm", "step"],
        ([h.iteration, h.loss, h.grad_norm, h.step] for h in result.history),
    )


def _terminal_csv(problem: TrainingProblem, terminal: np.ndarray) -> str:
    n = terminal.shape[-1]
    s = problem.targets.shape[-1]
    gaps = member_discrepancies(problem, terminal)
    header = (
        ["member"]
        + [f"z{i}" for i in range(n)]
        + [f"target{i}" for i in range(s)]
        + ["discrepancy"]
    )
    rows = (
        [k]
        + [float(v) for v in terminal[k]]
        + [float(c) for c in problem.targets[k]]
        + [float(gaps[k])]
        for k in range(terminal.shape[0])
    )
    return rows_to_csv(header, rows)


def _predictions_csv(
    points: np.ndarray,
    labels: np.ndarray,
    outputs: np.ndarray,
    targets: np.ndarray,
    tolerance: float,
) -> str:
    hits = np.linalg.norm(outputs - targets, axis=-1) <= tolerance
    header = (
        ["point"]
        + [f"x{i}" for i in range(points.shape[1])]
        + ["label", "output", "within_tolerance"]
    )
    rows = (
        [k]
        + [float(v) for v in points[k]]
        + [float(labels[k]), float(outputs[k, 0]), int(hits[k])]
        for k in range(points.shape[0])
    )
    return rows_to_csv(header, rows)


def _write_run(
    writer: ArtifactWriter, problem: TrainingProblem, result: OptimizationResult
) -> Dict:
    """History, schedule, terminal states, trajectory and PMP report of one run."""
    traj = result.final.trajectory
    terminal = traj.reduced_states[-1]
    writer.write_csv("history.csv", _history_csv(result))
    writer.write_csv("schedule.csv", result.schedule.to_csv())
    writer.write_csv("terminal.csv", _terminal_csv(problem, terminal))
    writer.write_csv("trajectory.csv", traj.to_csv())
    if problem.beta > 0:
        report = pmp_residual(problem, result.schedule, traj=traj)
        writer.write_json("pmp.json", report.model_dump())
    else:
        logger.info("beta = 0: maximum-principle report skipped")
    gaps = member_discrepancies(problem, traj.terminal)
    return {
        "family": problem.family.family_id,
        "n_members": problem.ensemble.N,
        "iterations": result.iterations,
        "converged": result.converged,
        "line_search_failed": result.line_search_failed,
        "loss": result.final.loss,
        "discrepancy": result.final.discrepancy,
        "max_member_discrepancy": float(np.max(gaps)),
    }


def cmd_steer(
    config: Path, out_dir: Path, seed: Optional[int] = None, threads: Optional[int] = None
) -> int:
    """Optimize an ensemble-steering scenario and write its artifacts."""
    try:
        scenario = load_scenario(config, "steer", seed)
        problem = build_steering(scenario, threads)
    except (EnsembleControlError, ValueError) as e:
        return _announce("steer", handle_config_error(e, str(config)), str(e))

    writer = ArtifactWriter(out_dir, artifact_meta(config_hash(scenario)))
    try:
        result = optimize(problem, scenario.optimizer)
        summary = _write_run(writer, problem, result)
    except EnsembleControlError as e:
        return _announce("steer", handle_numeric_error(e, command="steer"), str(e))

    reached = summary["max_member_discrepancy"] < scenario.discrepancy_tol
    exit_code = EXIT_OK if reached else EXIT_NUMERIC
    writer.write_json("summary.json", {**summary, "command": "steer", "exit_code": exit_code})
    if not reached:
        logger.warning(
            f"Terminal discrepancy {summary['max_member_discrepancy']:.3e} "
            f"above tolerance {scenario.discrepancy_tol:g}"
        )
    return _announce(
        "steer",
        exit_code,
        f"max discrepancy {summary['max_member_discrepancy']:.3e} "
        f"after {summary['iterations']} iterations",
    )


def cmd_train(
    config: Path, out_dir: Path, seed: Optional[int] = None, threads: Optional[int] = None
) -> int:
    """Train a product-system classifier and write its artifacts plus predictions."""
    try:
        scenario = load_scenario(config, "train", seed)
        problem, points, labels = build_training(scenario, threads)
    except (EnsembleControlError, ValueError) as e:
        return _announce("train", handle_config_error(e, str(config)), str(e))

    writer = ArtifactWriter(out_dir, artifact_meta(config_hash(scenario)))
    try:
        result = optimize(problem, scenario.optimizer)
        summary = _write_run(writer, problem, result)
    except EnsembleControlError as e:
        return _announce("train", handle_numeric_error(e, command="train"), str(e))

    outputs = problem.pmap(result.final.trajectory.terminal)
    targets = problem.targets
    accuracy = classification_accuracy(outputs, targets, scenario.label_tolerance)
    writer.write_csv(
        "predictions.csv",
        _predictions_csv(points, labels, outputs, targets, scenario.label_tolerance),
    )
    passed = accuracy >= scenario.accuracy_threshold
    exit_code = EXIT_OK if passed else EXIT_NUMERIC
    writer.write_json(
        "summary.json",
        {**summary, "command": "train", "accuracy": accuracy, "exit_code": exit_code},
    )
    return _announce(
        "train", exit_code, f"accuracy {accuracy:.3f} after {summary['iterations']} iterations"
    )


def cmd_verify(suite: str, out_dir: Path) -> int:
    """Run a property suite and write its JSON report."""
    try:
        report = run_suite(suite)
    except EnsembleControlError as e:
        return _announce("verify", handle_config_error(e, suite), str(e))

    meta = artifact_meta(config_hash_of({"command": "verify", "suite": suite}))
    ArtifactWriter(out_dir, meta).write_json(f"verify_{suite}.json", report.model_dump())
    failed = [r.name for r in report.results if r.status == "fail"]
    if failed:
        return _announce("verify", EXIT_NUMERIC, f"failed: {', '.join(failed)}")
    return _announce("verify", EXIT_OK, f"{len(report.results)} properties hold")


def cmd_approx(
    out_dir: Path, bases: Sequence[str] = BASES, orders: Optional[List[int]] = None
) -> int:
    """Run truncation ladders and write one CSV and one JSON report per basis."""
    unknown = [b for b in bases if b not in BASES]
    if unknown or (orders is not None and any(n < 1 for n in orders)):
        message = f"unknown basis {unknown}" if unknown else "orders must be positive"
        return _announce("approx", handle_config_error(ValueError(message), "approx"), message)

    payload = {"command": "approx", "bases": list(bases), "orders": orders}
    writer = ArtifactWriter(out_dir, artifact_meta(config_hash_of(payload)))
    decreasing = True
    try:
        for basis in bases:
            reports = truncation_ladder(basis, orders or DEFAULT_ORDERS[basis])
            writer.write_csv(
                f"approx_{basis}.csv",
                rows_to_csv(
                    ["n", "sup_error", "deriv_sup", "ell"],
                    ([r.order, r.sup_error, r.deriv_sup, r.ell] for r in reports),
                ),
            )
            writer.write_json(f"approx_{basis}.json", [r.model_dump() for r in reports])
            decreasing = decreasing and strictly_decreasing(reports)
    except EnsembleControlError as e:
        return _announce("approx", handle_numeric_error(e, command="approx"), str(e))
    if not decreasing:
        return _announce("approx", EXIT_NUMERIC, "a ladder is not strictly decreasing")
    return _announce("approx", EXIT_OK, f"ladders written for {', '.join(bases)}")
