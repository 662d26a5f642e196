"""
Command-line front end: scenarios, artifacts and verification suites.
"""

from .artifacts import ArtifactWriter, artifact_meta, rows_to_csv
from .commands import cmd_approx, cmd_steer, cmd_train, cmd_verify
from .scenario import (
    build_steering,
    build_training,
    config_hash,
    config_hash_of,
    load_scenario,
    read_scenario,
)
from .verify import SUITES, run_suite, suite_names

__all__ = [
    "ArtifactWriter",
    "artifact_meta",
    "rows_to_csv",
    "cmd_approx",
    "cmd_steer",
    "cmd_train",
    "cmd_verify",
    "build_steering",
    "build_training",
    "config_hash",
    "config_hash_of",
    "load_scenario",
    "read_scenario",
    "SUITES",
    "run_suite",
    "suite_names",
]
