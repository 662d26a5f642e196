"""
Tests for the command-line surface: exit codes, artifacts and provenance.
"""

import json
from pathlib import Path

import pytest

from src.cli import cmd_approx, cmd_verify, config_hash, load_scenario
from src.cli.verify import check_gradient_bracket_divergence
from src.core.constants import MIXED_TOL
from src.main import build_parser, main
from src.utils.error_handler import ScenarioConfigError

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def trivial_steer():
    return {
        "command": "steer",
        "family": "gh:2",
        "points": [[0.0, 0.0], [1.0, 0.5]],
        "target_rule": "identity",
        "steps": 4,
    }


def short_steer():
    return {
        "command": "steer",
        "family": "gh:2",
        "seed": 5,
        "sampling": {"n": 2},
        "target_rule": "random",
        "steps": 4,
        "optimizer": {"max_iterations": 5, "seed": 5},
    }


def read_data(path):
    return json.loads(path.read_text(encoding="utf-8"))["data"]


class TestParser:
    """Test argument parsing."""

    def test_flags_after_subcommand(self, tmp_path):
        """Global flags work on either side of the subcommand."""
        args = build_parser().parse_args(["verify", "geometry", "--out", str(tmp_path)])
        assert args.out == tmp_path
        assert args.suite == "geometry"

    def test_flags_before_subcommand(self, tmp_path):
        args = build_parser().parse_args(["--seed", "3", "steer", "--config", "a.json"])
        assert args.seed == 3
        assert str(args.config) == "a.json"

    def test_non_positive_threads(self, tmp_path):
        """--threads 0 is a usage error."""
        with pytest.raises(SystemExit) as exc_info:
            main(["verify", "geometry", "--threads", "0", "--out", str(tmp_path)])
        assert exc_info.value.code == 2

    def test_missing_config(self, tmp_path):
        """steer without a scenario exits 2."""
        assert main(["steer", "--out", str(tmp_path)]) == 2


@pytest.mark.integration
class TestSteer:
    """Test the steer command."""

    def test_trivial_scenario(self, scenario_file, tmp_path, capsys):
        """Targets equal to sources: exit 0 after zero iterations."""
        out = tmp_path / "out"
        code = main(["steer", "--config", str(scenario_file(trivial_steer())), "--out", str(out)])
        assert code == 0
        summary = read_data(out / "summary.json")
        assert summary["iterations"] == 0
        assert summary["exit_code"] == 0
        assert json.loads(capsys.readouterr().out.strip())["exit_code"] == 0
        for name in ("history.csv", "schedule.csv", "terminal.csv", "trajectory.csv", "pmp.json"):
            assert (out / name).exists()

    def test_malformed_json(self, tmp_path):
        """Unparseable scenarios exit 2 and write nothing."""
        path = tmp_path / "broken.json"
        path.write_text("{ not json", encoding="utf-8")
        out = tmp_path / "out"
        assert main(["steer", "--config", str(path), "--out", str(out)]) == 2
        assert not out.exists()

    def test_schema_violation(self, scenario_file, tmp_path):
        """Unknown keys fail validation."""
        payload = {**trivial_steer(), "learning_rate": 0.1}
        out = tmp_path / "out"
        assert main(["steer", "--config", str(scenario_file(payload)), "--out", str(out)]) == 2
        assert not out.exists()

    def test_scenario_for_other_command(self, scenario_file, tmp_path):
        """A train scenario given to steer exits 2."""
        payload = {
            "command": "train",
            "family": "product-gh:2,1",
            "points": [[0.0, 0.0]],
            "labels": [0.0],
        }
        out = tmp_path / "out"
        assert main(["steer", "--config", str(scenario_file(payload)), "--out", str(out)]) == 2

    def test_duplicate_points(self, scenario_file, tmp_path):
        """Coinciding sources are a usage error."""
        payload = {**trivial_steer(), "points": [[0.5, 0.5], [0.5, 0.5]]}
        out = tmp_path / "out"
        assert main(["steer", "--config", str(scenario_file(payload)), "--out", str(out)]) == 2

    def test_off_sphere_points_rejected(self, scenario_file, tmp_path):
        """Sphere sources must already have unit norm; they are not rescaled."""
        payload = {
            **trivial_steer(),
            "family": "sphere:symp",
            "points": [[2.0, 0.0, 0.0], [0.0, 0.0, 3.0]],
        }
        out = tmp_path / "out"
        assert main(["steer", "--config", str(scenario_file(payload)), "--out", str(out)]) == 2
        assert not out.exists()

    def test_artifacts_are_reproducible(self, scenario_file, tmp_path):
        """Two runs of one scenario write byte-identical artifacts."""
        path = scenario_file(short_steer())
        first, second = tmp_path / "a", tmp_path / "b"
        main(["steer", "--config", str(path), "--out", str(first)])
        main(["steer", "--config", str(path), "--out", str(second)])
        names = sorted(p.name for p in first.iterdir())
        assert names == sorted(p.name for p in second.iterdir())
        for name in names:
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_artifacts_carry_config_hash(self, scenario_file, tmp_path):
        """Every artifact names the tool and the scenario hash."""
        path = scenario_file(trivial_steer())
        out = tmp_path / "out"
        main(["steer", "--config", str(path), "--out", str(out)])
        digest = config_hash(load_scenario(path, "steer"))
        lines = (out / "schedule.csv").read_text(encoding="utf-8").splitlines()
        assert lines[0].startswith("# tool=ensemble-control")
        assert lines[1] == f"# config_sha256={digest}"
        meta = json.loads((out / "summary.json").read_text(encoding="utf-8"))["meta"]
        assert meta["config_sha256"] == digest

    def test_seed_override_changes_hash(self, scenario_file):
        """--seed is part of the hashed configuration."""
        path = scenario_file(short_steer())
        assert config_hash(load_scenario(path, "steer")) != config_hash(
            load_scenario(path, "steer", seed=99)
        )

    def test_toml_scenario(self, tmp_path):
        """TOML scenarios load like JSON ones."""
        path = tmp_path / "scenario.toml"
        path.write_text(
            'command = "steer"\nfamily = "torus:1"\npoints = [[0.5], [2.0]]\n'
            'target_rule = "identity"\n',
            encoding="utf-8",
        )
        scenario = load_scenario(path, "steer")
        assert scenario.family == "torus:1"

    @pytest.mark.slow
    def test_committed_gh_scenario(self, tmp_path):
        """The planar steering fixture reaches its tolerance."""
        out = tmp_path / "out"
        assert main(["steer", "--config", str(FIXTURES / "gh_steering.json"), "--out", str(out)]) == 0


@pytest.mark.integration
class TestTrain:
    """Test the train command."""

    def test_label_at_base_point(self, scenario_file, tmp_path):
        """A single point labelled nu is already classified."""
        payload = {
            "command": "train",
            "family": "product-gh:2,1",
            "points": [[0.2, 0.3]],
            "labels": [0.0],
        }
        out = tmp_path / "out"
        assert main(["train", "--config", str(scenario_file(payload)), "--out", str(out)]) == 0
        summary = read_data(out / "summary.json")
        assert summary["accuracy"] == 1.0
        assert (out / "predictions.csv").exists()

    def test_empty_points(self, scenario_file, tmp_path):
        """No training points is a usage error with no artifacts."""
        payload = {"command": "train", "family": "product-gh:2,1", "points": [], "labels": []}
        out = tmp_path / "out"
        assert main(["train", "--config", str(scenario_file(payload)), "--out", str(out)]) == 2
        assert not out.exists()

    def test_label_count_checked(self, scenario_file, tmp_path):
        """One label per point."""
        payload = {
            "command": "train",
            "family": "product-gh:2,1",
            "points": [[0.0, 0.0], [1.0, 1.0]],
            "labels": [0.0],
        }
        assert main(["train", "--config", str(scenario_file(payload)), "--out", str(tmp_path)]) == 2


class TestFixtures:
    """The committed scenarios are valid."""

    @pytest.mark.parametrize(
        "name, command",
        [
            ("gh_steering.json", "steer"),
            ("torus_steering.json", "steer"),
            ("two_moons_training.json", "train"),
        ],
    )
    def test_fixture_validates(self, name, command):
        scenario = load_scenario(FIXTURES / name, command)
        assert scenario.command == command

    def test_missing_file(self, tmp_path):
        with pytest.raises(ScenarioConfigError):
            load_scenario(tmp_path / "absent.json", "steer")


class TestVerifyAndApprox:
    """Test the verify and approx commands."""

    def test_geometry_suite(self, tmp_path):
        """The geometry properties hold and are reported."""
        assert main(["verify", "geometry", "--out", str(tmp_path)]) == 0
        report = read_data(tmp_path / "verify_geometry.json")
        assert report["suite"] == "geometry"
        assert all(r["status"] == "pass" for r in report["results"])

    def test_bracket_divergence_check_with_equal_degrees(self):
        """The bracket-divergence property passes, including pairs of equal degree."""
        result = check_gradient_bracket_divergence()
        assert result.status == "pass"
        assert result.detail["euler_form_error"] < MIXED_TOL
        assert result.detail["surface_form_error"] < MIXED_TOL

    def test_unknown_suite(self, tmp_path):
        """Unknown suites exit 2 without a report."""
        assert cmd_verify("topology", tmp_path) == 2
        assert not (tmp_path / "verify_topology.json").exists()

    def test_hermite_ladder(self, tmp_path):
        """approx writes one CSV and one JSON per basis."""
        code = main(
            ["approx", "--basis", "hermite", "--orders", "4", "8", "--out", str(tmp_path)]
        )
        assert code == 0
        rows = (tmp_path / "approx_hermite.csv").read_text(encoding="utf-8").splitlines()
        assert rows[2] == "n,sup_error,deriv_sup,ell"
        assert len(rows) == 5
        assert len(read_data(tmp_path / "approx_hermite.json")) == 2

    def test_bad_orders(self, tmp_path):
        """Orders must be positive."""
        assert cmd_approx(tmp_path, bases=["fourier"], orders=[0, 4]) == 2
        assert not (tmp_path / "approx_fourier.csv").exists()
