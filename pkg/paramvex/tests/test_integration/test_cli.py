"""
Integration tests for the command line
"""
import csv
import io
import json

import pytest

from paramvex.services.catalog import catalog

CATALOG_IDS = [instance.id for instance in catalog()]


def _rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_catalog_listing(run_cli):
    """Test the catalog sub-command"""
    code, out = run_cli(["catalog"])
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 9
    assert lines[0].split("\t")[:3] == ["P-LIN", "n=1", "m=1"]
    assert "pathology=non-closed-valued F_phi" in out


class TestSweep:
    def test_instance_default_grid(self, run_cli):
        """Test a 101-point sweep of P-LIN"""
        code, out = run_cli(["sweep", "--instance", "P-LIN"])
        assert code == 0
        rows = _rows(out)
        assert rows[0] == ["y_1", "status", "value"]
        assert len(rows) == 102
        assert rows[1][:2] == ["-1.0", "optimal"]
        assert float(rows[1][2]) == pytest.approx(-1.0)
        assert float(rows[-1][2]) == pytest.approx(1.0)

    def test_infeasible_rows_have_empty_values(self, run_cli):
        """Test P-INT, where y < 0 is outside dom F"""
        code, out = run_cli(["sweep", "--instance", "P-INT"])
        assert code == 0
        rows = _rows(out)[1:]
        negative = [row for row in rows if float(row[0]) < 0]
        assert negative and all(row[1:] == ["infeasible", ""] for row in negative)

    def test_custom_program(self, run_cli, write_json, max_of_two_definition, tmp_path):
        """Test a scenario with a two-dimensional program definition"""
        write_json("max.json", max_of_two_definition)
        scenario = write_json(
            "scenario.json",
            {
                "program": {"definition": "max.json"},
                "grid": {"box": {"lower": [-1.0, -1.0], "upper": [1.0, 1.0]}, "points_per_dim": 3},
            },
        )
        out_path = tmp_path / "sweep.csv"
        code, out = run_cli(["sweep", "--config", str(scenario), "--out", str(out_path)])
        assert code == 0
        assert out == ""
        rows = _rows(out_path.read_text(encoding="utf-8"))
        assert rows[0] == ["y_1", "y_2", "status", "value"]
        assert [row[:2] for row in rows[1:4]] == [["-1.0", "-1.0"], ["-1.0", "0.0"], ["-1.0", "1.0"]]
        assert len(rows) == 10
        for row in rows[1:]:
            assert float(row[3]) == pytest.approx(max(float(row[0]), float(row[1])))

    def test_scenario_output_next_to_scenario(self, run_cli, write_json, tmp_path):
        """Test that outputs.csv is written relative to the scenario file"""
        scenario = write_json(
            "scenario.json", {"program": {"instance": "P-LIN"}, "outputs": {"csv": "lin.csv"}}
        )
        code, out = run_cli(["sweep", "--config", str(scenario)])
        assert code == 0
        assert out == ""
        assert len(_rows((tmp_path / "lin.csv").read_text(encoding="utf-8"))) == 102

    @pytest.mark.parametrize(
        "argv",
        [
            ["sweep", "--config", "does-not-exist.json"],
            ["sweep", "--instance", "P-NOPE"],
            ["sweep"],
            ["sweep", "--instance", "P-LIN", "--config", "x.json"],
            ["--tol", "nope", "catalog"],
        ],
    )
    def test_configuration_errors(self, run_cli, argv):
        """Test exit code 2 on configuration problems"""
        code, out = run_cli(argv)
        assert code == 2
        assert out == ""

    def test_invalid_definition(self, run_cli, write_json):
        """Test a program definition with a non-PSD quadratic"""
        write_json(
            "bad.json",
            {
                "n": 1,
                "m": 1,
                "cost": {"kind": "quadratic", "Q": [[-1.0, 0.0], [0.0, 0.0]], "g": [0.0, 0.0]},
            },
        )
        scenario = write_json(
            "scenario.json",
            {"program": {"definition": "bad.json"}, "grid": {"box": {"lower": [0], "upper": [1]}}},
        )
        code, _ = run_cli(["sweep", "--config", str(scenario)])
        assert code == 2

    @pytest.mark.parametrize(
        "argv",
        [
            ["sweep", "--instance", "P-LIN", "--seed", "3"],
            ["sweep", "--instance", "P-LIN", "--tol", "strict", "--log-level", "ERROR"],
            ["--seed", "3", "sweep", "--instance", "P-LIN"],
        ],
    )
    def test_shared_options_after_sub_command(self, run_cli, argv):
        """Test that --seed, --tol and --log-level work on either side of the sub-command"""
        code, out = run_cli(argv)
        assert code == 0
        assert len(_rows(out)) == 102


class TestCheck:
    @pytest.mark.slow
    @pytest.mark.parametrize("instance_id", CATALOG_IDS)
    def test_catalog_instances_succeed(self, run_cli, instance_id):
        """Test that every instance yields passes or its declared verdicts"""
        code, out = run_cli(["check", "--instance", instance_id])
        report = json.loads(out)
        assert code == 0, [(c["name"], c["verdict"]) for c in report["checks"]]
        assert report["instance"] == instance_id
        for check in report["checks"]:
            assert check["verdict"] == "pass" or check["expected"] is True

    @pytest.mark.slow
    @pytest.mark.parametrize("instance_id", CATALOG_IDS)
    def test_report_is_deterministic(self, run_cli, tmp_path, instance_id):
        """Test byte-identical reports for a fixed seed"""
        first, second = tmp_path / "first.json", tmp_path / "second.json"
        for path in (first, second):
            run_cli(["--seed", "11", "check", "--instance", instance_id, "--out", str(path)])
        assert first.read_bytes() == second.read_bytes()
        assert json.loads(first.read_text(encoding="utf-8"))["seed"] == 11

    def test_seed_after_sub_command(self, run_cli, tmp_path):
        """Test that --seed given after the sub-command reaches the report"""
        out_path = tmp_path / "report.json"
        code, _ = run_cli(["check", "--instance", "P-RELU", "--seed", "11", "--out", str(out_path)])
        assert code == 0
        assert json.loads(out_path.read_text(encoding="utf-8"))["seed"] == 11

    def test_wrong_known_constant_fails(self, run_cli, write_json):
        """Test exit code 1 when the Lipschitz estimate exceeds the known constant"""
        scenario = write_json(
            "scenario.json",
            {
                "program": {"instance": "P-LIN"},
                "checks": ["lipschitz"],
                "lipschitz": {"known": 0.5},
            },
        )
        code, out = run_cli(["check", "--config", str(scenario)])
        assert code == 1
        check = json.loads(out)["checks"][0]
        assert check["verdict"] == "fail"
        assert check["witness"]["known"] == 0.5

    def test_improper_theorem2_fails(self, run_cli, write_json):
        """Test that forcing theorem2 on P-UNB reports the properness failure"""
        scenario = write_json(
            "scenario.json", {"program": {"instance": "P-UNB"}, "checks": ["theorem2"]}
        )
        code, out = run_cli(["check", "--config", str(scenario)])
        assert code == 1
        assert json.loads(out)["checks"][0]["details"]["property"] == "properness"

    def test_tolerance_profile(self, run_cli, write_json):
        """Test that --tol selects the report tolerances"""
        scenario = write_json(
            "scenario.json", {"program": {"instance": "P-ZERO"}, "checks": ["equivalence"]}
        )
        code, out = run_cli(["--tol", "loose", "check", "--config", str(scenario)])
        assert code == 0
        assert json.loads(out)["tolerances"]["value_eps"] == 1e-5

    def test_tolerance_profile_after_sub_command(self, run_cli, write_json):
        """Test --tol given after the sub-command"""
        scenario = write_json(
            "scenario.json", {"program": {"instance": "P-ZERO"}, "checks": ["equivalence"]}
        )
        code, out = run_cli(["check", "--config", str(scenario), "--tol", "loose"])
        assert code == 0
        assert json.loads(out)["tolerances"]["value_eps"] == 1e-5


class TestAttainment:
    @pytest.fixture
    def exp_neg_definition(self):
        # min exp(-x) s.t. x >= y
        return {
            "name": "exp-tail",
            "n": 1,
            "m": 1,
            "cost": {"kind": "builtin", "name": "exp_neg"},
            "feasible": {"A": [[-1.0]], "B": [[-1.0]], "c": [0.0]},
        }

    def _scenario(self, write_json, checks):
        return write_json(
            "scenario.json",
            {
                "program": {"definition": "exp.json"},
                "grid": {"box": {"lower": [-1.0], "upper": [1.0]}, "points_per_dim": 5},
                "checks": checks,
                "graph": {"y_count": 5, "mu_per_y": 10, "mu_range": [-1.0, 3.0]},
            },
        )

    def test_undeclared_tail_is_an_error(self, run_cli, write_json, exp_neg_definition):
        """Test exit code 2 when a finite tail infimum is not declared"""
        write_json("exp.json", exp_neg_definition)
        scenario = self._scenario(write_json, ["equivalence"])
        code, out = run_cli(["check", "--config", str(scenario)])
        assert code == 2
        assert out == ""

    def test_declared_everywhere(self, run_cli, write_json, exp_neg_definition):
        """Test that an attainment section lets the tail infimum through"""
        write_json("exp.json", {**exp_neg_definition, "attainment": {"everywhere": True}})
        scenario = self._scenario(write_json, ["equivalence", "graph-epigraph"])
        code, out = run_cli(["check", "--config", str(scenario)])
        assert code == 0
        report = json.loads(out)
        assert [check["verdict"] for check in report["checks"]] == ["pass", "pass"]

    def test_declared_regions(self, run_cli, write_json, exp_neg_definition, tmp_path):
        """Test a region list covering the sweep box"""
        write_json(
            "exp.json",
            {
                **exp_neg_definition,
                "attainment": {"regions": [{"lower": [-2.0], "upper": [2.0]}]},
            },
        )
        scenario = self._scenario(write_json, ["equivalence"])
        out_path = tmp_path / "sweep.csv"
        code, _ = run_cli(["sweep", "--config", str(scenario), "--out", str(out_path)])
        assert code == 0
        rows = _rows(out_path.read_text(encoding="utf-8"))[1:]
        assert len(rows) == 5
        assert all(row[1:] == ["not_attained", ""] for row in rows)
