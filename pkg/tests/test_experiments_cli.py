import json
import math
import os
import subprocess
import sys

import pytest

from quintiq.experiments import SKIP_MARKER, experiment1, experiment2
from quintiq.scalars import DOUBLE, mp_context

from support import (
    PAPER_EXP1_CUBIC,
    PAPER_EXP1_QUINTIC,
    PAPER_EXP2_CUBIC,
    PAPER_EXP2_QUINTIC,
)

EXPECTED_EXP1_DOUBLE_CSV = (
    "epsilon,n_quintic,n_cubic\n"
    "1e-1,1,1\n"
    "1e-2,1,1\n"
    "1e-3,1,1\n"
    "1e-4,1,2\n"
    "1e-5,2,3\n"
    "1e-6,2,5\n"
    "1e-7,3,9\n"
    "1e-8,4,16\n"
    "1e-9,6,28\n"
    "1e-10,9,50\n"
    "1e-11,13,89\n"
    "1e-12,19,158\n"
    "1e-13,27,280\n"
    f"1e-14,{SKIP_MARKER},{SKIP_MARKER}\n"
    f"1e-15,{SKIP_MARKER},{SKIP_MARKER}\n"
    f"1e-16,{SKIP_MARKER},{SKIP_MARKER}\n"
)


def run_cli(*args, env_extra=None):
    env = dict(os.environ)
    env.pop("QUINTIQ_PRECISION", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "quintiq", *args],
        capture_output=True,
        text=True,
        env=env,
        timeout=300,
    )


class TestExperimentTables:
    def test_experiment1_dd_matches_paper(self, exp1_dd):
        rows, _elapsed = exp1_dd
        assert [r.n_quintic for r in rows] == PAPER_EXP1_QUINTIC
        assert [r.n_cubic for r in rows] == PAPER_EXP1_CUBIC
        assert [r.label for r in rows] == [f"1e-{k}" for k in range(1, 17)]

    def test_experiment2_dd_matches_paper(self, exp2_dd):
        rows, _elapsed = exp2_dd
        assert [r.n_quintic for r in rows] == PAPER_EXP2_QUINTIC
        assert [r.n_cubic for r in rows] == PAPER_EXP2_CUBIC

    def test_experiment1_double_skips_undecidable_rows(self):
        rows = experiment1(DOUBLE)
        assert [r.n_quintic for r in rows[:13]] == PAPER_EXP1_QUINTIC[:13]
        assert [r.n_cubic for r in rows[:13]] == PAPER_EXP1_CUBIC[:13]
        for r in rows[13:]:
            assert r.n_quintic is None and r.n_cubic is None

    def test_experiment2_double_matches_paper(self):
        rows = experiment2(DOUBLE)
        assert [r.n_quintic for r in rows] == PAPER_EXP2_QUINTIC
        assert [r.n_cubic for r in rows] == PAPER_EXP2_CUBIC

    def test_experiment_tables_mp40_match_paper(self):
        ctx = mp_context(40)
        rows1 = experiment1(ctx)
        assert [r.n_quintic for r in rows1] == PAPER_EXP1_QUINTIC
        assert [r.n_cubic for r in rows1] == PAPER_EXP1_CUBIC
        rows2 = experiment2(ctx)
        assert [r.n_quintic for r in rows2] == PAPER_EXP2_QUINTIC
        assert [r.n_cubic for r in rows2] == PAPER_EXP2_CUBIC


class TestCliIntegrate:
    def test_json_output_schema_and_values(self):
        r = run_cli(
            "integrate", "--fn", "1/x", "--a", "1", "--b", "2",
            "--eps", "1e-8", "--output", "json",
        )
        assert r.returncode == 0, r.stderr
        payload = json.loads(r.stdout)
        assert set(payload) == {
            "method", "value", "n_final", "gap_final", "epsilon",
            "evaluations", "history", "precision", "config",
        }
        assert payload["method"] == "quintic"
        assert payload["n_final"] == 4
        assert payload["precision"] == "double"
        assert isinstance(payload["value"], str)
        assert abs(float(payload["value"]) - math.log(2)) <= 1e-8
        assert payload["history"][0][0] == 1
        assert payload["config"]["fn"] == "1/x"

    def test_human_output(self):
        r = run_cli("integrate", "--fn", "exp(x)", "--a", "0", "--b", "1", "--eps", "1e-8")
        assert r.returncode == 0
        assert "n           2" in r.stdout
        assert "method      quintic" in r.stdout

    def test_cubic_method(self):
        r = run_cli(
            "integrate", "--fn", "exp(x)", "--a", "0", "--b", "1",
            "--eps", "1e-8", "--method", "cubic", "--output", "json",
        )
        payload = json.loads(r.stdout)
        assert payload["method"] == "cubic"
        assert payload["n_final"] == 12

    def test_trivial_polynomial(self):
        r = run_cli(
            "integrate", "--fn", "x^3", "--a", "0", "--b", "1",
            "--eps", "1e-12", "--output", "json",
        )
        payload = json.loads(r.stdout)
        assert payload["n_final"] == 1
        assert abs(float(payload["value"]) - 0.25) < 1e-12

    def test_doubling_strategy_flag(self):
        r = run_cli(
            "integrate", "--fn", "1/x", "--a", "1", "--b", "2",
            "--eps", "1e-8", "--strategy", "doubling", "--output", "json",
        )
        assert json.loads(r.stdout)["n_final"] == 4

    def test_dd_precision_flag_value_digits(self):
        r = run_cli(
            "integrate", "--fn", "1/x", "--a", "1", "--b", "2",
            "--eps", "1e-12", "--precision", "dd", "--output", "json",
        )
        payload = json.loads(r.stdout)
        assert payload["precision"] == "dd"
        assert payload["n_final"] == 19
        # dd value is a 30+ digit decimal within 1e-12 of ln 2
        digits = payload["value"].replace(".", "").lstrip("-0")
        assert len(digits) >= 28

    def test_env_var_precision_default_and_flag_override(self):
        r = run_cli(
            "integrate", "--fn", "1/x", "--a", "1", "--b", "2",
            "--eps", "1e-8", "--output", "json",
            env_extra={"QUINTIQ_PRECISION": "dd"},
        )
        assert json.loads(r.stdout)["precision"] == "dd"
        r = run_cli(
            "integrate", "--fn", "1/x", "--a", "1", "--b", "2",
            "--eps", "1e-8", "--output", "json", "--precision", "mp:20",
            env_extra={"QUINTIQ_PRECISION": "dd"},
        )
        assert json.loads(r.stdout)["precision"] == "mp:20"

    def test_verify_convexity_annotation(self):
        r = run_cli(
            "integrate", "--fn", "exp(x)", "--a", "0", "--b", "1",
            "--eps", "1e-6", "--verify-convexity", "--output", "json",
        )
        payload = json.loads(r.stdout)
        assert payload["convexity"]["verdict"] == "consistent-with-convex"

    def test_csv_output(self):
        r = run_cli(
            "integrate", "--fn", "1/x", "--a", "1", "--b", "2",
            "--eps", "1e-8", "--output", "csv",
        )
        lines = r.stdout.splitlines()
        assert lines[0] == "value,n_final,gap_final,epsilon,evaluations,method,precision"
        cells = lines[1].split(",")
        assert cells[1] == "4" and cells[5] == "quintic"


class TestCliExitCodes:
    def test_parse_error_is_1(self):
        r = run_cli("integrate", "--fn", "1+(", "--a", "1", "--b", "2")
        assert r.returncode == 1
        assert "error" in r.stderr

    def test_unknown_identifier_is_1(self):
        r = run_cli("integrate", "--fn", "sin(x)", "--a", "1", "--b", "2")
        assert r.returncode == 1
        assert "sin" in r.stderr

    def test_domain_error_is_2(self):
        r = run_cli("integrate", "--fn", "ln(x-5)", "--a", "1", "--b", "2")
        assert r.returncode == 2

    def test_invalid_interval_is_2(self):
        r = run_cli("integrate", "--fn", "1/x", "--a", "2", "--b", "1")
        assert r.returncode == 2
        assert "a < b" in r.stderr

    def test_budget_exceeded_is_3(self):
        r = run_cli(
            "integrate", "--fn", "1/x", "--a", "1", "--b", "2",
            "--eps", "1e-10", "--n-max", "3",
        )
        assert r.returncode == 3
        assert "best gap" in r.stderr

    def test_success_is_0(self):
        r = run_cli("integrate", "--fn", "1/x", "--a", "1", "--b", "2", "--eps", "1e-4")
        assert r.returncode == 0


class TestCliCheck:
    def test_check_convex_json(self):
        r = run_cli(
            "check", "--fn", "exp(x)", "--a", "0", "--b", "1", "--output", "json"
        )
        assert r.returncode == 0
        payload = json.loads(r.stdout)
        assert payload["sampled"]["verdict"] == "consistent-with-convex"
        assert payload["sixth_derivative"]["verdict"] == "consistent-with-convex"
        assert payload["sixth_derivative"]["min_divided_difference"] == pytest.approx(1.0)

    def test_check_human(self):
        r = run_cli("check", "--fn=-exp(x)", "--a", "0", "--b", "1")
        assert r.returncode == 0
        assert "consistent-with-concave" in r.stdout

    def test_check_symbolic_unavailable(self):
        # plus(x)^3 runs out of differentiability before order six
        r = run_cli(
            "check", "--fn", "plus(x)^3", "--a", "-1", "--b", "1", "--output", "json"
        )
        assert r.returncode == 0
        payload = json.loads(r.stdout)
        assert payload["sixth_derivative"] is None
        assert "differentiable" in payload["sixth_derivative_note"]

    def test_check_custom_order(self):
        r = run_cli(
            "check", "--fn", "x^2", "--a", "-1", "--b", "1",
            "--order", "1", "--output", "json",
        )
        payload = json.loads(r.stdout)
        assert payload["sampled"]["order"] == 1
        assert payload["sampled"]["verdict"] == "consistent-with-convex"
        assert payload["sixth_derivative"] is None


class TestCliExperiments:
    def test_experiment1_csv_golden_double(self):
        r = run_cli("experiment1", "--precision", "double", "--output", "csv")
        assert r.returncode == 0
        assert r.stdout == EXPECTED_EXP1_DOUBLE_CSV
        assert "\r" not in r.stdout

    def test_experiment1_csv_byte_stable(self):
        r1 = run_cli("experiment1", "--precision", "double", "--output", "csv")
        r2 = run_cli("experiment1", "--precision", "double", "--output", "csv")
        assert r1.stdout == r2.stdout

    def test_experiment2_csv_header_and_rows_double(self):
        r = run_cli("experiment2", "--precision", "double", "--output", "csv")
        lines = r.stdout.splitlines()
        assert lines[0] == "b,n_quintic,n_cubic"
        assert lines[1] == "1,2,12"
        assert lines[10] == "10,93,1244"

    def test_experiment_json(self):
        r = run_cli("experiment1", "--precision", "double", "--output", "json")
        payload = json.loads(r.stdout)
        assert payload["precision"] == "double"
        assert payload["rows"][7] == {"epsilon": "1e-8", "n_quintic": 4, "n_cubic": 16}
        assert payload["rows"][15]["n_quintic"] is None

    def test_experiment_human_table(self):
        r = run_cli("experiment1", "--precision", "double")
        assert "epsilon" in r.stdout.splitlines()[0]
        assert any("1e-8" in line and "4" in line for line in r.stdout.splitlines())
