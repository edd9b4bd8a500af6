import csv
import io
import json
import math
import shutil
import subprocess
import sys

import pytest

from hgperiods.cli import CSV_HEADER, main, parse_complex, parse_fraction, parse_grid, ConfigError
from conftest import cval

REF = ["--alpha", "1/3", "--beta", "1/5", "--mu", "7/2", "--l", "2"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestEval:
    def test_reference_point(self, capsys, stored):
        code, out, _ = run(capsys, "eval", "--fn", "F_mu", "--alpha", "1/3", "--beta", "1/5", "--mu", "7/2", "--lambda", "0.5")
        assert code == 0
        data = json.loads(out)
        assert set(data) >= {"value_re", "value_im", "est_error", "terms_used"}
        want = cval(stored["cli_eval_F_mu"]["value"])
        assert abs(complex(data["value_re"], data["value_im"]) - want) < 1e-12
        assert 0 <= data["est_error"] < 1e-13 and data["terms_used"] > 0

    def test_hypothesis_violation(self, capsys):
        code, _, err = run(capsys, "eval", "--fn", "F_mu", "--mu", "1/3", "--alpha", "1/3", "--beta", "1/5", "--lambda", "0.5")
        assert code == 2 and "mu ≢ alpha (mod Z) violated" in err

    def test_integer_mu_names_q_chi(self, capsys):
        code, _, err = run(capsys, "eval", "--fn", "F_mu", "--mu", "3", "--alpha", "1/3", "--beta", "1/5", "--lambda", "0.5")
        assert code == 2 and "q_chi ≢ 0 (mod Z) violated" in err

    def test_decimal_parameter_rejected(self, capsys):
        code, _, err = run(capsys, "eval", "--fn", "H_mu", "--alpha", "0.3", "--beta", "1/5", "--mu", "7/2", "--lambda", "-1")
        assert code == 2 and "exact fractions" in err

    def test_domain_error_is_config_error(self, capsys):
        code, _, _ = run(capsys, "eval", "--fn", "H_mu", *REF, "--lambda", "0.5")
        assert code == 2

    def test_p1_gate(self, capsys):
        code, _, err = run(capsys, "eval", "--fn", "Q_m", *REF, "--p1", "0,0,1", "--lambda", "-1.4")
        assert code == 2 and "divide" in err

    def test_grid_csv(self, capsys):
        code, out, _ = run(capsys, "eval", "--fn", "G_mu", *REF, "--lambda-grid", "line:0.1:0.3+0.2j:5", "--format", "csv")
        rows = list(csv.reader(io.StringIO(out)))
        assert code == 0 and rows[0] == CSV_HEADER and len(rows) == 6

    def test_csv_json_agree(self, capsys):
        args = ["eval", "--fn", "H_mu", *REF, "--lambda-grid=-1.5;2.6+0.4i;-0.5-1.2j"]
        _, js, _ = run(capsys, *args)
        _, cs, _ = run(capsys, *args, "--format", "csv")
        points = json.loads(js)["points"]
        rows = list(csv.DictReader(io.StringIO(cs)))
        for p, r in zip(points, rows):
            assert float(r["value_re"]) == p["value_re"] and float(r["value_im"]) == p["value_im"]
            assert float(r["lambda_re"]) == p["lambda_re"]

    def test_seventeen_digits(self, capsys):
        _, cs, _ = run(capsys, "eval", "--fn", "F_mu", *REF, "--lambda", "0.5", "--format", "csv")
        row = list(csv.DictReader(io.StringIO(cs)))[0]
        mantissa = row["value_im"].lstrip("-").split("e")[0].replace(".", "").lstrip("0")
        assert len(mantissa) == 17


class TestVerify:
    def test_quick_suite(self, capsys):
        code, out, _ = run(capsys, "verify", "--suite", "diffop", "--scale", "quick")
        data = json.loads(out)
        assert code == 0 and data["failed"] == 0 and data["records"]

    def test_deterministic_output(self, capsys):
        args = ["verify", "--suite", "core", "--scale", "quick", "--seed", "5"]
        _, a, _ = run(capsys, *args, "--workers", "1")
        _, b, _ = run(capsys, *args, "--workers", "3")
        assert a == b

    def test_csv_json_round_trip(self, capsys):
        args = ["verify", "--check", "functions.kummer_real", "--scale", "quick"]
        _, js, _ = run(capsys, *args)
        _, cs, _ = run(capsys, *args, "--format", "csv")
        rows = list(csv.DictReader(io.StringIO(cs)))
        jrows = json.loads(js)["records"][0]["rows"]
        assert len(rows) == len(jrows)
        for r, j in zip(rows, jrows):
            assert float(r["residual"]) == j["residual"]
            if j["value"] is not None:
                assert float(r["value_re"]) == j["value"][0]

    def test_unknown_check(self, capsys):
        code, _, err = run(capsys, "verify", "--check", "nope")
        assert code == 2 and "nope" in err

    def test_failure_exit_code(self, capsys, monkeypatch):
        import dataclasses
        from hgperiods import verify as v

        def failing(ctx):
            return ctx.record([v.Row(None, None, 1.0)], 0.5, [])

        key = "core.gamma_identities"
        monkeypatch.setitem(v.CHECKS, key, dataclasses.replace(v.CHECKS[key], run=failing))
        code, out, _ = run(capsys, "verify", "--check", key, "--scale", "quick")
        assert code == 1 and json.loads(out)["failed"] == 1


class TestOtherCommands:
    def test_period_matrix(self, capsys):
        code, out, _ = run(capsys, "period-matrix", *REF)
        data = json.loads(out)
        assert code == 0 and data["nondegenerate"] and data["relative_det"] > 1e-10

    def test_regulator(self, capsys):
        code, out, _ = run(capsys, "regulator", *REF, "--n", "1")
        data = json.loads(out)
        assert code == 0 and data["pass"]
        assert data["C"]["0"] == "1/(λ - 1)" or "λ" in data["C"]["0"]
        assert abs(data["congruence"]["C_estimate"][0] - 0.5) < 1e-6

    def test_regulator_phi2(self, capsys):
        code, _, _ = run(capsys, "regulator", *REF, "--n", "1", "--variant", "phi2")
        assert code == 0

    def test_monodromy(self, capsys):
        code, out, _ = run(capsys, "monodromy", *REF)
        data = json.loads(out)
        assert code == 0 and data["product_error"] < 1e-5

    def test_fixtures_check(self, capsys, tmp_path):
        from conftest import FIXTURE_PATH

        code, out, _ = run(capsys, "fixtures", "--check", "--output", str(FIXTURE_PATH))
        assert code == 0 and json.loads(out)["mismatched"] == []

    def test_fixtures_write(self, capsys, tmp_path):
        target = tmp_path / "sub" / "derived.json"
        code, _, _ = run(capsys, "fixtures", "--output", str(target))
        assert code == 0 and target.exists()


class TestConfigAndIO:
    def test_config_file(self, capsys, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("command = eval\nfn = F_mu\nalpha = 1/3\nbeta = 1/5\nmu = 7/2  # m/l\nl = 2\nlambda = 0.5\n")
        code, out, _ = run(capsys, "--config", str(cfg))
        assert code == 0 and abs(json.loads(out)["value_im"] + 0.025456683724956) < 1e-12

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("fn = F_mu\nalpha = 1/3\nbeta = 1/5\nmu = 7/2\nlambda = 0.5\n")
        code, out, _ = run(capsys, "eval", "--config", str(cfg), "--lambda", "0.6")
        assert code == 0 and json.loads(out)["lambda_re"] == 0.6

    def test_bad_config_line(self, capsys, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("command = eval\nthis line has no equals sign\n")
        code, _, _ = run(capsys, "--config", str(cfg))
        assert code == 2

    def test_negative_value_in_config(self, capsys, tmp_path):
        cfg = tmp_path / "job.cfg"
        cfg.write_text("command = eval\nfn = H_mu\nalpha = 1/3\nbeta = 1/5\nmu = 7/2\nlambda = -1.5\n")
        code, out, _ = run(capsys, "--config", str(cfg))
        assert code == 0 and json.loads(out)["lambda_re"] == -1.5

    def test_missing_config(self, capsys, tmp_path):
        code, _, _ = run(capsys, "--config", str(tmp_path / "absent.cfg"))
        assert code == 3

    def test_unwritable_output(self, capsys, tmp_path):
        code, _, _ = run(capsys, "eval", "--fn", "F_mu", *REF, "--lambda", "0.5", "--output", str(tmp_path / "no" / "x.json"))
        assert code == 3

    def test_usage_error(self, capsys):
        code, _, _ = run(capsys, "eval", "--fn", "nonsense")
        assert code == 2


class TestParsers:
    def test_fraction(self):
        assert parse_fraction("7/2").numerator == 7 and parse_fraction("-3") == -3
        with pytest.raises(ConfigError):
            parse_fraction("1e-3")

    def test_complex(self):
        assert parse_complex("0.5+0.2i") == 0.5 + 0.2j
        assert parse_complex("(1,-2)") == 1 - 2j

    def test_grid(self):
        assert len(parse_grid("circle:0.5:0.3:8")) == 8
        assert list(parse_grid("1;2j")) == [1, 2j]


@pytest.mark.skipif(shutil.which("hgperiods") is None, reason="console script not installed")
def test_console_script():
    out = subprocess.run(
        ["hgperiods", "eval", "--fn", "F_mu", "--alpha", "1/3", "--beta", "1/5", "--mu", "7/2", "--lambda", "0.5"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert math.isclose(json.loads(out.stdout)["value_im"], -0.025456683724956, rel_tol=1e-12)


def test_module_entry():
    out = subprocess.run([sys.executable, "-m", "hgperiods.cli", "verify", "--check", "nope"], capture_output=True, text=True)
    assert out.returncode == 2
