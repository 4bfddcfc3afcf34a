import json
import numpy as np
import pytest
from cli import main
from estimator import Ar1Spec, simulate_ar1


@pytest.fixture
def series_file(write_csv):
    values = simulate_ar1(Ar1Spec(n=200, seed=3)).values
    return write_csv("value\n" + "\n".join(repr(float(v)) for v in values) + "\n")


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCommands:
    def test_simulate_is_deterministic(self, capsys):
        code, first, _ = run(capsys, ["simulate", "--n", "50", "--seed", "3"])
        _, second, _ = run(capsys, ["simulate", "--n", "50", "--seed", "3"])
        assert code == 0 and first == second
        lines = first.splitlines()
        assert lines[0] == "value" and len(lines) == 51

    def test_quantile(self, capsys, series_file):
        code, out, _ = run(capsys, ["quantile", "--input", series_file, "--at", "0.0", "--tau", "0.5"])
        payload = json.loads(out)
        assert code == 0
        assert set(payload) == {"tau", "value", "effective_n", "h", "status"}

    def test_interval(self, capsys, series_file):
        code, out, _ = run(capsys, ["interval", "--input", series_file, "--at", "0.5", "--alpha", "0.1"])
        payload = json.loads(out)
        assert code == 0 and payload["lower"] <= payload["upper"] and payload["level"] == 0.9

    def test_weights_csv_with_footer(self, capsys, series_file):
        code, out, _ = run(capsys, ["weights", "--input", series_file, "--at", "0.0", "--bandwidth", "1.0"])
        lines = out.splitlines()
        assert code == 0
        assert lines[0] == "index,Y,a,p" and len(lines) == 1 + 199 + 1
        footer = json.loads(lines[-1])
        assert footer["status"] == "solved"
        assert sum(float(line.split(",")[3]) for line in lines[1:-1]) == pytest.approx(1.0)

    def test_fit_cdf_writes_plot_data(self, capsys, series_file, tmp_path):
        output = str(tmp_path / "curve.csv")
        code, out, _ = run(capsys, ["fit-cdf", "--input", series_file, "--at", "0.0", "1.0",
                                    "--grid=-3:3:7", "--output", output])
        assert code == 0 and out == ""
        with open(output, encoding="utf-8") as handle:
            lines = handle.read().splitlines()
        assert lines[0] == "y,z,Fhat" and len(lines) == 1 + 2 * 7
        with open(output + ".json", encoding="utf-8") as handle:
            assert json.loads(handle.read())["y"] == [0.0, 1.0]

    def test_backtest_is_byte_identical(self, capsys, series_file):
        _, first, _ = run(capsys, ["backtest", "--input", series_file, "--holdout", "5"])
        _, second, _ = run(capsys, ["backtest", "--input", series_file, "--holdout", "5"])
        assert first == second
        lines = first.splitlines()
        assert lines[0] == "index,true_value,lower,upper,contained,h,status" and len(lines) == 7
        assert "hit_rate" in json.loads(lines[-1])

    @pytest.mark.parametrize("method", ["rot", "plugin", "cv"])
    def test_bandwidth(self, capsys, series_file, method):
        code, out, _ = run(capsys, ["bandwidth", "--input", series_file, "--method", method, "--tau", "0.5"])
        payload = json.loads(out)
        assert code == 0 and payload["method"] == method and payload["h"] > 0

    def test_explain_goes_to_stderr(self, capsys, series_file):
        code, out, err = run(capsys, ["quantile", "--input", series_file, "--at", "0.0", "--explain"])
        assert code == 0 and "rule of thumb" in err and "Selected h" in err
        json.loads(out)

    def test_output_to_file(self, capsys, tmp_path):
        output = tmp_path / "series.json"
        code, out, _ = run(capsys, ["simulate", "--n", "20", "--format", "json", "--output", str(output)])
        assert code == 0 and out == ""
        assert len(json.loads(output.read_text(encoding="utf-8"))["values"]) == 20

    @pytest.mark.parametrize("method", ["plugin", "cv"])
    def test_backtest_bandwidth_method(self, capsys, series_file, method):
        code, out, _ = run(capsys, ["backtest", "--input", series_file, "--holdout", "3", "--method", method])
        lines = out.splitlines()
        assert code == 0 and len(lines) == 5
        assert json.loads(lines[-1])["method"] == method

    @pytest.mark.parametrize("command", [["quantile", "--tau", "0.5"], ["interval", "--alpha", "0.1"]])
    def test_csv_format_for_single_results(self, capsys, series_file, command):
        code, out, _ = run(capsys, [command[0], "--input", series_file, "--at", "0.0", "--format", "csv"] + command[1:])
        header, row = out.splitlines()
        assert code == 0 and header.startswith(command[1][2:] + ",")
        assert len(header.split(",")) == len(row.split(","))

    def test_interval_auto_bandwidth_doubles_rule_of_thumb(self, capsys, series_file):
        _, quantile_out, _ = run(capsys, ["quantile", "--input", series_file, "--at", "0.0"])
        _, interval_out, _ = run(capsys, ["interval", "--input", series_file, "--at", "0.0"])
        assert json.loads(interval_out)["h"] == pytest.approx(2.0 * json.loads(quantile_out)["h"])

    def test_coverage_report(self, capsys):
        code, out, _ = run(capsys, ["coverage", "--n", "120", "--reps", "4", "--holdout", "2", "--seed", "1"])
        payload = json.loads(out)
        assert code == 0 and payload["trials"] + payload["skipped"] == 8


class TestExitCodes:
    def test_usage_error(self, capsys, series_file):
        code, _, err = run(capsys, ["interval", "--input", series_file, "--at", "0.0", "--alpha", "1.5"])
        assert code == 2 and json.loads(err.splitlines()[-1])["error"] == "InvalidAlpha"

    def test_argument_error(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["quantile", "--input", "x.csv", "--at", "0", "--kernel", "gaussian"])
        assert info.value.code == 2

    def test_data_error(self, capsys, tmp_path):
        code, _, err = run(capsys, ["quantile", "--input", str(tmp_path / "missing.csv"), "--at", "0.0"])
        assert code == 3 and json.loads(err.splitlines()[-1])["error"] == "DataFileNotFound"

    def test_unwritable_output_is_a_data_error(self, capsys, tmp_path):
        code, _, err = run(capsys, ["simulate", "--n", "20", "--output", str(tmp_path / "missing" / "out.csv")])
        assert code == 3 and json.loads(err.splitlines()[-1])["error"] == "EmitError"

    def test_numerical_error(self, capsys, series_file):
        code, _, err = run(capsys, ["quantile", "--input", series_file, "--at", "100", "--bandwidth", "0.1"])
        assert code == 4 and json.loads(err.splitlines()[-1])["error"] == "NoLocalData"
