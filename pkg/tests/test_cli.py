import csv
import json
import math

import pytest

from harrisproc.cli import main
from harrisproc.validation import ValidationReport

E = math.e


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def parse_csv(text):
    metadata, data_lines = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            metadata[key] = value
        else:
            data_lines.append(line)
    parsed = list(csv.reader(data_lines))
    return metadata, parsed[0], parsed[1:]


class TestPmf:
    def test_geometric_table(self, capsys):
        code, out, _ = run_cli(
            ["pmf", "--m", "2", "--k", "1", "--tail", "1e-6"], capsys
        )
        assert code == 0
        metadata, header, rows = parse_csv(out)
        assert header == ["n", "x", "probability", "cumulative"]
        assert rows[0] == ["0", "1", "0.5", "0.5"]
        assert rows[1] == ["1", "2", "0.25", "0.75"]
        assert float(rows[-1][3]) >= 1.0 - 1e-6

    def test_header_records_induced_scale(self, capsys):
        code, out, _ = run_cli(
            ["pmf", "--lambda", "0.5", "--k", "2", "--t", "1"], capsys
        )
        assert code == 0
        metadata, _, _ = parse_csv(out)
        assert metadata["mode"] == "birth"
        assert float(metadata["m"]) == pytest.approx(E, rel=1e-15)

    def test_mixture_mode(self, capsys):
        code, out, _ = run_cli(["pmf", "--a", "1", "--k", "2", "--t", "1"], capsys)
        assert code == 0
        metadata, _, _ = parse_csv(out)
        assert float(metadata["m"]) == 2.0

    def test_invalid_scale_exits_nonzero_citing_constraint(self, capsys):
        code, _, err = run_cli(["pmf", "--m", "1.0", "--k", "2"], capsys)
        assert code != 0
        assert "m must be > 1" in err

    def test_exactly_one_parameter_mode(self, capsys):
        code, _, err = run_cli(
            ["pmf", "--m", "2", "--lambda", "1", "--k", "1", "--t", "1"], capsys
        )
        assert code != 0
        assert "exactly one" in err

    def test_csv_numerics_round_trip(self, capsys):
        _, out, _ = run_cli(["pmf", "--m", str(E), "--k", "3"], capsys)
        _, _, rows = parse_csv(out)
        for row in rows:
            for cell in row[2:]:
                assert repr(float(cell)) == cell

    def test_json_format(self, capsys):
        code, out, _ = run_cli(
            ["pmf", "--m", "2", "--k", "1", "--format", "json"], capsys
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        assert payload["rows"][0] == {"n": 0, "x": 1, "probability": 0.5,
                                      "cumulative": 0.5}


class TestPgf:
    def test_series_agreement(self, capsys):
        code, out, _ = run_cli(["pgf", "--m", "2", "--k", "1"], capsys)
        assert code == 0
        metadata, _, rows = parse_csv(out)
        assert float(metadata["max_abs_diff"]) < 1e-10
        assert rows[0][:2] == ["0.0", "0.0"]
        assert float(rows[-1][0]) == 1.0
        assert float(rows[-1][1]) == pytest.approx(1.0, abs=1e-12)


class TestSimulate:
    def test_birth_report(self, capsys):
        code, out, _ = run_cli(
            ["simulate", "--model", "birth", "--lambda", "0.5", "--k", "2",
             "--t", "1", "--replicas", "5000", "--seed", "42",
             "--format", "csv"],
            capsys,
        )
        assert code == 0
        metadata, header, rows = parse_csv(out)
        assert metadata["overall"] == "true"
        assert metadata["coupling_violations"] == "0"
        assert header == ["n", "x", "observed", "expected"]
        assert sum(int(r[2]) for r in rows) == 5000

    def test_mixture_json_report_round_trips(self, capsys):
        code, out, _ = run_cli(
            ["simulate", "--model", "mixture", "--a", "1", "--k", "2",
             "--t", "1", "--replicas", "20000", "--seed", "42"],
            capsys,
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["schema_version"] == 1
        report = ValidationReport.from_dict(payload["report"])
        assert report.overall
        assert report.scenario.model == "mixture"

    def test_zero_replicas_rejected(self, capsys):
        code, _, err = run_cli(
            ["simulate", "--model", "birth", "--lambda", "0.5", "--k", "2",
             "--t", "1", "--replicas", "0"],
            capsys,
        )
        assert code != 0
        assert "replicas" in err

    def test_threads_do_not_change_output(self, capsys):
        args = ["simulate", "--model", "birth", "--lambda", "0.5", "--k", "2",
                "--t", "1", "--replicas", "500", "--seed", "7", "--format", "csv"]
        _, out1, _ = run_cli(args + ["--threads", "1"], capsys)
        _, out4, _ = run_cli(args + ["--threads", "4"], capsys)
        assert out1 == out4

    def test_identical_invocations_are_byte_identical(self, tmp_path, capsys):
        # determinism holds whatever the verdict, so only exit-code equality
        # and byte equality are asserted
        for fmt in ("csv", "json"):
            codes, paths = [], [tmp_path / f"run{i}.{fmt}" for i in (1, 2)]
            for path in paths:
                code, out, _ = run_cli(
                    ["simulate", "--model", "birth", "--lambda", "0.5",
                     "--k", "2", "--t", "1", "--replicas", "2000",
                     "--seed", "42", "--format", fmt, "--out", str(path)],
                    capsys,
                )
                codes.append(code)
                assert out == ""
            assert codes[0] == codes[1]
            assert paths[0].read_bytes() == paths[1].read_bytes()


class TestOde:
    def test_matches_closed_form(self, capsys):
        code, out, _ = run_cli(
            ["ode", "--lambda", "0.5", "--k", "2", "--t", "1"], capsys
        )
        assert code == 0
        metadata, _, _ = parse_csv(out)
        assert float(metadata["max_abs_diff"]) < 1e-8

    def test_yule_furry_column(self, capsys):
        code, out, _ = run_cli(
            ["ode", "--lambda", "1", "--k", "1", "--t", "0.7"], capsys
        )
        assert code == 0
        _, _, rows = parse_csv(out)
        q = math.exp(-0.7)
        for row in rows[:10]:
            x = int(row[1])
            assert float(row[3]) == pytest.approx(q * (1 - q) ** (x - 1), rel=1e-12)

    def test_time_zero_single_row(self, capsys):
        code, out, _ = run_cli(
            ["ode", "--lambda", "0.5", "--k", "2", "--t", "0"], capsys
        )
        assert code == 0
        _, _, rows = parse_csv(out)
        assert rows == [["0", "1", "1.0", "1.0", "0.0"]]


class TestMixtureCheck:
    def test_quadrature_agreement(self, capsys):
        code, out, _ = run_cli(
            ["mixture-check", "--a", "2", "--k", "2", "--t", "1"], capsys
        )
        assert code == 0
        metadata, _, rows = parse_csv(out)
        assert float(metadata["max_abs_diff"]) < 1e-8
        assert len(rows) == 21

    def test_missing_mixing_rate(self, capsys):
        code, _, err = run_cli(["mixture-check", "--k", "2", "--t", "1"], capsys)
        assert code != 0
        assert "--a" in err


class TestValidate:
    def test_scaled_down_grid_passes(self, capsys):
        code, out, _ = run_cli(
            ["validate", "--replicas", "5000", "--mixture-draws", "20000",
             "--calibration-seeds", "25"],
            capsys,
        )
        assert code == 0
        metadata, header, rows = parse_csv(out)
        assert metadata["overall"] == "true"
        assert header == ["criterion", "name", "passed", "detail"]
        assert [row[0] for row in rows] == [str(i) for i in range(1, 10)]
        assert all(row[2] == "true" for row in rows)


class TestParser:
    def test_unknown_subcommand_rejected(self):
        with pytest.raises(SystemExit):
            main(["frobnicate"])

    def test_subcommand_required(self):
        with pytest.raises(SystemExit):
            main([])
