"""Command-line harness: outcome tables, file outputs, determinism, errors."""

import csv
import json
import math

import pytest
from click.testing import CliRunner

from qubuslab.cli import GROWTH_CSV_COLUMNS, main, parse_amount


@pytest.fixture
def runner():
    return CliRunner()


class TestParseAmount:
    def test_plain_float(self):
        assert parse_amount("0.25") == 0.25

    def test_sqrt_pi_fraction(self):
        assert parse_amount("sqrt(pi/8)") == pytest.approx(math.sqrt(math.pi / 8))

    def test_pi_fraction(self):
        assert parse_amount("pi/4") == pytest.approx(math.pi / 4)

    def test_garbage_rejected(self):
        import click

        with pytest.raises(click.BadParameter):
            parse_amount("eleven")


class TestGateCommand:
    def test_three_qubit_table(self, runner):
        result = runner.invoke(
            main, ["gate", "three-qubit", "--alpha", "1000", "--theta", "0.003"]
        )
        assert result.exit_code == 0
        assert "ghz" in result.output
        assert "0.250000000" in result.output
        assert "0.125000000" in result.output

    def test_degenerate_regime_warns(self, runner):
        result = runner.invoke(
            main, ["gate", "parity-momentum", "--alpha", "1", "--theta", "0"]
        )
        assert result.exit_code == 0
        assert "0.5" in result.output  # error budget shows 1/2
        assert "warning" in result.output.lower()

    def test_chain_stabilizer_check(self, runner):
        result = runner.invoke(
            main, ["gate", "chain", "--n", "5", "--beta", "sqrt(pi/8)"]
        )
        assert result.exit_code == 0
        assert "stabilizer check: PASS" in result.output

    def test_star_with_custom_graph_file(self, runner, tmp_path):
        graph = tmp_path / "star.txt"
        graph.write_text("0 1\n0 2\n0 3\n")
        result = runner.invoke(
            main,
            ["gate", "star", "--n", "4", "--beta", "sqrt(pi/8)",
             "--graph", str(graph)],
        )
        assert result.exit_code == 0
        assert "PASS" in result.output

    def test_star_wrong_graph_fails(self, runner, tmp_path):
        graph = tmp_path / "chain.txt"
        graph.write_text("0 1\n1 2\n2 3\n")
        result = runner.invoke(
            main,
            ["gate", "star", "--n", "4", "--beta", "sqrt(pi/8)",
             "--graph", str(graph)],
        )
        assert result.exit_code != 0

    def test_csv_output(self, runner, tmp_path):
        out = tmp_path / "outcomes.csv"
        result = runner.invoke(
            main,
            ["gate", "parity-momentum", "--alpha", "1000", "--theta", "0.003",
             "--csv", str(out)],
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(out.open()))
        assert {r["label"] for r in rows} == {"odd-bell", "product-00", "product-11"}

    def test_invalid_alpha_rejected(self, runner):
        result = runner.invoke(
            main, ["gate", "parity-momentum", "--alpha", "-3", "--theta", "0.1"]
        )
        assert result.exit_code != 0

    def test_config_file_with_flag_override(self, runner, tmp_path):
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"alpha": 1000.0, "theta": 0.5}))
        result = runner.invoke(
            main,
            ["gate", "parity-momentum", "--config", str(cfg), "--theta", "0.003"],
        )
        assert result.exit_code == 0
        # flag overrides the file: the budget reflects theta = 0.003
        assert "1.3499e-03" in result.output


class TestGrowthCommand:
    def test_vertical_run_csv_columns(self, runner, tmp_path):
        out = tmp_path / "agg.csv"
        result = runner.invoke(
            main,
            ["growth", "vertical_link", "--p", "0.75", "--trials", "4000",
             "--seed", "3", "--csv", str(out)],
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(out.open()))
        assert list(rows[0]) == list(GROWTH_CSV_COLUMNS)
        assert float(rows[0]["mean_ops"]) == pytest.approx(4.0 / 3.0, rel=0.05)

    def test_sequential_stats_and_jsonl(self, runner, tmp_path):
        jsonl = tmp_path / "trials.jsonl"
        result = runner.invoke(
            main,
            ["growth", "sequential", "--p", "0.75", "--L", "21",
             "--trials", "500", "--seed", "7", "--jsonl", str(jsonl)],
        )
        assert result.exit_code == 0
        records = [json.loads(line) for line in jsonl.read_text().splitlines()]
        assert len(records) == 500
        assert records[0]["config"]["p"] == 0.75
        assert records[0]["config"]["target_L"] == 21

    def test_rejected_config_exits_nonzero(self, runner):
        result = runner.invoke(
            main, ["growth", "sequential", "--p", "0.4", "--L", "10",
                   "--trials", "10", "--seed", "0"],
        )
        assert result.exit_code != 0
        assert "does not terminate" in result.output

    @pytest.mark.parametrize(
        "args",
        [
            ["growth", "vertical_link", "--p", "1.5", "--trials", "10"],
            ["growth", "vertical_link", "--p", "0.5", "--trials", "0"],
        ],
    )
    def test_out_of_range_parameters_rejected(self, runner, args):
        result = runner.invoke(main, args)
        assert result.exit_code != 0

    def test_seed_determinism_across_threads(self, runner, tmp_path):
        outputs = []
        for threads in ("1", "3"):
            csv_path = tmp_path / f"t{threads}.csv"
            jsonl_path = tmp_path / f"t{threads}.jsonl"
            result = runner.invoke(
                main,
                ["growth", "sequential", "--p", "0.75", "--L", "15",
                 "--trials", "400", "--seed", "11", "--threads", threads,
                 "--csv", str(csv_path), "--jsonl", str(jsonl_path)],
            )
            assert result.exit_code == 0
            outputs.append((csv_path.read_bytes(), jsonl_path.read_bytes()))
        assert outputs[0] == outputs[1]

    def test_seed_from_environment(self, runner, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            result = runner.invoke(
                main,
                ["growth", "vertical_link", "--p", "0.5", "--trials", "200",
                 "--csv", str(path)],
                env={"QUBUSLAB_SEED": "424242"},
            )
            assert result.exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_config_file_growth(self, runner, tmp_path):
        cfg = tmp_path / "growth.json"
        cfg.write_text(json.dumps(
            {"p": 0.75, "target_L": 11, "trials": 100, "master_seed": 5}
        ))
        result = runner.invoke(
            main, ["growth", "sequential", "--config", str(cfg)]
        )
        assert result.exit_code == 0
        assert "sequential,0.75,11,100" in result.output


class TestScalingCommand:
    def test_table_rows(self, runner, tmp_path):
        out = tmp_path / "table.csv"
        result = runner.invoke(
            main,
            ["scaling", "--p", "0.75", "--l-min", "5", "--l-max", "300",
             "--series", "dc,merge,seq", "--csv", str(out)],
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(out.open()))
        table = {(int(r["L"]), r["series"]): float(r["value"]) for r in rows}
        # the doubling strategy is cheaper below the crossover, dearer above
        assert table[(100, "dc")] < table[(100, "merge")]
        assert table[(300, "dc")] > table[(300, "merge")]
        assert table[(100, "seq")] < table[(100, "dc")]

    def test_time_metric_ordering(self, runner, tmp_path):
        out = tmp_path / "times.csv"
        result = runner.invoke(
            main,
            ["scaling", "--p", "0.75", "--l-min", "50", "--l-max", "200",
             "--series", "dc,merge,seq", "--metric", "T", "--csv", str(out)],
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(out.open()))
        table = {(int(r["L"]), r["series"]): float(r["value"]) for r in rows}
        assert table[(200, "dc")] < table[(200, "merge")] < table[(200, "seq")]

    def test_single_point(self, runner, tmp_path):
        out = tmp_path / "one.csv"
        result = runner.invoke(
            main,
            ["scaling", "--p", "0.75", "--l-min", "41", "--l-max", "41",
             "--series", "seq", "--csv", str(out)],
        )
        rows = list(csv.DictReader(out.open()))
        assert len(rows) == 1
        assert float(rows[0]["value"]) == pytest.approx(80.0)

    def test_svg_output(self, runner, tmp_path):
        svg = tmp_path / "plot.svg"
        result = runner.invoke(
            main,
            ["scaling", "--p", "0.75", "--l-min", "5", "--l-max", "100",
             "--series", "dc,merge", "--svg", str(svg)],
        )
        assert result.exit_code == 0
        text = svg.read_text()
        assert text.startswith("<svg")
        assert "polyline" in text and "</svg>" in text

    def test_unknown_series(self, runner):
        result = runner.invoke(main, ["scaling", "--series", "nonsense"])
        assert result.exit_code != 0


class TestVerifyCommand:
    def test_quick_suite_passes(self, runner):
        result = runner.invoke(main, ["verify", "--quick"])
        assert result.exit_code == 0, result.output
        assert "criterion 10" in result.output
        assert "FAIL" not in result.output.replace("FLAG", "")
        # the two quoted-constant discrepancies are reported, not failed
        assert "e^-16" in result.output
        assert "94, not 70" in result.output
