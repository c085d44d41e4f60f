import json

import pytest
from click.testing import CliRunner

from refdesc.cli import main


@pytest.fixture
def runner():
    return CliRunner()


def make_graph(runner, tmp_path, name="g.json", p=0.1, nodes=120, seed=3):
    path = tmp_path / name
    result = runner.invoke(main, ["generate", "--kind", "er", "-n", str(nodes),
                                  "--p", str(p), "--seed", str(seed),
                                  "--out", str(path)])
    assert result.exit_code == 0, result.output
    return path


def make_named_graph(runner, tmp_path, **kw):
    raw = make_graph(runner, tmp_path, name="raw.json", **kw)
    named = tmp_path / "named.json"
    result = runner.invoke(main, ["names", "--graph", str(raw),
                                  "--described-per-name", "4",
                                  "--seed", "5", "--out", str(named)])
    assert result.exit_code == 0, result.output
    return named


class TestGenerateAndNames:
    def test_generate_writes_json(self, runner, tmp_path):
        path = make_graph(runner, tmp_path)
        doc = json.loads(path.read_text())
        assert doc["n"] == 120
        assert doc["meta"]["kind"] == "er"

    def test_generate_requires_seed(self, runner, tmp_path):
        result = runner.invoke(main, ["generate", "-n", "10", "--p", "0.1",
                                      "--out", str(tmp_path / "x.json")])
        assert result.exit_code != 0

    def test_names_assigns_groups(self, runner, tmp_path):
        named = make_named_graph(runner, tmp_path)
        doc = json.loads(named.read_text())
        assert doc["groups"]["described"]
        assert doc["groups"]["descriptor"]
        assert doc["names"]

    def test_generate_error_reported(self, runner, tmp_path):
        result = runner.invoke(main, ["generate", "-n", "10", "--p", "2.0",
                                      "--seed", "1", "--out", str(tmp_path / "x.json")])
        assert result.exit_code == 1
        assert "error" in result.output


class TestMeasure:
    def test_json_report(self, runner, tmp_path):
        named = make_named_graph(runner, tmp_path)
        result = runner.invoke(main, ["measure", "--graph", str(named),
                                      "--samples", "40", "--seed", "2"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert "entropy_rate" in report
        assert "ambiguities" in report
        assert "salience_rate" in report


class TestDescribeDecode:
    def test_round_trip(self, runner, tmp_path):
        named = make_named_graph(runner, tmp_path)
        doc = json.loads(named.read_text())
        target = doc["groups"]["described"][0]
        desc_path = tmp_path / "d.json"
        result = runner.invoke(main, ["describe", "--graph", str(named),
                                      "--target", str(target), "--seed", "4",
                                      "--out", str(desc_path)])
        assert result.exit_code == 0, result.output
        result = runner.invoke(main, ["decode", "--graph", str(named),
                                      "--description-file", str(desc_path)])
        assert result.exit_code == 0, result.output
        out = json.loads(result.output)
        assert out["status"] == "UNIQUE"
        assert out["target"] == target


class TestPredict:
    def test_flat_prediction(self, runner):
        result = runner.invoke(main, ["predict", "--mode", "FLAT", "-n", "1000",
                                      "--ax", "6.643856189774724",
                                      "--f", "6.643856189774724"])
        assert result.exit_code == 0, result.output
        pred = json.loads(result.output)
        assert pred["feasible"]
        assert abs(pred["D"] - 1.0) < 1e-9


class TestSweep:
    def test_byte_identical_reruns(self, runner, tmp_path):
        args = ["sweep", "--kind", "er", "-n", "150", "--p", "0.1",
                "--mode", "FLAT", "--variable", "SALIENCE",
                "--values", "0.05,0.1", "--described-per-name", "5",
                "--instances", "1", "--nodes-per-instance", "4",
                "--seed", "11"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert runner.invoke(main, args + ["--out", str(a)]).exit_code == 0
        assert runner.invoke(main, args + ["--out", str(b)]).exit_code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_values_required_without_config(self, runner, tmp_path):
        result = runner.invoke(main, ["sweep", "--seed", "1",
                                      "--out", str(tmp_path / "x.csv")])
        assert result.exit_code == 1


class TestAudit:
    def test_report(self, runner, tmp_path):
        named = make_named_graph(runner, tmp_path)
        result = runner.invoke(main, ["audit", "--graph", str(named), "--k", "3",
                                      "--samples", "20", "--seed", "9"])
        assert result.exit_code == 0, result.output
        report = json.loads(result.output)
        assert report["descriptions"] == 20
        assert 0.0 <= report["flagged_fraction"] <= 1.0
