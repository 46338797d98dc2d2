"""CLI contract: report shape, exit codes, artifacts, determinism."""

import json

import pytest
from click.testing import CliRunner

from knotlocal import cli


@pytest.fixture()
def runner():
    return CliRunner()


def run_json(runner, args):
    res = runner.invoke(cli.main, args)
    assert res.exit_code == 0, res.output
    return json.loads(res.output)


def test_bundled_examples():
    docs = cli.bundled_examples()
    assert [t.name for t in docs] == ["3_1", "4_1", "5_2", "m237"]
    m237 = docs[-1]
    assert "eLAkaccddjgnqw" in m237.note


def test_derive_report(runner):
    doc = run_json(runner, ["derive", "--knot", "4_1"])
    assert doc["command"] == "derive"
    assert doc["passed"] is True
    r = doc["results"]
    assert r["Q"] == [[2, 0], [0, -2]]
    assert r["N"] == [[2, 0], [0, 2]]
    assert r["sigma"] == [-1, -1]
    assert r["m"] == [-1, 1]


def test_derive_deterministic(runner):
    d1 = run_json(runner, ["derive", "--knot", "5_2"])
    d2 = run_json(runner, ["derive", "--knot", "5_2"])
    d1["elapsed_seconds"] = d2["elapsed_seconds"] = 0
    assert d1 == d2


def test_derive_requires_one_source(runner):
    assert runner.invoke(cli.main, ["derive"]).exit_code == 2
    assert runner.invoke(
        cli.main, ["derive", "--knot", "4_1", "--input", "x"]).exit_code == 2
    assert runner.invoke(
        cli.main, ["derive", "--knot", "9_99"]).exit_code == 2
    assert runner.invoke(
        cli.main, ["derive", "--input", "/nonexistent.tri"]).exit_code == 2


def test_derive_from_file(runner, tmp_path):
    from importlib import resources
    text = resources.files("knotlocal.data").joinpath("3_1.tri").read_text()
    path = tmp_path / "custom.tri"
    path.write_text(text)
    doc = run_json(runner, ["derive", "--input", str(path)])
    assert doc["results"]["Q"] == [[-2, 2], [2, -2]]


def test_count_single_eps(runner):
    doc = run_json(runner, ["count", "--knot", "4_1", "--p", "7", "--eps", "1"])
    assert doc["results"]["invariant"] == {"1": 4}
    brute = run_json(runner, ["count", "--knot", "4_1", "--p", "7",
                              "--eps", "1", "--brute-force"])
    assert brute["results"]["invariant"] == doc["results"]["invariant"]


def test_count_requires_eps_or_histogram(runner):
    assert runner.invoke(
        cli.main, ["count", "--knot", "4_1", "--p", "7"]).exit_code == 2


def test_count_rejects_composite_modulus(runner):
    assert runner.invoke(
        cli.main, ["count", "--knot", "4_1", "--p", "6", "--eps", "1"]
    ).exit_code == 2


def test_count_histogram_artifacts(runner, tmp_path):
    out = tmp_path / "report.json"
    res = runner.invoke(cli.main, [
        "count", "--knot", "5_2", "--p", "11", "--histogram",
        "--out", str(out)])
    assert res.exit_code == 0, res.output
    doc = json.loads(out.read_text())
    assert doc["results"]["max_fiber"] <= 7
    png = tmp_path / "report.png"
    csv_file = tmp_path / "report.csv"
    assert png.exists() and png.stat().st_size > 0
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    lines = csv_file.read_text().strip().splitlines()
    assert lines[0] == "eps,fiber_size,nondegenerate"
    assert len(lines) == 11  # header + one row per eps in F_11^x


def test_real_mb41(runner):
    doc = run_json(runner, ["real", "--knot", "4_1", "--tol", "1e-8"])
    assert abs(doc["results"]["value"] - 5.60241216) <= 1e-6


def test_real_hks(runner):
    doc = run_json(runner, ["real", "--knot", "5_2-hks"])
    assert abs(doc["results"]["value"] - 0.534186) <= 2e-4


def test_real_divergent_angles_usage_error(runner):
    res = runner.invoke(cli.main, ["real", "--knot", "4_1",
                                   "--lambda-dot", "1.5"])
    assert res.exit_code == 2


def test_verify_suites_pass(runner):
    for suite in ("residue", "angled", "weil", "symm"):
        doc = run_json(runner, ["verify", "--suite", suite,
                                "--samples", "40", "--seed", "3"])
        assert doc["passed"] is True
    doc = run_json(runner, ["verify", "--suite", "pentagon-finite", "--p", "3"])
    assert doc["passed"] is True
    doc = run_json(runner, ["verify", "--suite", "inversion", "--p", "11"])
    assert doc["passed"] is True


def test_verify_deterministic(runner):
    d1 = run_json(runner, ["verify", "--suite", "weil", "--samples", "30"])
    d2 = run_json(runner, ["verify", "--suite", "weil", "--samples", "30"])
    d1["elapsed_seconds"] = d2["elapsed_seconds"] = 0
    assert d1 == d2


def test_igusa_command(runner):
    doc = run_json(runner, ["igusa", "--p", "3", "--n", "4"])
    assert doc["passed"] is True
    assert doc["results"]["count_mod_pn"]["x"] == 1
    assert all(r["match"] for r in doc["results"]["igusa_rows"])


def test_out_file(runner, tmp_path):
    out = tmp_path / "derive.json"
    res = runner.invoke(cli.main, ["derive", "--knot", "3_1",
                                   "--out", str(out)])
    assert res.exit_code == 0
    assert json.loads(out.read_text())["command"] == "derive"
