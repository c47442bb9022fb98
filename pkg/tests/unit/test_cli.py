import json

import pytest
from click.testing import CliRunner

pytest.importorskip("numpy")

from buraulab.cli import cli  # noqa: E402


@pytest.fixture
def runner(monkeypatch):
    monkeypatch.delenv("BURAU_CACHE", raising=False)
    monkeypatch.delenv("BURAU_MEM_CAP_MB", raising=False)
    return CliRunner()


def test_mat_prints_the_burau_matrix(runner):
    result = runner.invoke(cli, ["mat", "--n", "3", "1"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output) == {
        "dim": 3,
        "entries": [["2", "-1", "0"], ["1", "0", "0"], ["0", "0", "1"]],
    }


def test_mat_rejects_bad_words(runner):
    result = runner.invoke(cli, ["mat", "--n", "3", "4"])
    assert result.exit_code == 2
    assert "error:" in result.output


def test_claims_lists_the_registry(runner):
    result = runner.invoke(cli, ["claims", "--tag", "symplectic"])
    assert result.exit_code == 0
    assert [entry["name"] for entry in json.loads(result.output)] == ["index"]


def test_verify_arnold(runner, tmp_path):
    result = runner.invoke(
        cli, ["--cache-dir", str(tmp_path), "verify", "arnold", "--n", "4"]
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["status"] == "verified"
    assert (tmp_path / "braid-4-2.grp").exists()


def test_outside_the_envelope_exits_2(runner):
    result = runner.invoke(cli, ["verify", "thm-a", "--n", "7", "--level", "2"])
    assert result.exit_code == 2
    assert json.loads(result.output)["status"] == "skipped"


def test_quotient_command(runner):
    result = runner.invoke(cli, ["quotient", "--n", "3", "--level", "4"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["observed"] == 48


def test_member_command(runner, tmp_path):
    square = tmp_path / "square.json"
    square.write_text(
        json.dumps({"dim": 2, "entries": [["3", "-2"], ["2", "-1"]]})
    )
    result = runner.invoke(
        cli, ["member", "--n", "2", "--level", "2", "--matrix", str(square)]
    )
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["member"] is True

    result = runner.invoke(
        cli, ["member", "--n", "2", "--level", "4", "--matrix", str(square)]
    )
    assert result.exit_code == 1


def test_verify_reduced_theorem_b(runner):
    result = runner.invoke(
        cli, ["verify", "thm-b", "--n", "4", "--level", "3", "--reduced"]
    )
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["params"] == {"n": 4, "level": 3, "reduced": True}
    assert payload["observed"]["standard_bijective"] is True


def test_member_command_for_the_reduced_representation(runner, tmp_path):
    square = tmp_path / "square.json"
    square.write_text(json.dumps({"dim": 2, "entries": [["1", "2"], ["0", "1"]]}))
    args = ["member", "--n", "3", "--reduced", "--matrix", str(square)]
    result = runner.invoke(cli, [*args, "--level", "2"])
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["reduced"] is True

    result = runner.invoke(cli, [*args, "--level", "4"])
    assert result.exit_code == 1


def test_member_rejects_broken_json(runner, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    result = runner.invoke(
        cli, ["member", "--n", "2", "--level", "2", "--matrix", str(path)]
    )
    assert result.exit_code == 2


def test_lift_command(runner, tmp_path):
    path = tmp_path / "residue.json"
    path.write_text(json.dumps({"dim": 2, "entries": [["2", "4"], ["1", "0"]]}))
    result = runner.invoke(
        cli,
        ["lift", "--family", "sp", "--g", "1", "--modulus", "5", "--matrix", str(path)],
    )
    assert result.exit_code == 0, result.output
    rows = [[int(v) for v in row] for row in json.loads(result.output)["entries"]]
    assert (rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]) == 1
    assert [[v % 5 for v in row] for row in rows] == [[2, 4], [1, 0]]


def test_lift_checks_the_genus(runner, tmp_path):
    path = tmp_path / "residue.json"
    path.write_text(json.dumps({"dim": 2, "entries": [["1", "0"], ["0", "1"]]}))
    result = runner.invoke(
        cli,
        ["lift", "--family", "sp", "--g", "2", "--modulus", "5", "--matrix", str(path)],
    )
    assert result.exit_code == 2


def test_suite_runs_and_exports(runner, tmp_path):
    config = tmp_path / "desk.yml"
    config.write_text(
        f"""
name: desk
logger:
  path: {tmp_path / "runs.db"}
claims:
  - type: arnold
    n: 3
  - type: quotient
    n: 3
    level: 4
  - type: theorem_a
    n: 7
    level: 2
"""
    )
    export = tmp_path / "reports.csv"
    result = runner.invoke(cli, ["suite", str(config), "--export", str(export)])
    assert result.exit_code == 0, result.output
    summary = json.loads(result.output)
    assert summary["suite"] == "desk"
    assert summary["passed"] is True
    assert [entry["claim"] for entry in summary["reports"]] == [
        "arnold",
        "quotient",
        "theorem_a",
    ]
    assert summary["skipped_claims"] == ["theorem_a"]
    assert summary["status_changes"] == []
    assert export.read_text().splitlines()[0].startswith("claim,params")
    assert (tmp_path / "runs.db").exists()


def test_suite_rejects_unknown_export_format(runner, tmp_path):
    config = tmp_path / "desk.yml"
    config.write_text("claims: []\n")
    result = runner.invoke(
        cli, ["suite", str(config), "--export", str(tmp_path / "out.json")]
    )
    assert result.exit_code == 2


def test_suite_tag_selection(runner, tmp_path):
    config = tmp_path / "desk.yml"
    config.write_text(
        "claims:\n"
        "  - type: arnold\n    n: 3\n"
        "  - type: index\n    n: 3\n    l: 2\n    m: 3\n"
    )
    result = runner.invoke(cli, ["suite", str(config), "--include-tag", "symplectic"])
    assert result.exit_code == 0, result.output
    assert [e["claim"] for e in json.loads(result.output)["reports"]] == ["index"]
