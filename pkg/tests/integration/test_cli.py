import json
from pathlib import Path

import pytest
from click.testing import CliRunner
from sympy import QQ

from logbb.app_utils import config
from logbb.cli import cli, parse_point
from logbb.errors import EXIT_INPUT, EXIT_INTERNAL, EXIT_MISMATCH, InputError

SEPARATOR_SCENE = """
[space]
kind = "affine"
dim = 2

[[foliation.charts]]
chart = 0
variables = ["x", "y"]
field = ["x^2*(x - 1)", "y"]

[[singularities]]
point = ["0", "0"]

[chern]
value = 0
"""


@pytest.fixture
def runner() -> CliRunner:
    return CliRunner()


def _json(output: str) -> dict:
    return json.loads(output[output.index("{") :])


def test_parse_point() -> None:
    assert parse_point("1:0,1/2") == (1, (QQ(0), QQ(1, 2)))
    with pytest.raises(InputError):
        parse_point("0")
    with pytest.raises(InputError):
        parse_point("a:1,2")


def test_verify_json(runner: CliRunner, scenes_dir: Path) -> None:
    result = runner.invoke(cli, ["verify", str(scenes_dir / "p3_nc_arrangement.toml")])
    assert result.exit_code == 0, result.output
    report = _json(result.output)
    assert report["status"] == "verified"
    assert report["local_total"] == report["chern_side"] == "1"
    assert len(report["points"]) == 15


def test_verify_markdown(runner: CliRunner, scenes_dir: Path) -> None:
    result = runner.invoke(
        cli, ["verify", str(scenes_dir / "p2_invariant_line.toml"), "--format", "md"]
    )
    assert result.exit_code == 0, result.output
    assert "- status: **verified**" in result.output


def test_verify_mismatch_exit_code(runner: CliRunner, tmp_path: Path, scenes_dir: Path) -> None:
    text = (scenes_dir / "p2_invariant_line.toml").read_text()
    scene = tmp_path / "dropped.toml"
    scene.write_text(text.replace('point = ["1", "1"]', 'point = ["0", "1"]'))
    result = runner.invoke(cli, ["verify", str(scene), "--jobs", "2"])
    assert result.exit_code == 1


def test_residue_command(runner: CliRunner, scenes_dir: Path) -> None:
    path = str(scenes_dir / "p3_nc_arrangement.toml")
    result = runner.invoke(cli, ["residue", path, "--point", "0:1,1,1"])
    assert result.exit_code == 0, result.output
    record = _json(result.output)
    assert record["bb"] == record["contribution"] == "27"
    assert record["on_divisor"] is False

    bad = runner.invoke(cli, ["residue", path, "--point", "0:1,x,1"])
    assert bad.exit_code == 2
    not_a_zero = runner.invoke(cli, ["residue", path, "--point", "0:2,1,1"])
    assert not_a_zero.exit_code == 2


def test_separator_required_exit_code(runner: CliRunner, tmp_path: Path) -> None:
    scene = tmp_path / "degenerate.toml"
    scene.write_text(SEPARATOR_SCENE)
    result = runner.invoke(cli, ["verify", str(scene)])
    assert result.exit_code == 3
    assert "separator" in result.output


def test_chern_and_ledger_commands(runner: CliRunner, scenes_dir: Path) -> None:
    path = str(scenes_dir / "hirzebruch_k2.toml")
    chern = runner.invoke(cli, ["chern", path])
    assert chern.exit_code == 0, chern.output
    assert _json(chern.output)["chern_side"] == "2"

    ledger = runner.invoke(cli, ["surface-ledger", path, "--format", "md"])
    assert ledger.exit_code == 0, ledger.output
    assert "FAILS" not in ledger.output


def test_invalid_scene_exit_code(runner: CliRunner, tmp_path: Path) -> None:
    scene = tmp_path / "broken.toml"
    scene.write_text('[space]\nkind = "affine"\ndim = 0\n')
    result = runner.invoke(cli, ["verify", str(scene)])
    assert result.exit_code == 2
    assert "space.dim" in result.output


def test_invalid_settings_exit_code(
    runner: CliRunner, scenes_dir: Path, monkeypatch: pytest.MonkeyPatch
) -> None:
    monkeypatch.setattr(config, "_current", None)
    monkeypatch.setenv("LOGBB_JOBS", "0")
    result = runner.invoke(cli, ["chern", str(scenes_dir / "hirzebruch_k2.toml")])
    assert result.exit_code == EXIT_INPUT
    assert "invalid settings" in result.output


@pytest.mark.parametrize("error", [ZeroDivisionError("division by zero"), ValueError("boom")])
def test_unexpected_errors_are_internal(
    runner: CliRunner, scenes_dir: Path, monkeypatch: pytest.MonkeyPatch, error: Exception
) -> None:
    def broken(*args: object, **kwargs: object) -> None:
        raise error

    monkeypatch.setattr("logbb.cli.run_global", broken)
    result = runner.invoke(cli, ["verify", str(scenes_dir / "p2_invariant_line.toml")])
    assert result.exit_code == EXIT_INTERNAL
    assert result.exit_code not in (EXIT_MISMATCH, EXIT_INPUT)
    assert f"internal error: {type(error).__name__}" in result.output
