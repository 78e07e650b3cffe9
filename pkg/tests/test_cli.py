from __future__ import annotations

import json

import pytest

from qorbifold import QorbifoldException, UsageError
from qorbifold.cli import RunConfig, build_parser, compute, main


def _run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_verify_passing_suite(capsys):
    code, captured = _run(capsys, "verify", "adjoint-table")
    assert code == 0
    payload = json.loads(captured.out)
    assert payload["suite"] == "adjoint-table"
    assert payload["passed"] is True
    assert len(payload["checks"]) == 9
    assert payload["config"]["run"]["q"] == 0.5


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["verify"],
        ["verify", "no-such-suite"],
        ["verify", "prop5", "--kbox", "two"],
        ["verify", "prop5", "--x", "a,b"],
        ["act", "--preset", "sphere"],
        ["chern", "--action", "sphere", "--preset", "nope"],
    ],
)
def test_usage_errors_exit_two(capsys, argv):
    code, _ = _run(capsys, *argv)
    assert code == 2


def test_version_exits_zero(capsys):
    code, captured = _run(capsys, "--version")
    assert code == 0
    assert captured.out.startswith("qorbifold ")


def test_library_errors_exit_two(capsys):
    assert _run(capsys, "act", "--preset", "teardrop:2,3", "--element", "alpha")[0] == 2
    assert _run(capsys, "act", "--preset", "sphere", "--element", "gamma")[0] == 2


def test_act_charge(capsys):
    code, captured = _run(capsys, "act", "--preset", "su3-adjoint", "--element", "t12")
    assert code == 0
    payload = json.loads(captured.out)
    assert payload["charge"] == ["2", "-1"]
    assert "image" not in payload


def test_act_with_group_element(capsys):
    code, captured = _run(capsys, "act", "--preset", "teardrop:1,3", "--element", "alpha", "--g", "1/4")
    assert code == 0
    payload = json.loads(captured.out)
    assert payload["charge"] == ["-1"]
    assert payload["g"] == ["1/4"]
    assert payload["image"]


def test_act_on_starred_word(capsys):
    code, captured = _run(capsys, "act", "--preset", "teardrop:1,3", "--element", "alpha alpha*")
    assert code == 0
    assert json.loads(captured.out)["charge"] == ["0"]


def test_invariants_to_file(tmp_path, capsys):
    out = tmp_path / "invariants.json"
    code, captured = _run(capsys, "invariants", "--preset", "teardrop:1,3", "--cutoff", "2", "--out", str(out))
    assert code == 0
    assert captured.out == ""
    payload = json.loads(out.read_text(encoding="utf-8"))
    assert payload["cutoff"] == 2
    assert [entry["label"] for entry in payload["invariants"]] == ["t^(0)_0,0", "t^(2)_1,1"]
    assert all(entry["charge"] == ["0"] for entry in payload["invariants"])


def test_chern_command(capsys):
    code, captured = _run(capsys, "chern", "--action", "teardrop:1,3", "--degree", "0,2")
    assert code == 0
    payload = json.loads(captured.out)
    assert payload["projector"] == "su2-column"
    assert payload["dimension"] == 2
    degrees = [chain["degree"] for chain in payload["chains"]]
    assert degrees == [0, 2]
    assert all(chain["invariant"] for chain in payload["chains"])
    assert payload["chains"][0]["nonlocal_witness"] is None
    assert payload["chains"][1]["nonlocal_witness"] is not None


def test_chern_odd_degree_is_rejected(capsys):
    assert _run(capsys, "chern", "--action", "teardrop:1,3", "--degree", "1")[0] == 2


def test_parser_subcommands():
    parser = build_parser()
    args = parser.parse_args(["crossed", "mul", "1:alpha", "0:beta", "--preset", "teardrop:1,3:p=3"])
    assert (args.command, args.crossed_command) == ("crossed", "mul")
    args = parser.parse_args(["dirac", "spectrum", "--lambda", "1/2"])
    assert args.weight == "1/2"
    args = parser.parse_args(["verify", "spin-examples", "--twists", "0..2"])
    assert args.twists == [0, 1, 2]


@pytest.mark.parametrize("options", [{"cutoff": -1}, {"q": 1.0}, {"q": 0.0}])
def test_run_config_validation(options):
    with pytest.raises(UsageError):
        RunConfig(**options)


def test_run_config_rejects_unknown_group():
    with pytest.raises(QorbifoldException):
        RunConfig(group="su5")


def test_run_config_needs_preset():
    with pytest.raises(UsageError):
        RunConfig().action


def test_compute_errors():
    with pytest.raises(UsageError):
        compute("no-such-computation", RunConfig())
    with pytest.raises(UsageError):
        compute("mul", RunConfig(group="su2"))
    with pytest.raises(UsageError):
        compute("actions-enumerate", RunConfig(group="su2"))


def test_compute_enumerate():
    result = compute("actions-enumerate", RunConfig(xs=[0, 1, 2], kbox=1))
    assert result["count"] == len(result["actions"]) == 243