import json
import subprocess
import sys
from pathlib import Path

import pytest

from prevlab import ParseError, SchemaError, UnboundName
from prevlab.cli import main
from prevlab.serialize import load
from prevlab.tasks import execute, parse_scenario, run_scenario

ROOT = Path(__file__).resolve().parents[1]
SCEN = ROOT / "scenarios"


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def scenario(tasks, bindings=None, poset=None):
    return {
        "poset": poset or {"elements": ["x", "y"], "covers": []},
        "bindings": bindings or {},
        "tasks": tasks,
    }


def test_eval_task_reports_value():
    sc = scenario(
        [{"kind": "eval", "prevision": "F", "fn": "h"}],
        {
            "F": {"type": "prevision", "kind": "hoare", "generators": [{"x": "1"}, {"y": "1"}]},
            "h": {"type": "fn", "values": {"x": "1", "y": "3"}},
        },
    )
    report = execute(parse_scenario(sc))
    assert report["tasks"][0]["value"] == "3" and report["tasks"][0]["verdict"] == "value"


def test_fork_check_fails_with_replayable_witness(capsys):
    code, out, _ = run_cli(capsys, "run", str(SCEN / "not_a_fork.json"))
    assert code == 1
    task = json.loads(out)["tasks"][0]
    assert task["verdict"] == "fail"
    assert task["witness"]["h"] == {"top": "1"} and task["witness"]["h2"] == {}
    # replay through the library alone
    from prevlab import walley_violation
    from prevlab.serialize import load_fn, load_poset

    raw = json.loads((SCEN / "not_a_fork.json").read_text())
    p = load_poset(raw["poset"])
    fk = load(p, raw["bindings"]["fk"])
    h, h2 = load_fn(p, task["witness"]["h"]), load_fn(p, task["witness"]["h2"])
    assert walley_violation(fk, h, h2) == task["witness"]["side"]


def test_malformed_rational_is_a_parse_error(capsys):
    with pytest.raises(ParseError):
        parse_scenario(scenario([], {"v": {"type": "valuation", "values": {"x": "1/0"}}}))
    code, _, err = run_cli(capsys, "run", str(SCEN / "bad_rational.json"))
    assert code == 2 and "ParseError" in err and "bindings.v.values.x" in err


def test_schema_and_name_errors():
    with pytest.raises(SchemaError):
        parse_scenario({"bindings": {}})
    with pytest.raises(SchemaError):
        parse_scenario(scenario([], {"v": {"type": "tensor"}}))
    with pytest.raises(UnboundName):
        execute(parse_scenario(scenario([{"kind": "lift", "valuation": "nope"}])))
    with pytest.raises(SchemaError):
        execute(parse_scenario(scenario([{"kind": "teleport"}])))


def test_sample_scenarios_pass(capsys):
    for name in ("basics.json", "gauge.json"):
        code, out, _ = run_cli(capsys, "run", str(SCEN / name))
        assert code == 0, out
        assert json.loads(out)["summary"]["ok"]


def test_reports_are_byte_identical(capsys):
    outs = {run_cli(capsys, "--seed", "5", "run", str(SCEN / "basics.json"))[1] for _ in range(3)}
    assert len(outs) == 1


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("PREVLAB_SEED", "17")
    _, out, _ = run_cli(capsys, "run", str(SCEN / "gauge.json"))
    assert json.loads(out)["seed"] == 17
    _, out, _ = run_cli(capsys, "run", str(SCEN / "gauge.json"), "--seed", "3")
    assert json.loads(out)["seed"] == 3
    monkeypatch.setenv("PREVLAB_SEED", "many")
    assert run_cli(capsys, "run", str(SCEN / "gauge.json"))[0] == 2


def test_single_task_subcommands(capsys):
    f = str(SCEN / "basics.json")
    code, out, _ = run_cli(capsys, "eval", f, "--prevision", "F", "--fn", "h")
    assert code == 0 and json.loads(out)["tasks"][0]["value"] == "3"
    code, out, _ = run_cli(capsys, "member", f, "--set", "Sx", "--valuation", "dy", "--expect", "true")
    assert code == 1 and json.loads(out)["tasks"][0]["certificate"]["type"] == "outside"
    code, out, _ = run_cli(capsys, "sr-hull", f, "--generators", "dx", "dy", "--probes", "half", "--shape", "hoare")
    assert code == 0
    code, out, _ = run_cli(capsys, "minimax", f, "--matrix", "M", "--pretty")
    assert code == 0 and "\n  " in out
    code, out, _ = run_cli(capsys, "lift", str(SCEN / "gauge.json"), "--valuation", "sub")
    assert json.loads(out)["tasks"][0]["value"]["valuation"] == {"_bot": "2/3", "*": "1/3"}


def test_timings_flag_adds_elapsed_without_changing_digest(capsys):
    f = str(SCEN / "gauge.json")
    plain = json.loads(run_cli(capsys, "run", f)[1])
    timed = json.loads(run_cli(capsys, "--timings", "run", f)[1])
    assert all("elapsed" in t for t in timed["tasks"])
    assert plain["digest"] == timed["digest"]


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert run_cli(capsys, "run", "/no/such/file.json")[0] == 2
    assert run_cli(capsys, "fuzz", "no-such-suite")[0] == 2
    assert run_cli(capsys, "--max-elems", "1", "run", str(SCEN / "basics.json"))[0] == 2


def test_console_entry_points():
    out = subprocess.run(
        [sys.executable, "-m", "prevlab", "run", str(SCEN / "gauge.json")], capture_output=True, text=True
    )
    assert out.returncode == 0 and json.loads(out.stdout)["summary"]["ok"]


def test_run_scenario_api():
    report = run_scenario(SCEN / "basics.json", seed=1)
    assert report["summary"] == {"total": 10, "failed": 0, "ok": True}
