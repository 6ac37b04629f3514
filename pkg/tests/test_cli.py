from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from charp_lab import acceptance, cli
from charp_lab.scenario import ScenarioError, bundled_fixtures, parse_scenario, run_scenario

HEADER = """characteristic: 2
variables: X, Y, Z
ideal: X*Y, X*Z, Y*Z
"""


def write(tmp_path, text, name="s.scenario"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def run_json(capsys, *argv):
    code = cli.main(["run", *argv, "--json"])
    return code, json.loads(capsys.readouterr().out)


@pytest.mark.parametrize("name", sorted(bundled_fixtures()))
def test_bundled_fixtures_pass(name):
    report, code = run_scenario(bundled_fixtures()[name])
    assert code == 0, [t.get("expect") or t.get("error") for t in report["tasks"]]
    assert report["status"] == "ok"
    assert all(t["expect"]["ok"] for t in report["tasks"] if "expect" in t)
    assert report["timings"]["total"] < 60


def test_fp14a_primes(capsys):
    code, report = run_json(capsys, "fp14a")
    assert code == 0
    lattice = next(t for t in report["tasks"] if t["kind"] == "special-ideals")
    assert sorted(lattice["result"]["primes"]) == ["(X, Y, Z)", "(X^3 + Y^3 + Z^3)"]


def test_fp17_1_report_contents(capsys):
    code, report = run_json(capsys, "fp17_1")
    assert code == 0
    kinds = [t["kind"] for t in report["tasks"]]
    assert kinds[:4] == ["fpure-check", "special-ideals", "big-test-ideal", "chain"]
    chain = report["tasks"][3]["result"]["chain"]
    assert chain == ["(X*Y, X*Z, Y*Z)", "(X, Y, Z)", "(1)"]
    assert report["tasks"][0]["result"]["u"] == "X*Y*Z"
    assert report["notices"] and "complete local rings" in report["notices"][0]


def test_empty_task_list_echoes_scenario(tmp_path, capsys):
    code, report = run_json(capsys, write(tmp_path, HEADER))
    assert code == 0
    assert report["tasks"] == []
    assert report["scenario"]["characteristic"] == "2"
    assert report["scenario"]["defining_ideal"] == "(X*Y, X*Z, Y*Z)"


def test_reports_are_deterministic(tmp_path):
    outs = []
    for i in range(2):
        out = tmp_path / f"r{i}.json"
        assert cli.main(["run", "fp17_3", "-o", str(out)]) == 0
        report = json.loads(out.read_text())
        report.pop("timings")
        outs.append(report)
    assert outs[0] == outs[1]
    assert json.dumps(outs[0], sort_keys=True) == json.dumps(outs[1], sort_keys=True)
    assert len(outs[0]["determinism_hash"]) == 64


def test_hash_ignores_timings():
    r1, _ = run_scenario(bundled_fixtures()["fp17_4"])
    r2, _ = run_scenario(bundled_fixtures()["fp17_4"])
    assert r1["determinism_hash"] == r2["determinism_hash"]


def test_falsified_expectation_exits_2(tmp_path, capsys):
    text = HEADER + "\n[task chain]\nexpect: (0); (1)\n"
    code, report = run_json(capsys, write(tmp_path, text))
    assert code == 2
    assert report["status"] == "falsified"
    assert report["tasks"][0]["expect"]["ok"] is False


def test_unknown_field_is_rejected_with_position(tmp_path, capsys):
    text = HEADER + "\n[task chain]\n  colour: blue\n"
    code = cli.main(["run", write(tmp_path, text)])
    err = capsys.readouterr().err
    assert code == 1
    assert ":6:3: unknown field 'colour'" in err


def test_unknown_header_and_task_kind():
    with pytest.raises(ScenarioError) as info:
        parse_scenario("characteristic: 2\nvariables: X\nflavour: x\n")
    assert (info.value.line, info.value.column) == (3, 1)
    with pytest.raises(ScenarioError, match="unknown task kind"):
        parse_scenario(HEADER + "[task frobnicate]\n")
    with pytest.raises(ScenarioError, match="requires field 'r'"):
        parse_scenario(HEADER + "[task tight-closure]\na-test: (X)\n")
    with pytest.raises(ScenarioError, match="duplicate"):
        parse_scenario(HEADER + "ideal: X\n")


def test_polynomial_syntax_error_reports_column(tmp_path, capsys):
    text = HEADER + "\n[task realize]\ntarget: (X, Y +)\n"
    code, report = run_json(capsys, write(tmp_path, text))
    assert code == 1
    assert ":6:16:" in report["tasks"][0]["error"]


def test_bad_header_is_an_error(tmp_path, capsys):
    code, report = run_json(capsys, write(tmp_path, "characteristic: 4\nvariables: X\n"))
    assert code == 1 and report["status"] == "error"


def test_resource_limit_is_reported(tmp_path, capsys):
    text = ("characteristic: 7\nvariables: X, Y, Z\nideal: X^3+Y^3+Z^3\ndeclared-prime: yes\n"
            "\n[task tight-closure]\nr: X\na-test: (X^2 + Y*Z, Y^2 + X*Z + Z^2)\nS: one\nlevels: 1\n")
    code, report = run_json(capsys, write(tmp_path, text), "--pair-budget", "3")
    assert code == 1
    assert "ResourceLimitError" in json.dumps(report)


def test_all_task_kinds(tmp_path, capsys):
    text = HEADER + """
[task s-test-ideal]
S: complement (X,Y); (X,Z)
expect: (Y, Z)

[task s-test-ideal]
S: powers X
expect: (X, Y*Z)

[task realize]
target: (X,Y)
expect: complement (X,Z); (Y,Z)

[task tight-closure]
r: Z
a-test: (X+Y)
S: one

[task special-ideals]
mode: single
expect-member-count: 9
"""
    code, report = run_json(capsys, write(tmp_path, text))
    assert code == 0, report
    assert report["tasks"][3]["result"]["verdict"]["status"] == "non-member"


def test_levels_flag_reaches_tasks(tmp_path, capsys):
    text = HEADER + "\n[task tight-closure]\nr: X\na-test: (X+Y)\nS: rcirc\n"
    code, report = run_json(capsys, write(tmp_path, text), "--levels", "2")
    assert report["tasks"][0]["result"]["verdict"]["bound"] == 2


def test_alt_u_diff(capsys):
    code, report = run_json(capsys, "fp17_3", "--alt-u", "X*Y*Z")
    assert code == 0
    alt = report["tasks"][1]["result"]["alt_u"]
    assert alt["u"] == "X*Y*Z"
    assert alt["diff"]["primes_only_second"] == ["(X, Y)", "(Y, Z)"]


def test_text_output(capsys):
    assert cli.main(["run", "fp17_1", "--text"]) == 0
    out = capsys.readouterr().out
    assert "status: ok" in out and "expect: ok" in out and "determinism hash" in out


def test_missing_file(capsys):
    assert cli.main(["run", "/nonexistent.scenario"]) == 1
    assert "no such scenario" in capsys.readouterr().err


def test_fixtures_listing(capsys):
    assert cli.main(["fixtures"]) == 0
    out = capsys.readouterr().out
    for name in ("fp14a", "fp17_1", "fp17_2", "fp17_3", "fp17_4"):
        assert name in out


def test_check_command(monkeypatch, capsys):
    monkeypatch.setattr(acceptance, "CRITERIA", acceptance.CRITERIA[:2])
    assert cli.main(["check"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2 and all(line.startswith("PASS") for line in lines)


@pytest.mark.skipif(shutil.which("charp-lab") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["charp-lab", "run", "fp17_3"], capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["status"] == "ok"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "charp_lab.cli", "fixtures"], capture_output=True, text=True,
                          timeout=60)
    assert proc.returncode == 0 and "fp14a" in proc.stdout
