import json

import pytest

from d2kit.cli import main

PRES = "gens: x,t; n: 5; map: x=(1,0), t=(0,1); rels: x t x^-1 t^-1, x^5"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_complex_build_and_verify(capsys, tmp_path):
    code, cx = run(capsys, "complex", "build", "--presentation", PRES)
    assert code == 0
    assert cx["d2"] == [["-t+1", "x^4+x^3+x^2+x+1"], ["x-1", "0"]]
    path = tmp_path / "cx.json"
    path.write_text(json.dumps(cx))
    assert run(capsys, "complex", "verify", str(path))[0] == 0
    cx["d2"][1][0] = "x-2"
    path.write_text(json.dumps(cx))
    assert run(capsys, "complex", "verify", str(path))[0] == 3


def test_fox(capsys):
    code, out = run(capsys, "fox", "--presentation", PRES, "--word", "x t x^-1 t^-1")
    assert code == 0 and out == {"x": "-t+1", "t": "x-1"}


def test_realize_closed_loop(capsys, tmp_path):
    wit = tmp_path / "w.json"
    code, out = run(capsys, "realize", "--n", "5", "--w", "3", "--emit-witness", str(wit))
    assert code == 0
    assert json.loads(wit.read_text())["payload"]["f3"] == "x^4+x^2+1"
    assert run(capsys, "verify", str(wit))[0] == 0
    assert run(capsys, "realize", "--n", "6", "--w", "2")[0] == 2


def test_factor_and_verify(capsys, tmp_path):
    out = tmp_path / "f.json"
    assert run(capsys, "factor-sl", "--matrix", '[["t","1"],["0","t^-1"]]', "--n", "5", "--out", str(out))[0] == 0
    assert run(capsys, "verify", str(out))[0] == 0
    assert run(capsys, "factor-sl", "--matrix", '[["t","0"],["0","1"]]', "--n", "5")[0] == 2


def test_ext3(capsys):
    code, out = run(capsys, "ext3", "--n", "5", "--a", "x-1", "--b", "t-1")
    assert code == 0 and out["payload"]["value"] == 1
    assert run(capsys, "ext3", "--n", "5", "--a", "t-1", "--b", "x-1")[0] == 2


def test_ideals(capsys):
    code, out = run(capsys, "ideals", "--n", "6")
    assert code == 0
    assert {(c["p"], c["omega"]) for c in out} == {(2, "x+1"), (2, "x^2+x+1"), (3, "x-1"), (3, "x+1")}


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "snf", "--matrix", "[[", "--p", "3")[0] == 1
    assert run(capsys, "verify", str(tmp_path / "missing.json"))[0] == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "nope", "payload": {}}))
    assert run(capsys, "verify", str(bad))[0] == 1
    assert run(capsys, "no-such-command")[0] == 1


def test_swan_search(capsys):
    code, out = run(capsys, "swan", "verify", "--n", "5", "--matrix", '[["2"]]')
    assert code == 0


def test_selftest(capsys):
    code, out = run(capsys, "selftest", "--cases", "1", "--mutants", "5")
    assert code == 0 and out["failures"] == []


def test_wf_seed_overrides_seed(capsys, monkeypatch):
    monkeypatch.setenv("WF_SEED", "11")
    main(["selftest", "--cases", "1", "--mutants", "3", "--seed", "1"])
    first = capsys.readouterr().out
    main(["selftest", "--cases", "1", "--mutants", "3", "--seed", "2"])
    second = capsys.readouterr().out
    assert first == second
    assert json.loads(first)["seed"] == 11
    monkeypatch.setenv("WF_SEED", "abc")
    assert main(["selftest"]) == 1


@pytest.mark.parametrize("argv", [["module", "build", "--matrix", '[["t-1"]]', "--n", "5"],
                                  ["snf", "--matrix", '[["t+1","1"],["t","t"]]', "--p", "2"]])
def test_output_is_deterministic(capsys, argv):
    assert run(capsys, *argv) == run(capsys, *argv)


def test_selftest_jobs_do_not_change_report(capsys):
    serial = run(capsys, "selftest", "--cases", "2", "--mutants", "2", "--seed", "5")
    parallel = run(capsys, "selftest", "--cases", "2", "--mutants", "2", "--seed", "5", "--jobs", "2")
    assert serial == parallel and serial[0] == 0
