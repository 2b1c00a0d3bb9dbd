import json
from pathlib import Path

import pytest

from exactsdp.cli import run
from exactsdp.lagrange import theta_bound

DATA = Path(__file__).resolve().parent.parent / "data"


def call(capsys, *argv):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), (json.loads(err) if err.strip() else None)


def test_degree_bound(capsys):
    code, out, _ = call(capsys, "degree-bound", 3, 3, 2)
    assert code == 0
    assert out["theta"] == {"0": 0, "1": theta_bound(3, 3, 1), "2": 16}
    assert out["total"] == 3 * theta_bound(3, 3, 1) + 3 * 16


def test_solve_bundled_fixture(capsys):
    code, out, _ = call(capsys, "solve", DATA / "random_332.json", "--seed", 3)
    assert code == 0
    degrees = {s["p"]: s["degree"] for s in out["strata"]}
    assert degrees[2] == 4
    assert out["minimizers"]
    for i in out["minimizers"]:
        assert out["candidates"][i]["feasible"]


def test_isolate_sextic_parametrization(capsys):
    code, out, _ = call(capsys, "isolate", DATA / "sextic_parametrization.json")
    assert code == 0
    assert out["degree"] == 4 and out["real_roots"] == 2
    lows = [pt["coords_decimal"][0] for pt in out["points"]]
    assert lows[0].startswith("-2.676205016021387098")


def test_check_reg(capsys):
    code, out, _ = call(capsys, "check-reg", DATA / "diag_pencil.json", 1)
    assert code == 0 and out == {"p": 1, "regular": False, "iota": [1]}
    code, out, _ = call(capsys, "check-reg", DATA / "random_332.json", 2)
    assert code == 0 and out["regular"] is True and "iota" not in out


def test_exit_codes(capsys, tmp_path):
    code, _, err = call(capsys, "degree-bound", 3, 3)
    assert code == 1 and err["error"] == "usage"
    code, _, err = call(capsys, "solve", tmp_path / "missing.json")
    assert code == 1 and err["error"] == "usage"
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = call(capsys, "isolate", bad)
    assert code == 1
    code, _, err = call(capsys, "solve", DATA / "diag_pencil.json")
    assert code == 2 and err == {"error": "regularity", "p": 1, "iota": [1],
                                 "message": err["message"]}
    code, _, err = call(capsys, "solve", DATA / "diag_pencil.json", "--no-check")
    assert code == 3 and err["error"] == "dimension" and err["source"] == [1, [1]]


def test_step_budget_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("EXACTSDP_STEP_BUDGET", "3")
    code, out, err = call(capsys, "solve", DATA / "random_332.json")
    assert code == 4 and out is None and err["error"] == "resource"


def test_sos_certify(capsys):
    code, out, _ = call(capsys, "sos-certify", DATA / "sextic.json", 1)
    assert code == 0 and out["feasible"] is False
    code, out, _ = call(capsys, "sos-certify", DATA / "sextic.json", 2, "--digits", 10)
    assert code == 0 and out["feasible"] is True
    assert out["gram_size"] == 4 and len(out["decompositions"]) == 2


def test_output_file(capsys, tmp_path):
    target = tmp_path / "bound.json"
    assert run(["degree-bound", "4", "3", "2", "-o", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["theta"]["2"] == 35


def test_solve_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(["solve", str(DATA / "random_332.json"), "--seed", "5", "-o", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_report_round_trips_through_isolate(capsys, tmp_path):
    report = tmp_path / "report.json"
    assert run(["solve", str(DATA / "sextic_gram.json"), "-o", str(report)]) == 0
    code, out, _ = call(capsys, "isolate", report)
    assert code == 0
    solved = json.loads(report.read_text())
    # candidates are listed feasible first, isolate lists roots left to right
    assert sorted(c["interval"] for c in solved["candidates"]) == sorted(
        p["interval"] for p in out["points"])


@pytest.mark.parametrize("argv", [["solve"], ["isolate"], ["frobnicate"], []])
def test_usage_errors(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 1 and err["error"] == "usage"
