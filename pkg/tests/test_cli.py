import csv
import json
from fractions import Fraction

import pytest

from nazeta.cli import RunConfig, build_parser, main, parse_complex, parse_range
from nazeta.errors import InputError
from nazeta.report import COLUMNS, Check, Report, compare, dump_json, fmt


@pytest.fixture
def files(tmp_path, monkeypatch):
    monkeypatch.setenv("NAZETA_CACHE", str(tmp_path / "cache"))
    paths = {}
    for name, body in {
        "f3": {"p": 3, "k": 1, "f": [1, 0, 0, 0, 0, 1]},
        "f11": {"p": 11, "k": 1, "f": [1, 0, 0, 0, 0, 1]},
        "sing": {"p": 3, "k": 1, "f": [0, 0, 0, 0, 0, 1]},
        "zint": {"f": [1, 0, 0, 0, 0, 1]},
    }.items():
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(json.dumps(body))
    paths["dir"] = tmp_path
    return paths


def test_report_format():
    r = Report()
    assert r.csv_text() == ",".join(COLUMNS) + "\n"
    r.add(compare("a", Fraction(1, 3), Fraction(1, 3)))
    with pytest.raises(InputError, match="duplicate"):
        r.add(Check("a", True))
    r.add(compare("b", 0.1, 0.2, 0.05))
    rows = list(csv.DictReader(r.csv_text().splitlines()))
    js = json.loads(r.json_text())
    assert rows == js
    assert rows[0]["lhs"] == "1/3" and rows[0]["status"] == "pass"
    assert rows[1]["status"] == "fail" and not r.ok
    assert fmt(0.1) == "0.10000000000000001"


def test_dump_json_is_stable():
    a = dump_json({"b": Fraction(2, 4), "a": [0.5, 1 + 2j]})
    assert a == dump_json({"a": [0.5, 1 + 2j], "b": Fraction(1, 2)})
    assert '"1/2"' in a


def test_parsers():
    assert parse_complex("5.5+0i") == 5.5
    assert parse_complex("0.5 - 2i") == 0.5 - 2j
    assert parse_range("0:20", ":") == ("0", "20")
    with pytest.raises(InputError):
        parse_complex("abc")
    with pytest.raises(InputError):
        parse_range("1-4", "..")
    ns = build_parser().parse_args(["count", "--curve", "c.json"])
    with pytest.raises(InputError):
        RunConfig("count", ns, tol=0)


def test_count(files, capsys):
    out = files["dir"] / "counts.json"
    assert main(["count", "--curve", str(files["f3"]), "--degrees", "1..4", "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["counts"] == {"1": 4, "2": 10, "3": 28, "4": 118}


def test_artin_and_roots(files, capsys):
    assert main(["artin", "--curve", str(files["f3"])]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["numerator"] == ["1/1", "0/1", "0/1", "0/1", "9/1"]
    assert data["class_number"] == "10/1"
    assert main(["roots", "--poly", '["1","0","0","0","9"]', "--reciprocal"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert all(abs(float(m) - 3**0.5) < 1e-12 for m in data["moduli"])


def test_zeta2g2_report_all_pass(files):
    out, rep = files["dir"] / "z.json", files["dir"] / "checks.csv"
    assert main(["zeta2g2", "--curve", str(files["f11"]), "--out", str(out), "--report", str(rep)]) == 0
    rows = list(csv.DictReader(rep.read_text().splitlines()))
    assert list(rows[0]) == list(COLUMNS)
    assert {r["status"] for r in rows} <= {"pass", "info"}
    zeta = json.loads(out.read_text())["zeta"]
    assert zeta["numerator"][:3] == ["88/1", "960/1", "1159/10"]


def test_zeta2g2_bad_curve(files, capsys):
    assert main(["zeta2g2", "--curve", str(files["sing"])]) == 1
    assert "squarefree" in capsys.readouterr().err


def test_missing_file(files):
    assert main(["artin", "--curve", str(files["dir"] / "nope.json")]) == 1


def test_invariants(files, capsys):
    assert main(["invariants", "--curve", str(files["f3"]), "--rank", "1"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["zeta"]["numerator"] == ["1/1", "0/1", "0/1", "0/1", "9/1"]
    assert main(["invariants", "--curve", str(files["f3"]), "--rank", "2"]) == 0
    assert main(["invariants", "--curve", str(files["f3"]), "--rank", "3"]) == 1


def test_euler_reproducible(files, capsys):
    args = ["euler", "--curve", str(files["zint"]), "--xmax", "40", "--s", "5.5+0i"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
    assert list((files["dir"] / "cache").glob("*.jsonl"))
    assert main(args[:-2] + ["--s", "2"]) == 1
    assert main(args[:-2] + ["--s", "2", "--force"]) == 0


def test_lattice_ops(files, capsys):
    assert main(["lattice", "--op", "xi", "--s", "1.3+0i", "--tol", "1e-8"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert abs(float(data["value"].split("+")[0]) - 0.125149716042591) < 1e-9
    assert {"value", "error", "cells"} <= set(data)
    assert main(["lattice", "--op", "h0", "--tau", "0+1i"]) == 0
    assert main(["lattice", "--op", "area"]) == 0
    assert main(["lattice", "--op", "scan", "--trange", "7:8.5", "--step", "0.5"]) == 0
    capsys.readouterr()
    assert main(["lattice", "--op", "xi", "--s", "1"]) == 1


def test_consistency_failure_writes_report_then_exits_2(files, monkeypatch):
    import nazeta.cli as cli

    monkeypatch.setattr(cli, "rank2_checks", lambda res, tol: [Check("forced", False, 1, 2)])
    rep = files["dir"] / "fail.csv"
    assert main(["zeta2g2", "--curve", str(files["f11"]), "--report", str(rep)]) == 2
    assert "forced,fail" in rep.read_text()


def test_convergence_failure_exits_3(files, monkeypatch):
    import nazeta.cli as cli
    from nazeta.errors import ConvergenceError

    def boom(*a, **k):
        raise ConvergenceError("quadrature failure")

    monkeypatch.setattr(cli, "xi_q2", boom)
    assert main(["lattice", "--op", "xi", "--s", "2"]) == 3
