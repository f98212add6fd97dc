import json

import pytest

from cogalois.catalog import cyclic
from cogalois.classify import family_i, remark_triple
from cogalois.cli import RunConfig, check_report, main, parse_lambda
from cogalois.cocycle import Triple, triple_to_json
from cogalois.errors import BadParameters, ParseError
from cogalois.groups import group_to_json
from cogalois.operators import trivial_action


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_validate(tmp_path, capsys):
    good = write(tmp_path, "r.json", triple_to_json(remark_triple()))
    assert main(["validate", good]) == 0
    g = group_to_json(cyclic(3))
    g["table"][1][1] = 1
    assert main(["validate", write(tmp_path, "g.json", g)]) == 1
    assert "associative" in capsys.readouterr().err
    bad = triple_to_json(remark_triple())
    bad["gamma_group"]["action"] = [[0, 1, 2, 3], [0, 1, 2, 3]]
    assert main(["validate", write(tmp_path, "b.json", bad)]) == 1
    assert "(1, 1)" in capsys.readouterr().err


def test_input_errors(tmp_path, capsys):
    assert main(["validate", str(tmp_path / "missing.json")]) == 2
    p = tmp_path / "junk.json"
    p.write_text("{not json")
    assert main(["validate", str(p)]) == 2
    assert main(["verify", "no-such-suite"]) == 2
    assert main(["enum-mnk", "--max-gamma", "17"]) == 3


def test_check_reports():
    out = check_report(triple_to_json(remark_triple()))
    assert out["kneser"] is False and out["mnk"] is True
    out = check_report(triple_to_json(family_i()))
    assert out["kneser"] is True and out["cogalois"] is False and out["mncg"] is True
    for n in (1, 2):
        t = Triple(trivial_action(cyclic(2), cyclic(n)), (0, 0))
        assert check_report(triple_to_json(t))["kneser"] == (n == 1)


def test_check_text_and_out(tmp_path):
    path = write(tmp_path, "r.json", triple_to_json(remark_triple()))
    out = tmp_path / "o.json"
    assert main(["check", path, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["mnk"] is True
    assert main(["check", path, "--report", "text", "--out", str(out)]) == 0
    assert "mnk: True" in out.read_text()


def test_verify_quick_suites(capsys):
    assert main(["verify", "selfact-8"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["violations"] == [] and rep["checked"] > 0
    assert main(["verify", "ab2"]) == 0


def test_enum_deterministic_across_workers(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["enum-mnk", "--max-gamma", "4", "--max-g", "8"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--workers", "2", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(json.loads(a.read_text())["classes"]) >= 2


def test_adequate_units_and_deform(tmp_path, capsys):
    assert main(["adequate-units", "8", "--method", "brute"]) == 0
    assert json.loads(capsys.readouterr().out)["adequate_units"] == [1, 3, 5, 7]
    g = write(tmp_path, "c8.json", group_to_json(cyclic(8)))
    assert main(["deform", g, "--unit", "3"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["forward"]["cogalois"] and not out["backward"]["cogalois"]
    assert main(["deform", g]) == 2


def test_ring_and_quad(tmp_path, capsys):
    emit = tmp_path / "t.json"
    assert main(["ring", "--eisenstein", "3,1,2,2,1,1", "--emit", str(emit)]) == 0
    assert main(["validate", str(emit)]) == 0
    capsys.readouterr()
    assert main(["ring", "--eisenstein", "3,1,3,3,1,1,1", "--emit", str(emit)]) == 2
    assert main(["quad-family", "3", "2", "--lambda", "0,0;1,0;0,1"]) == 0
    assert json.loads(capsys.readouterr().out)["mnk"] is True
    assert main(["quad-family", "3", "2", "--lambda", "0,0;1,0"]) == 2


def test_config_and_lambda_parsing():
    with pytest.raises(BadParameters):
        RunConfig("verify", workers=0)
    assert parse_lambda("1,2;1,0;0,1", 2) == ([1, 2], [[1, 0], [0, 1]])
    with pytest.raises(ParseError):
        parse_lambda("1,x;1,0;0,1", 2)
