import json

import pytest

from orderiso.cli import main
from orderiso.pariso import parse_element


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compose(capsys):
    assert run(capsys, "compose", "[1,3->2,4]", "[2,4->5,7]") == (0, "[1,3->5,7]\n", "")
    assert run(capsys, "compose", "[1->2]", "[]")[:2] == (0, "[]\n")


def test_compose_json(capsys):
    code, out, _ = run(capsys, "compose", "--format", "json", "[1,3->2,4]", "[2,4->5,7]")
    assert json.loads(out) == {"dom": [1, 3], "ran": [5, 7]}


def test_bad_literal_exits_2(capsys):
    code, out, err = run(capsys, "compose", "[1,2->5,3]", "[]")
    assert code == 2
    assert "position 6" in err


def test_inverse_round_trip(capsys):
    code, out, _ = run(capsys, "inverse", "[-1,3->2,4]")
    assert code == 0
    assert parse_element(out.strip()) == parse_element("[2,4->-1,3]")


def test_check_all_passes(capsys):
    code, out, _ = run(capsys, "check", "--carrier", "chain:4", "--max-rank", "2", "all")
    assert code == 0
    lines = out.splitlines()
    assert [l.split()[1] for l in lines if not l.startswith(" ")] == [
        "counting", "algebra", "green", "stability", "ideals", "congruences", "quotients", "series",
    ]
    assert all(l.startswith("PASS") for l in lines if not l.startswith(" "))


def test_check_series_json_embeds_seed(capsys):
    code, out, _ = run(capsys, "check", "--carrier", "int", "--max-rank", "3", "series", "--seed", "7", "--format", "json")
    assert code == 0
    res = json.loads(out)
    assert res["passed"] and res["seed"] == 7
    for entry in res["series"]:
        for layer in entry["layers"]:
            assert set(layer) == {"layer", "samples", "witness_found", "seed"}
            assert layer["seed"] == 7 and layer["witness_found"] == layer["samples"]


def test_check_json_is_byte_identical(capsys):
    argv = ("check", "--carrier", "chain:3", "--max-rank", "2", "all", "--seed", "3", "--format", "json")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second
    assert all(json.loads(line)["passed"] for line in first.splitlines())


def test_check_cap_exit_3(capsys):
    code, _, err = run(capsys, "check", "--carrier", "chain:9", "--max-rank", "4", "congruences")
    assert code == 3
    assert "24310" in err


def test_cap_flag_and_env(capsys, monkeypatch):
    assert run(capsys, "report", "eggbox", "--cap", "10")[0] == 3
    monkeypatch.setenv("OI_CAP", "10")
    assert run(capsys, "report", "eggbox")[0] == 3


def test_finite_check_on_int_is_usage_error(capsys):
    assert run(capsys, "check", "--carrier", "int", "stability")[0] == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["check", "nonsense"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main(["check", "all", "--seed", "-1"])
    assert info.value.code == 2


def test_report_eggbox(capsys):
    code, out, _ = run(capsys, "report", "eggbox", "--carrier", "chain:3", "--max-rank", "1", "--format", "json")
    objs = [json.loads(line) for line in out.splitlines()]
    assert objs[1] == {"rank": 1, "rows": [[0], [1], [2]], "cols": [[0], [1], [2]]}
    code, out, _ = run(capsys, "report", "eggbox", "--carrier", "chain:3", "--max-rank", "1")
    assert "D-class rank 1: 3 x 3" in out


def test_report_congruences(capsys):
    code, out, _ = run(capsys, "report", "congruences", "--carrier", "chain:4", "--max-rank", "2", "--format", "json")
    objs = [json.loads(line) for line in out.splitlines()]
    assert [o["is_rees"] for o in objs] == [0, 1, 2]
    assert [len(o["blocks"]) for o in objs] == [53, 37, 1]
    for o in objs:
        for block in o["blocks"]:
            for literal in block:
                assert str(parse_element(literal)) == literal


def test_report_quotient(capsys):
    code, out, _ = run(capsys, "report", "quotient", "1", "--carrier", "chain:4", "--max-rank", "2", "--format", "json")
    obj = json.loads(out)
    assert obj["size"] == 37 and obj["elements"][0] == "0"
    assert run(capsys, "report", "quotient")[0] == 2
    assert run(capsys, "report", "quotient", "5")[0] == 2


def test_report_ideals(capsys):
    code, out, _ = run(capsys, "report", "ideals", "--format", "json")
    assert [json.loads(line)["size"] for line in out.splitlines()] == [1, 17, 53]


def test_chain(capsys):
    code, out, _ = run(capsys, "chain", "[1,2,3->1,2,3]", "[1,2->1,2]", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["violations"] == []
    assert obj["steps"][-1]["beta"] == "[]"
    assert run(capsys, "chain", "[1->2]", "[]")[0] == 2
