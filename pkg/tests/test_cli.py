import json

import pytest
from click.testing import CliRunner

from isoclass.cli import main
from isoclass.latin import parse_pls, ring_of


@pytest.fixture
def run():
    runner = CliRunner()

    def invoke(*args, env=None, input=None):
        return runner.invoke(main, list(args), env=env, input=input, catch_exceptions=False)

    return invoke


@pytest.fixture
def ring_files(tmp_path):
    out = {}
    for name, square in (("a", "12 20"), ("b", "12 21")):
        for p in (2, 3):
            path = tmp_path / f"{name}{p}.json"
            path.write_text(json.dumps(ring_of(parse_pls(square), p).to_json()))
            out[name, p] = str(path)
    return out


def test_isotopic_pair_over_f2(run, ring_files):
    res = run("isotopic", "--a", ring_files["a", 2], "--b", ring_files["b", 2], "--count")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["equivalent"] and data["count"] == 4
    assert set(data["witness"]) == {"f", "g", "h"}


def test_not_isotopic_over_f3(run, ring_files):
    res = run("isotopic", "--a", ring_files["a", 3], "--b", ring_files["b", 3], "--count")
    assert res.exit_code == 1
    data = json.loads(res.output)
    assert not data["equivalent"] and data["count"] == 0 and "witness" not in data


@pytest.mark.parametrize("engine", ["oracle", "groebner"])
def test_isomorphic_counts_agree_across_engines(run, engine):
    res = run("isomorphic", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2", "--engine", engine, "--count")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["engine"] == engine and data["count"] == 1 and set(data["witness"]) == {"f"}


@pytest.mark.parametrize("relation", ["isotopic", "isomorphic"])
def test_witness_round_trip(run, tmp_path, relation):
    res = run(relation, "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2")
    rec = tmp_path / "w.json"
    rec.write_text(res.output)
    check = run("verify", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2", "--witness", str(rec))
    assert check.exit_code == 0 and json.loads(check.output)["valid"]
    # verify also accepts the bare witness, and on the swapped pair it must fail
    bare = json.dumps(json.loads(res.output)["witness"])
    swapped = run("verify", "--a", "pls:12 21", "--b", "pls:12 00", "--field", "2", "--witness", bare)
    assert swapped.exit_code == 1 and not json.loads(swapped.output)["valid"]


def test_verify_reads_stdin(run):
    res = run("isotopic", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2")
    check = run("verify", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2", "--witness", "-",
                input=res.output)
    assert check.exit_code == 0


def test_verify_without_witness_is_an_error(run):
    res = run("verify", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2", "--witness", '{"x": 1}')
    assert res.exit_code == 2


def test_budget_gives_undecided(run):
    res = run("isotopic", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "3", env={"ISOCLASS_BUDGET": "1"})
    assert res.exit_code == 3
    assert json.loads(res.output)["decided"] is False
    res = run("isotopic", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "3", "--engine", "groebner",
              env={"ISOCLASS_BUDGET": "1"})
    assert res.exit_code == 3


def test_bad_budget_is_a_usage_error(run):
    res = run("isotopic", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2", env={"ISOCLASS_BUDGET": "lots"})
    assert res.exit_code == 2


@pytest.mark.parametrize("args", [
    ["isotopic", "--a", "/nonexistent.json", "--b", "pls:1", "--field", "2"],
    ["isotopic", "--a", "pls:12 20", "--b", "pls:1", "--field", "2"],
    ["isotopic", "--a", "pls:12 20", "--b", "pls:12 21"],
    ["isotopic", "--a", "pls:12 2", "--b", "pls:12 21", "--field", "2"],
])
def test_errors_exit_2(run, args):
    res = run(*args)
    assert res.exit_code == 2


def test_field_mismatch_is_an_error(run, ring_files):
    res = run("isotopic", "--a", ring_files["a", 2], "--b", ring_files["b", 2], "--field", "3")
    assert res.exit_code == 2


def test_inline_json_algebra(run):
    rec = json.dumps(ring_of(parse_pls("1"), 2).to_json())
    res = run("invariants", "--algebra", rec, "--predicted", "--certificate")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert set(data) == {"algebra", "g1", "g2"}
    assert "certificate" in data["g1"] and "predicted" in data["g2"]


def test_invariants_of_square(run):
    res = run("invariants", "--algebra", "pls:12 00", "--field", "2", "--graph", "g2")
    data = json.loads(res.output)
    assert data["g2"]["edges"] == 25 and data["g2"]["triangles"] == 12 and "g1" not in data


def test_groebner_output(run):
    res = run("groebner", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["standard_monomials"] == 4 and len(data["variables"]) == 12
    listed = run("groebner", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2", "--field-equations",
                 "--relation", "isomorphism", "--order", "lex")
    data = json.loads(listed.output)
    assert data["standard_monomials"] == 1 and data["order"] == "lex"


def test_groebner_without_det_counts_more(run):
    full = json.loads(run("groebner", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2").output)
    loose = json.loads(run("groebner", "--a", "pls:12 20", "--b", "pls:12 21", "--field", "2", "--no-det").output)
    assert loose["standard_monomials"] > full["standard_monomials"]


def test_classify_pls(run, tmp_path):
    res = run("classify-pls", "--order", "2")
    assert json.loads(res.output)["class_count"] == 8
    out = tmp_path / "pls.json"
    res = run("classify-pls", "--order", "3", "--out", str(out))
    assert json.loads(out.read_text())["class_count"] == 81


def test_classify_rings(run, tmp_path):
    res = run("classify-rings", "--order", "2", "--field", "2", "--jobs", "1")
    assert res.exit_code == 0
    data = json.loads(res.output)
    assert data["class_count"] == 7 and data["merged_pairs"] == [["12 20", "12 21"]]
    out = tmp_path / "r.json"
    res = run("classify-rings", "--order", "2", "--field", "3", "--jobs", "1", "--no-invariants", "--out", str(out))
    summary = json.loads(res.output)
    assert summary["class_count"] == 7 and summary["out"] == str(out)
    assert json.loads(out.read_text())["class_count"] == 7


def test_classify_lie(run):
    res = run("classify-lie", "--dim", "2", "--field", "3", "--jobs", "1")
    assert res.exit_code == 0
    assert json.loads(res.output)["class_count"] == 2


def test_tables_json_and_csv(run):
    res = run("tables", "p2-invariants")
    assert res.exit_code == 0 and json.loads(res.output)["ok"]
    res = run("tables", "l3-g1", "--csv")
    assert res.exit_code == 0 and res.output.startswith("table,row,field,quantity,computed,stored,match")
    res = run("tables", "p3-invariants")
    assert res.exit_code == 1 and len(json.loads(res.output)["mismatches"]) == 2


def test_selftest_subset(run):
    res = run("selftest", "--only", "3", "--only", "7", "--cases", "5")
    assert res.exit_code == 0
    lines = res.output.splitlines()
    assert lines[-1] == "all passed"
    assert sum(line.startswith("[PASS]") for line in lines) == 2 + 11
