import json
from pathlib import Path

import pytest

from mcgauge.cli import FAILURE, INCONCLUSIVE, OK, USAGE, main

PRES = Path(__file__).resolve().parent.parent / "presentations"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def p(name):
    return PRES / name


def test_check(capsys):
    assert run(capsys, "check", p("k_plus_ku.txt"))[0] == OK
    code, out, _ = run(capsys, "check", p("assoc_defect.txt"))
    assert code == FAILURE and "associativity" in out
    code, _, err = run(capsys, "check", p("bad_scalar.txt"))
    assert code == USAGE and "line 9, column 6" in err


def test_bar_dims(capsys):
    code, out, _ = run(capsys, "bar", p("square_zero.txt"), "--flavor", "com")
    assert code == OK and "dims 1,1,0,0" in out
    code, out, _ = run(capsys, "bar", p("square_zero.txt"), "--flavor", "ass")
    assert code == OK and "dims 1,1,1,1" in out


def test_bar_rejects_wrong_input(capsys):
    assert run(capsys, "bar", p("square_zero.txt"), "--flavor", "ulie")[0] == USAGE
    assert run(capsys, "bar", p("noncommutative.txt"), "--flavor", "com")[0] in (USAGE, FAILURE)


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as info:
        main(["bar"])
    assert info.value.code == USAGE
    with pytest.raises(SystemExit) as info:
        main(["pbw", "3", "--max-weight", "0"])
    assert info.value.code == USAGE
    assert run(capsys, "pbw", "12")[0] == USAGE
    assert run(capsys, "suite", "9")[0] == USAGE


def test_pbw(capsys):
    code, out, _ = run(capsys, "pbw", "3")
    assert code == OK and out.startswith("ranks 2,3,1")


def test_example(capsys):
    code, out, _ = run(capsys, "example-1-4", p("k_plus_ku.txt"))
    assert code == OK and "2 vs 3; injective, not surjective" in out


def test_global_flags_either_side(capsys):
    a = run(capsys, "--format", "json", "bar", p("square_zero.txt"), "--flavor", "ass", "--max-weight", "2")
    b = run(capsys, "bar", p("square_zero.txt"), "--flavor", "ass", "--max-weight", "2", "--format", "json")
    assert a == b
    assert json.loads(a[1])["max_weight"] == 2


def test_faithful_synthesized_and_deterministic(capsys, tmp_path):
    code, out, _ = run(capsys, "faithful", "--synthesize", "42")
    assert code == OK and out.startswith("WITNESS FOUND")
    j1 = run(capsys, "faithful", "--synthesize", "42", "--format", "json")[1]
    j2 = run(capsys, "faithful", "--synthesize", "42", "--format", "json")[1]
    assert j1 == j2
    rep = json.loads(j1)
    assert rep["verified"]
    # feed the report back as explicit input
    src, tgt, mor = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "m.json"
    src.write_text(rep["source"])
    tgt.write_text(rep["target"])
    mor.write_text(j1)
    code, out, _ = run(capsys, "faithful", src, tgt, "--morphisms", mor, "--format", "json")
    assert code == OK and json.loads(out)["gauge"] == rep["gauge"]
    code, _, err = run(capsys, "faithful", src, tgt, "--morphisms", mor, "--max-weight", "3")
    assert code == USAGE and "truncation mismatch" in err


def test_mc_and_gauge_search(capsys):
    code, out, _ = run(capsys, "mc", p("square_zero.txt"), p("dual_numbers_dg.txt"))
    assert code == OK and "MAURER-CARTAN" in out
    code, out, _ = run(capsys, "gauge-search", p("square_zero.txt"), p("dual_numbers_dg.txt"), "--max-weight", "3")
    assert code == OK and "GAUGE FOUND" in out


def test_gauge_search_obstruction(capsys, tmp_path):
    els = tmp_path / "e.json"
    els.write_text(json.dumps({"alpha": {}, "alpha2": {"1:sx->x": "1"}}))
    code, out, _ = run(capsys, "gauge-search", p("square_zero.txt"), p("square_zero.txt"),
                       "--flavor", "com", "--elements", els, "--max-weight", "2")
    assert code == FAILURE and out.startswith("OBSTRUCTED at weight 1")
    code, out, _ = run(capsys, "gauge-search", p("square_zero.txt"), p("square_zero.txt"),
                       "--flavor", "com", "--elements", els, "--max-weight", "2", "--budget", "0")
    assert code == INCONCLUSIVE


def test_retraction_and_lift(capsys):
    code, out, _ = run(capsys, "retraction", p("square_zero.txt"), p("dual_numbers_dg.txt"))
    assert code == OK
    code, out, _ = run(capsys, "gauge-lift", p("square_zero.txt"), p("dual_numbers_dg.txt"), "--max-weight", "3")
    assert code == OK and "VERIFIED" in out


def test_envelope(capsys):
    code, out, _ = run(capsys, "envelope", p("abelian_g1.txt"), p("abelian_h2.txt"), "--max-weight", "3")
    assert code == OK
    assert "TRIVIAL WITNESS" in out


def test_suite_single_criterion(capsys):
    code, out, _ = run(capsys, "suite", "1")
    assert code == OK and out.startswith("criterion 1: PASS")


def test_faithful_equal_maps_give_zero_homotopy(capsys):
    code, out, _ = run(capsys, "faithful", p("square_zero.txt"), p("dual_numbers_dg.txt"))
    assert code == OK and "zero homotopy" in out
