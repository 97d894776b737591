import csv
import itertools
import json

import pytest

from hassepoly.config import BudgetExceeded
from hassepoly.dwork import nondegenerate
from hassepoly.ff import ff_make
from hassepoly.pipeline import cmd_case, cmd_sweep, default_kmax


def test_default_kmax():
    assert default_kmax(2) == 4
    assert default_kmax(3) == 5


def test_degenerate_case_has_no_verdict():
    r = cmd_case(5, 1, 2, ["1", "1", "1"])
    assert not r.nondegenerate
    assert r.np_eq_hp is None and r.breakpoints() == []
    assert r.to_json()["h_le1"] == "4"


def test_ordinary_case_report():
    r = cmd_case(7, 1, 2, ["4", "2", "1"])
    assert r.nondegenerate and r.np_eq_hp and r.consistent
    obj = r.to_json()
    assert set(obj) >= {"spec", "nondegenerate", "h_le1", "h_full", "breakpoints", "np_eq_hp", "ms"}
    assert obj["spec"] == {"p": 7, "a": 1, "n": 2, "coeffs": ["4", "2", "1"]}
    pts = {b["index"]: (b["ord_num"], b["ord_den"], b["source"]) for b in obj["breakpoints"]}
    assert pts == {1: (0, 1, "direct"), 4: (3, 1, "direct"), 7: (9, 1, "symmetry")}
    assert obj["functional_equation"] and obj["end_valuation"]
    json.dumps(obj)


def test_reports_are_deterministic():
    a = cmd_case(3, 2, 2, ["12", "1", "2"]).to_json()
    b = cmd_case(3, 2, 2, ["12", "1", "2"]).to_json()
    a.pop("ms"), b.pop("ms")
    assert a == b


def test_n3_case_agrees_with_closed_form():
    F = ff_make(7, 1)
    coeffs = next(c for c in itertools.product(list(F.units()), repeat=4) if nondegenerate(3, c))
    r = cmd_case(7, 1, 3, list(coeffs))
    assert r.nondegenerate
    assert r.h_le1 == r.h_full
    assert r.consistent


def test_sweep_p3_is_all_degenerate():
    rec = cmd_sweep(3, 1, 2)
    assert (rec.ordinary, rec.non_ordinary, rec.degenerate) == (0, 0, 8)
    assert rec.empirical_gnp() is None


def test_sweep_p7(tmp_path):
    rec = cmd_sweep(7, 1, 2, out=tmp_path, jobs=2)
    s = rec.summary()
    assert s["size"] == 216
    assert s["ordinary"] >= 1 and s["inconsistent"] == 0
    assert s["ordinary"] + s["non_ordinary"] + s["degenerate"] == 216
    assert s["gnp_eq_hp"]
    lines = (tmp_path / "sweep_p7_a1_n2.jsonl").read_text().splitlines()
    assert len(lines) == 216
    rows = list(csv.DictReader(open(tmp_path / "sweep_p7_a1_n2_summary.csv")))
    assert rows[0]["ordinary"] == str(s["ordinary"])
    assert (tmp_path / "sweep_p7_a1_n2_gnp.txt").read_text().startswith("0 0\n1 0\n4 3\n")


def test_sweep_budget():
    with pytest.raises(BudgetExceeded):
        cmd_sweep(7, 1, 2, budget=100)
