"""Invariant reports against the embedded golden table."""

from fractions import Fraction

import pytest

from chevalley.encoding import parse_frac
from chevalley.invariants import (
    CSV_HEADER,
    GOLDEN_TABLE,
    IntolerablePrimeError,
    RankRestrictionError,
    compute_report,
    golden_row_for,
    report_csv_row,
    table_configurations,
    verify_table_row,
)


def test_report_examples():
    assert compute_report("A", 2, 3).v == Fraction(2, 3)
    assert compute_report("E", 7, 2).v == Fraction(7, 33)
    # independent evaluation of the D_l even split at l=4: (1/4)(1 + 2/(l-2))
    rep = compute_report("D", 4, 2)
    assert rep.v == Fraction(1, 4) * (1 + Fraction(2, 4 - 2)) == Fraction(1, 2)
    assert rep.v == Fraction(4, (2 * (rep.h_dual - 1) - rep.nullity))


def test_report_internal_consistency():
    for fam, l, p in [("A", 3, 2), ("B", 3, 3), ("C", 4, 5), ("G", 2, 7),
                      ("D", 5, 2), ("F", 4, 3)]:
        rep = compute_report(fam, l, p)
        assert rep.v == Fraction(rep.rank, rep.m - rep.s - rep.nullity)
        assert rep.v == Fraction(rep.rank, 2 * (rep.h_dual - 1) - rep.nullity)
        assert rep.s == rep.m - 2 * (rep.h_dual - 1)
        assert rep.min_nilpotent_centralizer == rep.s


def test_refusals():
    for fam, l, p in [("B", 3, 2), ("C", 2, 2), ("F", 4, 2), ("G", 2, 3)]:
        with pytest.raises(IntolerablePrimeError):
            compute_report(fam, l, p)
    with pytest.raises(RankRestrictionError):
        compute_report("A", 1, 5)


def test_golden_rows_resolve():
    # every golden row satisfies v = l / (2(h-1) - r) identically
    admissible = {"A": range(2, 9), "B": range(3, 9), "C": range(2, 9),
                  "D": range(4, 9), "E": (6, 7, 8), "F": (4,), "G": (2,)}
    for row in GOLDEN_TABLE:
        for l in admissible[row.family]:
            for p in (2, 3, 5, 7):
                if not row.applies(l, p):
                    continue
                v, h, r = row.v(l), row.h_dual(l), row.r
                assert v == Fraction(l, 2 * (h - 1) - r), (row.p_condition, l, p)


def test_verify_table_row_examples():
    chk = verify_table_row(compute_report("G", 2, 2))
    assert chk.status == "match" and compute_report("G", 2, 2).witness_dim == 6
    rep = compute_report("B", 3, 5)
    assert rep.h_dual == 5 and rep.nullity == 0
    assert rep.min_nilpotent_centralizer == 13 and rep.witness_dim == 11
    assert verify_table_row(rep).ok
    rep = compute_report("A", 3, 2)  # 2 | l+1 = 4 selects the glued row
    assert rep.v == Fraction(3, 5) and rep.min_nilpotent_centralizer == 9
    assert rep.witness_dim == 9
    assert verify_table_row(rep).ok


def test_table_row_skip_status():
    assert golden_row_for("B", 3, 2) is None  # p = 2 rows do not exist for B


def test_witness_dominated_by_minimal_nilpotent():
    # centralizer of the minimal nilpotent bounds the semisimple witness
    for fam, l in table_configurations(5):
        for p in (2, 3, 5):
            if golden_row_for(fam, l, p) is None:
                continue
            rep = compute_report(fam, l, p)
            assert rep.min_nilpotent_centralizer >= rep.witness_dim, (fam, l, p)


def test_json_and_csv_serialization():
    rep = compute_report("G", 2, 2)
    d = rep.to_json_dict()
    assert d["ridgeline"] == "1/3"
    assert parse_frac(d["ridgeline"]) == rep.v
    assert d["witness"] == {"label": "y_1", "centralizer_dim": 6}
    row = report_csv_row(rep)
    fields = dict(zip(CSV_HEADER.split(","), row.split(",")))
    assert fields["type"] == "G2" and fields["r"] == "0"
    assert parse_frac(fields["v"]) == Fraction(1, 3)
    assert fields["witness_centralizer_dim"] == "6"


def test_reports_cover_all_tolerable_small_rank():
    for fam, l in table_configurations(4):
        for p in (2, 3, 5, 7):
            golden = golden_row_for(fam, l, p)
            if golden is None:
                continue
            assert verify_table_row(compute_report(fam, l, p), golden).ok
