"""Exact growth-exponent evaluation."""

from fractions import Fraction

import pytest

from chevalley.growth_bounds import (
    GENERAL,
    RANK2_STRONG,
    baseline_exponent,
    exponent_at,
    generator_bound,
    growth_exponent,
    improvement_table,
)
from chevalley.invariants import compute_report, golden_row_for, table_configurations


def test_strong_regime_example():
    b = growth_exponent(compute_report("A", 2, 5), 3)
    assert b.regime == RANK2_STRONG
    assert b.exponent == 33
    assert b.quad_coeff == Fraction(3, 2)


def test_general_regime_example():
    b = growth_exponent(compute_report("G", 2, 2), 2)
    assert b.regime == GENERAL
    assert b.exponent == Fraction(97, 3)
    assert b.quad_coeff == Fraction(13, 6)


def test_exponent_at_one_is_dimension():
    for fam, l in table_configurations(5):
        for p in (2, 3, 5, 7):
            if golden_row_for(fam, l, p) is None:
                continue
            rep = compute_report(fam, l, p)
            assert growth_exponent(rep, 1).exponent == rep.m, (fam, l, p)


def test_exponent_monotone_and_coefficient_ranges():
    for fam, l, p in [("A", 2, 3), ("A", 2, 5), ("B", 3, 3), ("E", 7, 2),
                      ("D", 4, 2), ("G", 2, 2)]:
        rep = compute_report(fam, l, p)
        b = growth_exponent(rep, 1)
        prev = b.exponent
        for k in range(2, 8):
            cur = growth_exponent(rep, k).exponent
            assert cur > prev
            prev = cur
        if b.regime == GENERAL:
            assert Fraction(3, 2) < b.quad_coeff <= Fraction(17, 6)
            if rep.v <= Fraction(1, 2):
                assert b.quad_coeff <= Fraction(5, 2)
        else:
            assert b.quad_coeff == Fraction(3, 2)
    # the one configuration family reaching v = 2/3 hits 17/6 exactly
    assert growth_exponent(compute_report("A", 2, 3), 1).quad_coeff == Fraction(17, 6)


def test_rational_k_consistency():
    rep = compute_report("C", 2, 3)
    for k in range(1, 6):
        assert exponent_at(rep, Fraction(k)) == growth_exponent(rep, k).exponent
    assert exponent_at(rep, Fraction(1, 2)) == (
        growth_exponent(rep, 1).quad_coeff / 4
        + growth_exponent(rep, 1).lin_coeff / 2
    )


def test_k_validation():
    rep = compute_report("A", 2, 5)
    for bad in (0, -1):
        with pytest.raises(ValueError):
            growth_exponent(rep, bad)
    with pytest.raises(ValueError):
        generator_bound(rep, -1)


def test_generator_bound_values():
    assert generator_bound(compute_report("C", 2, 3), 0) == 10
    assert generator_bound(compute_report("C", 2, 3), 2) == 16
    rep = compute_report("E", 8, 2)
    assert generator_bound(rep, 1) == 248 + Fraction(103, 29)
    rep = compute_report("G", 2, 2)  # general regime: slope 3 + 4v
    assert generator_bound(rep, 1) == 14 + Fraction(13, 3)


def test_baseline_and_improvement():
    assert baseline_exponent(8, 2) == 30
    rep = compute_report("A", 2, 5)
    rows = improvement_table(rep, [1, 2, 3])
    assert rows[0].difference == Fraction(7, 2)
    assert all(r.difference > 0 for r in rows)
    assert rows[2].exponent == 33
