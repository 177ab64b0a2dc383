"""Subgroup-growth exponent evaluation, all arithmetic exact.

For a tolerable prime and rank l >= 2, the number of index-p^k open
subgroups of the principal congruence subgroup is bounded by p^E with

    E = (3+4v)/2 * k^2 + (m - 3/2 - 2v) * k        (general), or
    E = 3/2 * k^2 + (m - 3/2) * k                  (rank 2, very good p),

where v is the ridgeline number.  The module only evaluates exponents
and the supporting generator bound d(H) <= m + (3+4v) log_p|G:H|; no
group objects are instantiated.  ``baseline_exponent`` is the earlier
uniform bound (7/2)k^2 + mk kept for comparison tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .encoding import frac_str
from .invariants import InvariantsReport
from .root_data import VERY_GOOD

GENERAL = "general"
RANK2_STRONG = "rank2_strong"


def regime_for(rep: InvariantsReport) -> str:
    if rep.rank == 2 and rep.prime_class == VERY_GOOD:
        return RANK2_STRONG
    return GENERAL


def _coefficients(rep: InvariantsReport, regime: str):
    """(quadratic, linear) coefficients of the exponent in k."""
    if regime == RANK2_STRONG:
        return Fraction(3, 2), Fraction(rep.m) - Fraction(3, 2)
    v = rep.v
    return (3 + 4 * v) / 2, Fraction(rep.m) - Fraction(3, 2) - 2 * v


@dataclass(frozen=True)
class BoundReport:
    """Exact exponent data for one (configuration, k)."""

    report: InvariantsReport
    k: int
    regime: str
    exponent: Fraction
    quad_coeff: Fraction
    lin_coeff: Fraction
    baseline_exponent: Fraction
    generator_coefficients: tuple  # (m, slope of the generator bound)

    def to_json_dict(self) -> dict:
        return {
            "schema_version": 1,
            "family": self.report.family,
            "rank": self.report.rank,
            "p": self.report.p,
            "k": self.k,
            "regime": self.regime,
            "exponent": frac_str(self.exponent),
            "quad_coeff": frac_str(self.quad_coeff),
            "lin_coeff": frac_str(self.lin_coeff),
            "baseline_exponent": frac_str(self.baseline_exponent),
            "generator_coefficients": [
                str(self.generator_coefficients[0]),
                frac_str(self.generator_coefficients[1]),
            ],
        }


def exponent_at(rep: InvariantsReport, k, regime=None) -> Fraction:
    """The exponent at any exact k (useful for rational consistency checks)."""
    if regime is None:
        regime = regime_for(rep)
    quad, lin = _coefficients(rep, regime)
    k = Fraction(k)
    return quad * k * k + lin * k


def growth_exponent(rep: InvariantsReport, k: int) -> BoundReport:
    """Exponent E with a_{p^k} <= p^E for the configuration of ``rep``."""
    if k <= 0:
        raise ValueError(f"k must be a positive integer, got {k}")
    regime = regime_for(rep)
    quad, lin = _coefficients(rep, regime)
    slope = Fraction(3) if regime == RANK2_STRONG else 3 + 4 * rep.v
    return BoundReport(
        report=rep,
        k=k,
        regime=regime,
        exponent=exponent_at(rep, k, regime),
        quad_coeff=quad,
        lin_coeff=lin,
        baseline_exponent=baseline_exponent(rep.m, k),
        generator_coefficients=(rep.m, slope),
    )


def generator_bound(rep: InvariantsReport, j) -> Fraction:
    """Bound on d(H) at index log p^j: m + (3+4v) j, or m + 3j when strong."""
    j = Fraction(j)
    if j < 0:
        raise ValueError("index exponent must be non-negative")
    if regime_for(rep) == RANK2_STRONG:
        return rep.m + 3 * j
    return rep.m + (3 + 4 * rep.v) * j


def baseline_exponent(m: int, k) -> Fraction:
    """The earlier uniform exponent (7/2)k^2 + mk."""
    k = Fraction(k)
    return Fraction(7, 2) * k * k + m * k


@dataclass(frozen=True)
class ImprovementRow:
    k: int
    exponent: Fraction  # bounds a_{p^k}
    baseline: Fraction  # bounds s_{p^k}; not a like-for-like counter
    difference: Fraction

    def to_json_dict(self):
        return {
            "k": self.k,
            "exponent": frac_str(self.exponent),
            "baseline_exponent": frac_str(self.baseline),
            "difference": frac_str(self.difference),
        }


def improvement_table(rep: InvariantsReport, ks) -> tuple:
    """Side-by-side exponents per k.

    The two columns bound different counters (subgroups of exact index
    versus index at most p^k); the comparison is of exponent shape only.
    """
    rows = []
    for k in ks:
        e = exponent_at(rep, k)
        b = baseline_exponent(rep.m, k)
        rows.append(ImprovementRow(k=k, exponent=e, baseline=b, difference=b - e))
    return tuple(rows)


IMPROVEMENT_CSV_HEADER = "k,exponent,baseline_exponent,difference"


def improvement_csv_row(row: ImprovementRow) -> str:
    return ",".join(
        [str(row.k), frac_str(row.exponent), frac_str(row.baseline),
         frac_str(row.difference)]
    )
