"""Invariant reports per (family, rank, prime) and the golden table.

The golden table transcribes, row for row, the reference values of the
form nullity r, the dual Coxeter number, the ridgeline number
v = l/(2(h-1)-r), the minimal-nilpotent centralizer dimension
m - 2(h-1), and a semisimple witness coweight with its centralizer
dimension in the adjoint form.  ``compute_report`` derives every value
from scratch (exact linear algebra only) and ``verify_table_row``
compares the two sides exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .chevalley_algebra import (
    ADJOINT,
    algebra,
    centralizer_dim,
    invariant_form,
    semisimple_centralizer_dim,
)
from .encoding import frac_str
from .root_data import INTOLERABLE, classify_prime, root_system

SCHEMA_VERSION = 1


class IntolerablePrimeError(ValueError):
    """Raised for primes where a proper non-central ideal exists."""


class RankRestrictionError(ValueError):
    """Raised for ranks the invariants are not defined for (l = 1)."""


@dataclass(frozen=True)
class GoldenRow:
    """One parameterized row of the reference table."""

    family: str
    p_condition: str
    applies: object  # (l, p) -> bool
    r: int
    h_dual: object  # l -> int
    v: object  # l -> Fraction
    min_nilpotent_centralizer: object  # l -> int
    witness: str
    witness_dim: object  # l -> int


GOLDEN_TABLE = (
    GoldenRow("A", "(p,l+1)=1", lambda l, p: l >= 2 and (l + 1) % p != 0,
              0, lambda l: l + 1, lambda l: Fraction(1, 2),
              lambda l: l * l, "y_1", lambda l: l * l),
    GoldenRow("A", "p|(l+1)", lambda l, p: l >= 2 and (l + 1) % p == 0,
              1, lambda l: l + 1, lambda l: Fraction(l, 2 * l - 1),
              lambda l: l * l, "y_1", lambda l: l * l),
    GoldenRow("B", "p!=2", lambda l, p: p != 2,
              0, lambda l: 2 * l - 1,
              lambda l: Fraction(1, 4) * (1 + Fraction(1, l - 1)),
              lambda l: 2 * l * l - 3 * l + 4, "y_1",
              lambda l: 2 * l * l - 3 * l + 2),
    GoldenRow("C", "p!=2", lambda l, p: p != 2,
              0, lambda l: l + 1, lambda l: Fraction(1, 2),
              lambda l: 2 * l * l - l, "y_1",
              lambda l: 2 * l * l - 3 * l + 2),
    GoldenRow("D", "p!=2", lambda l, p: p != 2,
              0, lambda l: 2 * l - 2,
              lambda l: Fraction(1, 4) * (1 + Fraction(3, 2 * l - 3)),
              lambda l: 2 * l * l - 5 * l + 6, "y_1",
              lambda l: 2 * l * l - 5 * l + 4),
    GoldenRow("D", "p=2, l even", lambda l, p: p == 2 and l % 2 == 0,
              2, lambda l: 2 * l - 2,
              lambda l: Fraction(1, 4) * (1 + Fraction(2, l - 2)),
              lambda l: 2 * l * l - 5 * l + 6, "y_1",
              lambda l: 2 * l * l - 5 * l + 4),
    GoldenRow("D", "p=2, l odd", lambda l, p: p == 2 and l % 2 == 1,
              1, lambda l: 2 * l - 2,
              lambda l: Fraction(1, 4) * (1 + Fraction(7, 4 * l - 7)),
              lambda l: 2 * l * l - 5 * l + 6, "y_1",
              lambda l: 2 * l * l - 5 * l + 4),
    GoldenRow("G", "p>3", lambda l, p: p > 3,
              0, lambda l: 4, lambda l: Fraction(1, 3), lambda l: 8, "y_1",
              lambda l: 4),
    GoldenRow("G", "p=2", lambda l, p: p == 2,
              0, lambda l: 4, lambda l: Fraction(1, 3), lambda l: 8, "y_1",
              lambda l: 6),
    GoldenRow("F", "p!=2", lambda l, p: p != 2,
              0, lambda l: 9, lambda l: Fraction(1, 4), lambda l: 36, "y_1",
              lambda l: 22),
    GoldenRow("E", "E6, p!=3", lambda l, p: l == 6 and p != 3,
              0, lambda l: 12, lambda l: Fraction(3, 11), lambda l: 56, "y_1",
              lambda l: 46),
    GoldenRow("E", "E6, p=3", lambda l, p: l == 6 and p == 3,
              1, lambda l: 12, lambda l: Fraction(2, 7), lambda l: 56, "y_1",
              lambda l: 46),
    GoldenRow("E", "E7, p!=2", lambda l, p: l == 7 and p != 2,
              0, lambda l: 18, lambda l: Fraction(7, 34), lambda l: 99, "y_7",
              lambda l: 79),
    GoldenRow("E", "E7, p=2", lambda l, p: l == 7 and p == 2,
              1, lambda l: 18, lambda l: Fraction(7, 33), lambda l: 99, "y_7",
              lambda l: 79),
    GoldenRow("E", "E8, p!=2", lambda l, p: l == 8 and p != 2,
              0, lambda l: 30, lambda l: Fraction(4, 29), lambda l: 190, "y_8",
              lambda l: 134),
    GoldenRow("E", "E8, p=2", lambda l, p: l == 8 and p == 2,
              0, lambda l: 30, lambda l: Fraction(4, 29), lambda l: 190, "y_3",
              lambda l: 136),
)


@dataclass(frozen=True)
class GoldenValues:
    """A golden row resolved at a concrete rank."""

    family: str
    rank: int
    p_condition: str
    r: int
    h_dual: int
    v: Fraction
    min_nilpotent_centralizer: int
    witness: str
    witness_dim: int


def golden_row_for(family: str, l: int, p: int):
    """The applicable golden row at (family, l, p), or None."""
    for row in GOLDEN_TABLE:
        if row.family == family and row.applies(l, p):
            return GoldenValues(
                family=family,
                rank=l,
                p_condition=row.p_condition,
                r=row.r,
                h_dual=row.h_dual(l),
                v=row.v(l),
                min_nilpotent_centralizer=row.min_nilpotent_centralizer(l),
                witness=row.witness,
                witness_dim=row.witness_dim(l),
            )
    return None


@dataclass(frozen=True)
class InvariantsReport:
    """All computed invariants of one algebra, exact."""

    family: str
    rank: int
    p: int
    m: int
    prime_class: str
    nullity: int  # r
    h_dual: int
    s: int  # max non-central centralizer dimension
    v: Fraction
    min_nilpotent_centralizer: int
    witness: str
    witness_dim: int

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "family": self.family,
            "rank": self.rank,
            "p": self.p,
            "dimension": self.m,
            "prime_class": self.prime_class,
            "nullity": self.nullity,
            "dual_coxeter": self.h_dual,
            "max_noncentral_centralizer": self.s,
            "ridgeline": frac_str(self.v),
            "min_nilpotent_centralizer": self.min_nilpotent_centralizer,
            "witness": {"label": self.witness, "centralizer_dim": self.witness_dim},
        }


CSV_HEADER = (
    "type,p,r,h_dual,v,min_nilpotent_centralizer,witness,witness_centralizer_dim"
)


def report_csv_row(rep: InvariantsReport) -> str:
    return ",".join(
        [
            f"{rep.family}{rep.rank}",
            str(rep.p),
            str(rep.nullity),
            str(rep.h_dual),
            frac_str(rep.v),
            str(rep.min_nilpotent_centralizer),
            rep.witness,
            str(rep.witness_dim),
        ]
    )


def _long_simple_root(rs):
    for i in range(rs.rank):
        simple = tuple(int(i == t) for t in range(rs.rank))
        if rs.length_class[rs.root_index(simple)] == "long":
            return simple
    raise AssertionError("no long simple root")


@lru_cache(maxsize=None)
def compute_report(family: str, l: int, p: int) -> InvariantsReport:
    """Derive (r, h, s, v, witness) from scratch for one configuration.

    Refuses intolerable primes (the bounds are vacuous there) and rank 1.
    """
    if l < 2:
        raise RankRestrictionError(
            f"invariants require rank >= 2, got {family}{l}"
        )
    rs = root_system(family, l)
    prime_class = classify_prime(rs, p)
    if prime_class == INTOLERABLE:
        raise IntolerablePrimeError(
            f"p={p} is intolerable for {family}{l}: the short root vectors "
            "generate a proper ideal not contained in the centre"
        )
    L = algebra(family, l, p)
    m = L.m
    h_dual = rs.dual_coxeter
    r = invariant_form(L).nullity
    s = centralizer_dim(L, L.highest_root_vector())
    s_long = centralizer_dim(L, L.root_vector(_long_simple_root(rs)))
    if s != s_long:
        raise AssertionError(
            f"{family}{l}/F_{p}: centralizer dims differ between the highest "
            f"root ({s}) and a long simple root ({s_long})"
        )
    if s != m - 2 * (h_dual - 1):
        raise AssertionError(
            f"{family}{l}/F_{p}: minimal nilpotent centralizer {s} != "
            f"m - 2(h-1) = {m - 2 * (h_dual - 1)}"
        )
    v = Fraction(l, m - s - r)
    assert v == Fraction(l, 2 * (h_dual - 1) - r)
    golden = golden_row_for(family, l, p)
    witness = golden.witness if golden else "y_1"
    wd = semisimple_centralizer_dim(algebra(family, l, p, ADJOINT), witness)
    return InvariantsReport(
        family=family,
        rank=l,
        p=p,
        m=m,
        prime_class=prime_class,
        nullity=r,
        h_dual=h_dual,
        s=s,
        v=v,
        min_nilpotent_centralizer=s,
        witness=witness,
        witness_dim=wd,
    )


@dataclass(frozen=True)
class TableRowCheck:
    """Outcome of comparing a computed report against the golden table."""

    family: str
    rank: int
    p: int
    status: str  # 'match' | 'mismatch' | 'skip'
    detail: tuple  # (field, computed, expected) triples on mismatch
    p_condition: str

    @property
    def ok(self):
        return self.status != "mismatch"


def verify_table_row(rep: InvariantsReport, golden=None) -> TableRowCheck:
    """Exact field-by-field comparison against the applicable golden row."""
    if golden is None:
        golden = golden_row_for(rep.family, rep.rank, rep.p)
    if golden is None:
        return TableRowCheck(rep.family, rep.rank, rep.p, "skip", (), "none")
    diffs = []
    for field, computed, expected in [
        ("r", rep.nullity, golden.r),
        ("h_dual", rep.h_dual, golden.h_dual),
        ("v", rep.v, golden.v),
        ("min_nilpotent_centralizer", rep.min_nilpotent_centralizer,
         golden.min_nilpotent_centralizer),
        ("witness", rep.witness, golden.witness),
        ("witness_dim", rep.witness_dim, golden.witness_dim),
    ]:
        if computed != expected:
            diffs.append((field, computed, expected))
    status = "mismatch" if diffs else "match"
    return TableRowCheck(
        rep.family, rep.rank, rep.p, status, tuple(diffs), golden.p_condition
    )


def table_configurations(max_rank: int = 8):
    """All (family, rank) pairs instantiable at rank <= max_rank."""
    out = []
    for l in range(2, max_rank + 1):
        out.append(("A", l))
    for l in range(3, max_rank + 1):
        out.append(("B", l))
    for l in range(2, max_rank + 1):
        out.append(("C", l))
    for l in range(4, max_rank + 1):
        out.append(("D", l))
    for l in (6, 7, 8):
        if l <= max_rank:
            out.append(("E", l))
    if max_rank >= 4:
        out.append(("F", 4))
    if max_rank >= 2:
        out.append(("G", 2))
    return out
