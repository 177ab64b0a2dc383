"""Acceptance suite: one test per criterion, printing a pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines.  Every tolerance is exact (integer or rational equality); the
randomized criteria use the fixed seeds below at the full stated trial
counts.
"""

from fractions import Fraction
from functools import lru_cache

import numpy as np

from chevalley.adjoint_group import is_bracket_automorphism, root_automorphism
from chevalley.chevalley_algebra import (
    algebra,
    form_is_invariant,
    invariant_form,
    orthogonal_char2_form,
)
from chevalley.encoding import canonical_json
from chevalley.exact_linalg import matmul_mod
from chevalley.growth_bounds import GENERAL, RANK2_STRONG, growth_exponent
from chevalley.invariants import (
    compute_report,
    golden_row_for,
    verify_table_row,
)
from chevalley.root_data import structure_constants
from chevalley.verifier import (
    TrialConfig,
    check_centralizer_ceiling,
    check_codim_bound,
    check_codim_bound_strong,
    check_spanning_threshold,
    rank2_orbit_catalogue,
    run_suite,
)

SEED = 1729
PRIMES = (2, 3, 5, 7)

#: the instantiable table rows at rank <= 8
TABLE_CONFIGS = (
    [("A", l) for l in range(2, 9)]
    + [("B", l) for l in range(3, 9)]
    + [("C", l) for l in range(2, 9)]
    + [("D", l) for l in range(4, 8)]
    + [("E", 6), ("E", 7), ("E", 8), ("F", 4), ("G", 2)]
)

GENERAL_BOUND_CONFIGS = [("A", 2, 3), ("A", 4, 5), ("D", 4, 2), ("E", 6, 3)]
STRONG_BOUND_CONFIGS = [("A", 2, 5), ("C", 2, 3), ("G", 2, 5)]


def _tolerable_primes(fam, l):
    return [p for p in PRIMES if golden_row_for(fam, l, p) is not None]


@lru_cache(maxsize=None)
def _form(fam, l, p):
    return invariant_form(algebra(fam, l, p))


def _outcome(n, name, ok, detail=""):
    line = f"ACCEPTANCE {n:>2} {name}: {'PASS' if ok else 'FAIL'}"
    if detail:
        line += f" ({detail})"
    print(line, flush=True)
    assert ok, line


def test_criterion_01_table_reproduction():
    """Every instantiable table row matches the golden values exactly."""
    rows = 0
    mismatches = []
    for fam, l in TABLE_CONFIGS:
        for p in _tolerable_primes(fam, l):
            chk = verify_table_row(compute_report(fam, l, p))
            rows += 1
            if not chk.ok:
                mismatches.append((fam, l, p, chk.detail))
    _outcome(1, "table reproduction", not mismatches,
             f"{rows} rows compared exactly" if not mismatches else str(mismatches))


def test_criterion_02_rank2_catalogue():
    """Nilpotent representatives have the stated centralizer dimensions."""
    bad = []
    for fam, primes in [("A", (2, 5, 7)), ("C", (3, 5, 7)), ("G", (5, 7))]:
        for p in primes:
            out = rank2_orbit_catalogue(algebra(fam, 2, p), compute_report(fam, 2, p))
            if not out.ok:
                bad.append((fam, p, out.summary))
    _outcome(2, "rank-2 orbit catalogue", not bad, "A2/C2/G2 across stated primes")


def test_criterion_03_codim_bound_general():
    """10^4 boundary-biased trials per configuration, zero violations."""
    failures = []
    for fam, l, p in GENERAL_BOUND_CONFIGS:
        rep = compute_report(fam, l, p)
        out = check_codim_bound(
            algebra(fam, l, p), rep,
            TrialConfig(seed=SEED, trials=10_000, policy="boundary", jobs=4),
        )
        if not out.ok:
            failures.append((fam, l, p, len(out.violations)))
    _outcome(3, "general codimension bound", not failures,
             "4 configs x 10^4 trials")


def test_criterion_04_codim_bound_strong():
    """10^4 trials per rank-2 very-good configuration, zero violations."""
    failures = []
    for fam, l, p in STRONG_BOUND_CONFIGS:
        rep = compute_report(fam, l, p)
        out = check_codim_bound_strong(
            algebra(fam, l, p), rep,
            TrialConfig(seed=SEED, trials=10_000, policy="boundary", jobs=4),
        )
        if not out.ok:
            failures.append((fam, l, p, len(out.violations)))
    _outcome(4, "strong codimension bound", not failures,
             "3 configs x 10^4 trials")


def test_criterion_05_spanning_threshold():
    """dim U + dim V > m+s+r forces [U,V] = g, 10^3 trials per config."""
    failures = []
    for fam, l, p in GENERAL_BOUND_CONFIGS:
        rep = compute_report(fam, l, p)
        out = check_spanning_threshold(
            algebra(fam, l, p), rep, TrialConfig(seed=SEED, trials=1_000, jobs=4)
        )
        if not out.ok:
            failures.append((fam, l, p))
    _outcome(5, "spanning threshold", not failures, "4 configs x 10^3 trials")


def test_criterion_06_centralizer_ceiling():
    """10^5 mixed samples per rank <= 4 configuration; max equals s."""
    failures = []
    configs = [(f, l) for f, l in TABLE_CONFIGS if l <= 4]
    total = 0
    for fam, l in configs:
        for p in _tolerable_primes(fam, l):
            rep = compute_report(fam, l, p)
            out = check_centralizer_ceiling(
                algebra(fam, l, p), rep,
                TrialConfig(seed=SEED, trials=100_000, jobs=4),
            )
            total += 1
            if not (out.ok and out.summary["max_observed"] == rep.s
                    and out.summary["highest_root_centralizer"] == rep.s):
                failures.append((fam, l, p, out.summary))
    _outcome(6, "centralizer ceiling", not failures,
             f"{total} configs x 10^5 samples")


def test_criterion_07_structure_constant_integrity():
    """Antisymmetry and the integral Jacobi identity on all basis triples."""
    triples = 0
    for fam, l in TABLE_CONFIGS:
        cs = structure_constants(fam, l)
        pairs = cs.validate(jacobi=True)  # raises on any violation
        m = cs.dimension
        assert pairs == m * (m - 1) // 2
        for i, j in ((0, 1), (l, l + 1), (m - 1, 0)):
            fwd = dict(cs.bracket_basis(i, j))
            bwd = dict(cs.bracket_basis(j, i))
            assert fwd == {k: -v for k, v in bwd.items()}
            assert cs.bracket_basis(i, i) == ()
        triples += m**3
    _outcome(7, "structure-constant integrity", True,
             f"{triples:,} ordered basis triples covered")


def test_criterion_08_invariant_form_integrity():
    """Associativity on all triples, nullity = golden r, D_l char-2 match."""
    failures = []
    for fam, l in TABLE_CONFIGS:
        for p in _tolerable_primes(fam, l):
            form = _form(fam, l, p)
            golden = golden_row_for(fam, l, p)
            if form.nullity != golden.r:
                failures.append((fam, l, p, "nullity", form.nullity, golden.r))
            if not form_is_invariant(algebra(fam, l, p), form.matrix):
                failures.append((fam, l, p, "associativity"))
    for l in (4, 5, 6, 7):
        explicit = orthogonal_char2_form(l)
        generic = _form("D", l, 2)
        if explicit.kernel != generic.kernel:
            failures.append(("D", l, 2, "explicit-vs-generic kernel"))
        if not form_is_invariant(algebra("D", l, 2), explicit.matrix):
            failures.append(("D", l, 2, "explicit associativity"))
    _outcome(8, "invariant-form integrity", not failures,
             "all rows + D4-D7 char-2 construction")


def test_criterion_09_adjoint_automorphisms():
    """Bracket preservation and the one-parameter law, exhaustively."""
    configs = [(f, l) for f, l in TABLE_CONFIGS if l <= 4] + [("A", 2)]
    failures = []
    for fam, l in dict.fromkeys(configs):
        for p in (2, 3, 5):
            from chevalley.root_data import INTOLERABLE, classify_prime, root_system

            if classify_prime(root_system(fam, l), p) == INTOLERABLE:
                continue
            L = algebra(fam, l, p)
            for root in L.rs.roots:
                mats = [root_automorphism(L, root, t).matrix.entries
                        for t in range(p)]
                if not np.array_equal(mats[0], np.eye(L.m, dtype=np.int64)):
                    failures.append((fam, l, p, root, "x(0) != id"))
                for s in range(p):
                    for t in range(p):
                        if not np.array_equal(
                            matmul_mod(mats[s], mats[t], p), mats[(s + t) % p]
                        ):
                            failures.append((fam, l, p, root, "one-parameter law"))
                for t in range(p):
                    if not is_bracket_automorphism(L, mats[t]):
                        failures.append((fam, l, p, root, t, "bracket"))
    _outcome(9, "adjoint automorphisms", not failures,
             "all roots x all t, ranks <= 4, p in {2,3,5}")


def test_criterion_10_bound_calculator():
    """Exponent at k = 1 equals m; pinned values; quadratic coefficient caps."""
    failures = []
    for fam, l in TABLE_CONFIGS:
        for p in _tolerable_primes(fam, l):
            rep = compute_report(fam, l, p)
            b = growth_exponent(rep, 1)
            if b.exponent != rep.m:
                failures.append((fam, l, p, "k=1"))
            if b.regime == GENERAL:
                if rep.v <= Fraction(1, 2) and b.quad_coeff > Fraction(5, 2):
                    failures.append((fam, l, p, "quad cap 5/2"))
                if b.quad_coeff > Fraction(17, 6):
                    failures.append((fam, l, p, "quad cap 17/6"))
            elif b.quad_coeff != Fraction(3, 2):
                failures.append((fam, l, p, "strong quad"))
    pinned = growth_exponent(compute_report("A", 2, 5), 3)
    if not (pinned.exponent == 33 and pinned.regime == RANK2_STRONG):
        failures.append(("A", 2, 5, "k=3 pinned"))
    special = growth_exponent(compute_report("A", 2, 3), 1)
    if special.quad_coeff != Fraction(17, 6):
        failures.append(("A", 2, 3, "v=2/3 coefficient"))
    _outcome(10, "bound calculator", not failures, "every row, exact")


def test_criterion_11_determinism():
    """Byte-identical suite reports across reruns and worker counts."""
    ok = True
    for fam, l, p, trials in [("C", 2, 3, 300), ("D", 4, 2, 150)]:
        serial = canonical_json(
            run_suite(fam, l, p, TrialConfig(seed=SEED, trials=trials, jobs=1))
        )
        rerun = canonical_json(
            run_suite(fam, l, p, TrialConfig(seed=SEED, trials=trials, jobs=1))
        )
        parallel = canonical_json(
            run_suite(fam, l, p, TrialConfig(seed=SEED, trials=trials, jobs=4))
        )
        ok = ok and serial == rerun == parallel
    _outcome(11, "determinism", ok, "serial rerun + 4-way parallel, byte-equal")
