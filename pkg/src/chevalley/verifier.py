"""Seeded randomized checks of the codimension and centralizer bounds.

Every check derives one RNG per trial from (seed, check tag, trial
index), so reports are byte-identical across runs and across worker
counts, violations re-verify independently from their serialized
witnesses, and parallel execution merges canonically by trial index.

Checks whose statements are proved for the covered configurations
("theorem-backed") are expected to report zero violations; a violation
there means a build bug.  ``search_strong_bound`` is different: it
probes an open statement in rank >= 3 and reports witnesses as
findings.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .adjoint_group import random_group_element
from .chevalley_algebra import LieAlgebraFp, centralizer, centralizer_dim
from .encoding import canonical_json, frac_str
from .exact_linalg import (
    EchelonAccumulator,
    Subspace,
    batch_rank,
    intersect,
    matmul_mod,
    random_subspace,
    span_sum,
)
from .invariants import InvariantsReport, compute_report
from .root_data import VERY_GOOD

DEFAULT_SEED = 1729

_CHECK_TAGS = {
    "codim_bound": 1,
    "codim_bound_strong": 2,
    "spanning_threshold": 3,
    "centralizer_ceiling": 4,
    "bracket_rank_bound": 5,
    "strong_bound_search": 6,
    "graded_families": 7,
}


class RegimeError(ValueError):
    """A check was requested outside the regime it is stated for."""


@dataclass(frozen=True)
class TrialConfig:
    """Reproducible trial parameters; identical config => identical stream."""

    seed: int = DEFAULT_SEED
    trials: int = 1000
    policy: str = "boundary"  # 'boundary' | 'uniform'
    dims: tuple | None = None  # fixed (dim U, dim V) when set
    jobs: int = 1

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trial count must be >= 1")
        if self.policy not in ("boundary", "uniform"):
            raise ValueError(f"unknown sampling policy {self.policy!r}")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")

    def to_json_dict(self):
        # jobs is an execution detail: reports are canonical across workers
        return {
            "seed": self.seed,
            "trials": self.trials,
            "policy": self.policy,
            "dims": list(self.dims) if self.dims else None,
        }


@dataclass(frozen=True)
class ViolationReport:
    """Outcome of one check over one configuration."""

    check: str
    family: str
    rank: int
    p: int
    config: TrialConfig
    trials: int
    violations: tuple  # JSON-ready dicts, ordered by trial index
    min_slack: Fraction | None
    summary: dict = field(default_factory=dict)

    @property
    def ok(self):
        return not self.violations

    def to_json_dict(self):
        return {
            "schema_version": 1,
            "check": self.check,
            "family": self.family,
            "rank": self.rank,
            "p": self.p,
            "config": self.config.to_json_dict(),
            "trials": self.trials,
            "violations": list(self.violations),
            "min_slack": None if self.min_slack is None else frac_str(self.min_slack),
            "summary": self.summary,
        }

    def to_json(self):
        return canonical_json(self.to_json_dict())


def _map_trials(cfg: TrialConfig, check: str, fn):
    tag = _CHECK_TAGS[check]

    def call(i):
        return fn(i, np.random.default_rng([cfg.seed, tag, i]))

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
            return list(ex.map(call, range(cfg.trials)))
    return [call(i) for i in range(cfg.trials)]


def _draw_dims(rng, m: int, threshold: int, cfg: TrialConfig):
    """Dimension pair per policy; boundary biases dim U + dim V near the
    spanning threshold where the bound is tightest."""
    if cfg.dims is not None:
        return cfg.dims
    if cfg.policy == "uniform" or rng.random() < 0.25:
        return int(rng.integers(0, m + 1)), int(rng.integers(0, m + 1))
    total = int(np.clip(threshold + rng.integers(-3, 4), 0, 2 * m))
    du = int(rng.integers(max(0, total - m), min(m, total) + 1))
    return du, total - du


def commutator_span(L: LieAlgebraFp, u: Subspace, v: Subspace) -> Subspace:
    """Span of [x, y] over x in U, y in V (basis pairs suffice)."""
    for s in (u, v):
        if (s.m, s.p) != (L.m, L.p):
            raise ValueError(
                f"subspace of F_{s.p}^{s.m} does not live in {L!r}"
            )
    acc = EchelonAccumulator(L.m, L.p)
    if u.dim and v.dim:
        vt = v.basis.T
        for row in u.basis:
            acc.add(matmul_mod(L.ad(row), vt, L.p).T)
            if acc.rank == L.m:
                break
    return acc.subspace()


def _codim_check(L, rep, cfg, check, factor: Fraction) -> ViolationReport:
    """Shared engine: cod([U,V]) <= factor * (cod U + cod V)."""
    threshold = L.m + rep.s + rep.nullity

    def one(i, rng):
        du, dv = _draw_dims(rng, L.m, threshold, cfg)
        u = random_subspace(L.m, du, L.p, rng)
        v = random_subspace(L.m, dv, L.p, rng)
        cod_uv = L.m - commutator_span(L, u, v).dim
        bound = factor * (u.codim + v.codim)
        slack = bound - cod_uv
        if slack < 0:
            return slack, {
                "trial": i,
                "dim_u": du,
                "dim_v": dv,
                "cod_uv": cod_uv,
                "bound": frac_str(bound),
                "slack": frac_str(slack),
                "u": u.to_digit_strings(),
                "v": v.to_digit_strings(),
            }
        return slack, None

    results = _map_trials(cfg, check, one)
    violations = tuple(v for _, v in results if v is not None)
    min_slack = min(s for s, _ in results)
    return ViolationReport(
        check=check,
        family=rep.family,
        rank=rep.rank,
        p=rep.p,
        config=cfg,
        trials=cfg.trials,
        violations=violations,
        min_slack=min_slack,
        summary={"bound_factor": frac_str(factor)},
    )


def check_codim_bound(L: LieAlgebraFp, rep: InvariantsReport,
                      cfg: TrialConfig) -> ViolationReport:
    """cod([U,V]) <= (1+v)(cod U + cod V) on random subspace pairs."""
    if rep.rank < 2:
        raise RegimeError("the codimension bound needs rank >= 2")
    return _codim_check(L, rep, cfg, "codim_bound", 1 + rep.v)


def check_codim_bound_strong(L: LieAlgebraFp, rep: InvariantsReport,
                             cfg: TrialConfig) -> ViolationReport:
    """cod([U,V]) <= cod U + cod V; stated for rank 2, very good p."""
    if rep.rank != 2 or rep.prime_class != VERY_GOOD:
        raise RegimeError(
            "the strong codimension bound is stated only for rank 2 with a "
            f"very good prime; got {rep.family}{rep.rank}, p={rep.p} "
            f"({rep.prime_class})"
        )
    return _codim_check(L, rep, cfg, "codim_bound_strong", Fraction(1))


def search_strong_bound(L: LieAlgebraFp, rep: InvariantsReport,
                        cfg: TrialConfig) -> ViolationReport:
    """Probe cod([U,V]) <= cod U + cod V in rank >= 3 (open statement).

    Witnesses are findings, not failures; they serialize for independent
    re-verification.
    """
    if rep.rank < 3 or rep.prime_class != VERY_GOOD:
        raise RegimeError(
            "the strong-bound search runs at rank >= 3 with a very good "
            f"prime; got {rep.family}{rep.rank}, p={rep.p} ({rep.prime_class})"
        )
    return _codim_check(L, rep, cfg, "strong_bound_search", Fraction(1))


def check_spanning_threshold(L: LieAlgebraFp, rep: InvariantsReport,
                             cfg: TrialConfig) -> ViolationReport:
    """dim U + dim V > m+s+r forces [U,V] to be the whole algebra."""
    m = L.m
    threshold = m + rep.s + rep.nullity

    def one(i, rng):
        if cfg.dims is not None:
            du, dv = cfg.dims
        else:
            total = int(rng.integers(threshold + 1, 2 * m + 1))
            du = int(rng.integers(max(0, total - m), min(m, total) + 1))
            dv = total - du
        if du + dv <= threshold:
            raise ValueError("spanning-threshold trial drew dims below the bar")
        u = random_subspace(m, du, L.p, rng)
        v = random_subspace(m, dv, L.p, rng)
        w = commutator_span(L, u, v)
        if w.dim != m:
            return Fraction(0), {
                "trial": i,
                "dim_u": du,
                "dim_v": dv,
                "cod_uv": m - w.dim,
                "bound": frac_str(Fraction(0)),
                "slack": frac_str(Fraction(w.dim - m)),
                "u": u.to_digit_strings(),
                "v": v.to_digit_strings(),
            }
        return Fraction(0), None

    results = _map_trials(cfg, "spanning_threshold", one)
    violations = tuple(v for _, v in results if v is not None)
    return ViolationReport(
        check="spanning_threshold",
        family=rep.family,
        rank=rep.rank,
        p=rep.p,
        config=cfg,
        trials=cfg.trials,
        violations=violations,
        min_slack=None,
        summary={"threshold": L.m + rep.s + rep.nullity},
    )


#: samples per derived RNG stream in the centralizer sweep; fixed so the
#: stream, and therefore the report, never depends on worker count
_CEILING_CHUNK = 1024


def check_centralizer_ceiling(L: LieAlgebraFp, rep: InvariantsReport,
                              cfg: TrialConfig) -> ViolationReport:
    """No non-central element has centralizer dimension above s.

    Mixes dense random vectors, sparse-support vectors, and adjoint
    conjugates of root vectors (large centralizers live on thin loci).
    For rank-2 very-good configurations it additionally asserts that
    sampled centralizer dimensions are even and that elements with
    commuting nonzero semisimple and nilpotent parts are regular.
    Samples are drawn and ranked in fixed-size batches.
    """
    m, p, s = L.m, L.p, rep.s
    tag = _CHECK_TAGS["centralizer_ceiling"]
    rank2_vg = rep.rank == 2 and rep.prime_class == VERY_GOOD
    n_strats = 4 if rank2_vg else 3
    pool_rng = np.random.default_rng([cfg.seed, tag, 2**33])
    pool = [random_group_element(L, rng=pool_rng) for _ in range(16)]
    # root values on the Cartan basis, read off the diagonals of ad(h_i)
    pairing = np.array(
        [L.ad(L.basis_vector(i)).diagonal()[L.rank:] for i in range(rep.rank)]
    ).T  # (n_roots, rank)

    def serialize(x):
        return Subspace.from_rows(x, p, m).to_digit_strings()

    violations = []
    theta_dim = centralizer_dim(L, L.highest_root_vector())
    max_seen = theta_dim
    central = 0
    mixed = 0
    n_roots = len(L.rs.roots)
    for start in range(0, cfg.trials, _CEILING_CHUNK):
        count = min(_CEILING_CHUNK, cfg.trials - start)
        rng = np.random.default_rng([cfg.seed, tag, start])
        strat = (start + np.arange(count)) % n_strats
        x_batch = np.zeros((count, m), dtype=np.int64)
        skip = np.zeros(count, dtype=bool)
        is_mixed = np.zeros(count, dtype=bool)
        dense = np.nonzero(strat == 0)[0]
        x_batch[dense] = rng.integers(0, p, (dense.size, m), dtype=np.int64)
        for t in np.nonzero(strat == 1)[0]:
            support = rng.choice(m, size=int(rng.integers(1, 4)), replace=False)
            x_batch[t, support] = rng.integers(1, p, support.size)
        conj = np.nonzero(strat == 2)[0]
        if conj.size:
            roots = rng.integers(0, n_roots, conj.size)
            gs = rng.integers(0, len(pool), conj.size)
            for t, ri, gi in zip(conj, roots, gs):
                x_batch[t] = pool[int(gi)][:, L.rank + int(ri)]
        for t in np.nonzero(strat == 3)[0]:
            coords = rng.integers(0, p, rep.rank, dtype=np.int64)
            if not coords.any():
                skip[t] = True
                continue
            vanishing = np.nonzero((pairing @ coords) % p == 0)[0]
            if vanishing.size == 0:
                skip[t] = True
                continue
            ri = int(vanishing[int(rng.integers(0, vanishing.size))])
            x_batch[t, : rep.rank] = coords
            x_batch[t, L.rank + ri] = int(rng.integers(1, p))
            is_mixed[t] = True
        live = np.nonzero(~skip)[0]
        dims = np.full(count, m, dtype=np.int64)
        if live.size:
            ads = np.ascontiguousarray(
                ((L._ad_cols @ x_batch[live].T) % p).T
            ).reshape(live.size, m, m)
            dims[live] = m - batch_rank(ads, p)
        for off in live:
            cdim = int(dims[off])
            trial = start + int(off)
            if is_mixed[off]:
                mixed += 1
                if cdim != 2:
                    violations.append({
                        "trial": trial, "kind": "mixed_not_regular",
                        "centralizer_dim": cdim, "x": serialize(x_batch[off]),
                    })
                continue
            if cdim == m:
                central += 1
                continue
            max_seen = max(max_seen, cdim)
            if cdim > s:
                violations.append({
                    "trial": trial, "kind": "ceiling_exceeded",
                    "centralizer_dim": cdim, "s": s,
                    "x": serialize(x_batch[off]),
                })
            if rank2_vg and cdim % 2 != 0:
                violations.append({
                    "trial": trial, "kind": "odd_centralizer_dim",
                    "centralizer_dim": cdim, "x": serialize(x_batch[off]),
                })
    if theta_dim != s:
        violations.append({
            "trial": -1, "kind": "not_attained_at_highest_root",
            "centralizer_dim": theta_dim, "s": s,
        })
    return ViolationReport(
        check="centralizer_ceiling",
        family=rep.family,
        rank=rep.rank,
        p=rep.p,
        config=cfg,
        trials=cfg.trials,
        violations=tuple(violations),
        min_slack=Fraction(s - max_seen),
        summary={
            "s": s,
            "max_observed": int(max_seen),
            "highest_root_centralizer": theta_dim,
            "central_skipped": central,
            "mixed_elements_checked": mixed,
            "parity_checked": rank2_vg,
        },
    )


def check_bracket_rank_bound(L: LieAlgebraFp, cfg: TrialConfig) -> ViolationReport:
    """dim [U,V] >= dim V - dim(V n c(x)) for every x in U."""
    m, p = L.m, L.p

    def one(i, rng):
        du = int(rng.integers(0, m + 1))
        dv = int(rng.integers(0, m + 1))
        u = random_subspace(m, du, p, rng)
        v = random_subspace(m, dv, p, rng)
        if u.dim:
            coeffs = rng.integers(0, p, u.dim, dtype=np.int64)
            x = matmul_mod(coeffs, u.basis, p)
        else:
            x = np.zeros(m, dtype=np.int64)
        lhs = commutator_span(L, u, v).dim
        rhs = v.dim - intersect(v, centralizer(L, x)).dim
        slack = Fraction(lhs - rhs)
        if slack < 0:
            return slack, {
                "trial": i,
                "dim_u": du,
                "dim_v": dv,
                "dim_uv": lhs,
                "rhs": rhs,
                "slack": frac_str(slack),
                "u": u.to_digit_strings(),
                "v": v.to_digit_strings(),
                "x": Subspace.from_rows(x, p, m).to_digit_strings(),
            }
        return slack, None

    results = _map_trials(cfg, "bracket_rank_bound", one)
    violations = tuple(v for _, v in results if v is not None)
    return ViolationReport(
        check="bracket_rank_bound",
        family=L.rs.family,
        rank=L.rank,
        p=L.p,
        config=cfg,
        trials=cfg.trials,
        violations=violations,
        min_slack=min(s for s, _ in results),
        summary={},
    )


#: expected centralizer dimensions of the rank-2 nilpotent representatives,
#: alpha the long simple root, beta the short one (equal lengths in A2),
#: e_r = e_alpha + e_beta regular, e_sr = e_theta + e_beta subregular (G2)
RANK2_CATALOGUE = {
    "A": {"e_alpha": 4, "e_beta": 4, "e_r": 2},
    "C": {"e_alpha": 6, "e_beta": 4, "e_r": 2},
    "G": {"e_alpha": 8, "e_beta": 6, "e_sr": 4, "e_r": 2},
}


def rank2_orbit_catalogue(L: LieAlgebraFp, rep: InvariantsReport) -> ViolationReport:
    """Centralizer dimensions of the rank-2 nilpotent orbit representatives."""
    if rep.rank != 2 or rep.prime_class != VERY_GOOD:
        raise RegimeError(
            "the rank-2 catalogue needs rank 2 and a very good prime; got "
            f"{rep.family}{rep.rank}, p={rep.p} ({rep.prime_class})"
        )
    s1, s2 = (1, 0), (0, 1)
    if L.rs.length_class[L.rs.root_index(s1)] == "long":
        alpha, beta = s1, s2
    else:
        alpha, beta = s2, s1
    elements = {
        "e_alpha": L.root_vector(alpha),
        "e_beta": L.root_vector(beta),
        "e_r": (L.root_vector(alpha) + L.root_vector(beta)) % L.p,
    }
    if rep.family == "G":
        elements["e_sr"] = (L.highest_root_vector() + L.root_vector(beta)) % L.p
    expected = RANK2_CATALOGUE[rep.family]
    computed = {}
    violations = []
    for name, vec in sorted(elements.items()):
        cdim = centralizer_dim(L, vec)
        computed[name] = cdim
        if cdim != expected[name]:
            violations.append({
                "trial": -1, "kind": "catalogue_mismatch", "element": name,
                "centralizer_dim": cdim, "expected": expected[name],
            })
    return ViolationReport(
        check="rank2_catalogue",
        family=rep.family,
        rank=rep.rank,
        p=rep.p,
        config=TrialConfig(seed=0, trials=1),
        trials=1,
        violations=tuple(violations),
        min_slack=None,
        summary={"computed": computed, "expected": expected},
    )


def check_graded_families(L: LieAlgebraFp, rep: InvariantsReport,
                          cfg: TrialConfig, n_degrees: int = 4) -> ViolationReport:
    """Random bracket-closed graded families and the summed generator bound.

    Builds (H_1..H_N) with [H_i,H_j] <= H_{i+j} by closure completion,
    asserts the codimension bound on the balanced degree pairs, and the
    truncated summed inequality
    m + sum cod H'_k <= m + 4(1+v) sum cod H_i with
    H'_k = sum_{i+j=k} [H_i,H_j].  Only degrees <= N enter, where every
    term is fully determined by the truncated family.
    """
    if n_degrees < 2:
        raise ValueError("need at least two degrees")
    m, p = L.m, L.p
    factor = 1 + rep.v

    def one(i, rng):
        h = {k: random_subspace(m, int(rng.integers(0, m + 1)), p, rng)
             for k in range(1, n_degrees + 1)}
        changed = True
        while changed:
            changed = False
            for a in range(1, n_degrees + 1):
                for b in range(a, n_degrees + 1):
                    if a + b > n_degrees:
                        break
                    br = commutator_span(L, h[a], h[b])
                    if not h[a + b].contains_subspace(br):
                        h[a + b] = span_sum(h[a + b], br)
                        changed = True
        viol = []
        for a in range(1, n_degrees + 1):
            for b in (a, a + 1):
                if b > n_degrees or a + b > n_degrees:
                    continue
                cod_uv = m - commutator_span(L, h[a], h[b]).dim
                bound = factor * (h[a].codim + h[b].codim)
                if bound - cod_uv < 0:
                    viol.append({
                        "trial": i, "kind": "degreewise", "i": a, "j": b,
                        "cod_uv": cod_uv, "bound": frac_str(bound),
                        "dims": [h[k].dim for k in range(1, n_degrees + 1)],
                    })
        lhs = Fraction(m)
        for k in range(2, n_degrees + 1):
            acc = Subspace.zero(m, p)
            for a in range(1, k):
                if k - a < 1:
                    continue
                acc = span_sum(acc, commutator_span(L, h[a], h[k - a]))
            lhs += m - acc.dim
        rhs = m + 4 * factor * sum(h[k].codim for k in range(1, n_degrees + 1))
        if lhs > rhs:
            viol.append({
                "trial": i, "kind": "summed",
                "lhs": frac_str(lhs), "rhs": frac_str(rhs),
                "dims": [h[k].dim for k in range(1, n_degrees + 1)],
            })
        return Fraction(rhs - lhs), viol

    results = _map_trials(cfg, "graded_families", one)
    violations = tuple(v for _, vs in results for v in vs)
    return ViolationReport(
        check="graded_families",
        family=rep.family,
        rank=rep.rank,
        p=rep.p,
        config=cfg,
        trials=cfg.trials,
        violations=violations,
        min_slack=min(s for s, _ in results),
        summary={"degrees": n_degrees},
    )


def reverify_violation(L: LieAlgebraFp, violation: dict, check: str) -> bool:
    """Recompute a serialized witness; True when it reproduces the record."""
    u = Subspace.from_digit_strings(violation["u"], L.m, L.p)
    v = Subspace.from_digit_strings(violation["v"], L.m, L.p)
    w = commutator_span(L, u, v)
    if "cod_uv" in violation and (L.m - w.dim) != violation["cod_uv"]:
        return False
    if check in ("codim_bound", "codim_bound_strong", "strong_bound_search"):
        if (u.dim, v.dim) != (violation["dim_u"], violation["dim_v"]):
            return False
    if check == "bracket_rank_bound":
        x_rows = Subspace.from_digit_strings(violation["x"], L.m, L.p)
        x = x_rows.basis[0] if x_rows.dim else np.zeros(L.m, dtype=np.int64)
        rhs = v.dim - intersect(v, centralizer(L, x)).dim
        if w.dim != violation["dim_uv"] or rhs > w.dim:
            return False
    return True


# --- the aggregated suite ---------------------------------------------------

THEOREM_BACKED_CHECKS = (
    "codim_bound",
    "codim_bound_strong",
    "spanning_threshold",
    "centralizer_ceiling",
    "bracket_rank_bound",
    "rank2_catalogue",
    "graded_families",
)


def run_suite(family: str, rank: int, p: int, cfg: TrialConfig,
              suites=None) -> dict:
    """Run the applicable checks for one configuration.

    Returns a JSON-ready dict; `violations_total` counts violations of
    theorem-backed checks only.
    """
    rep = compute_report(family, rank, p)
    from .chevalley_algebra import algebra  # local to avoid cycle at import

    L = algebra(family, rank, p)
    applicable = [
        "codim_bound",
        "spanning_threshold",
        "centralizer_ceiling",
        "bracket_rank_bound",
        "graded_families",
    ]
    if rank == 2 and rep.prime_class == VERY_GOOD:
        applicable += ["codim_bound_strong", "rank2_catalogue"]
    if suites is not None:
        unknown = set(suites) - set(THEOREM_BACKED_CHECKS)
        if unknown:
            raise ValueError(f"unknown suites: {sorted(unknown)}")
        applicable = [s for s in applicable if s in suites]
    reports = {}
    for name in applicable:
        if name == "codim_bound":
            rep_out = check_codim_bound(L, rep, cfg)
        elif name == "codim_bound_strong":
            rep_out = check_codim_bound_strong(L, rep, cfg)
        elif name == "spanning_threshold":
            rep_out = check_spanning_threshold(L, rep, cfg)
        elif name == "centralizer_ceiling":
            rep_out = check_centralizer_ceiling(L, rep, cfg)
        elif name == "bracket_rank_bound":
            rep_out = check_bracket_rank_bound(L, cfg)
        elif name == "rank2_catalogue":
            rep_out = rank2_orbit_catalogue(L, rep)
        else:
            graded_cfg = TrialConfig(
                seed=cfg.seed,
                trials=max(1, cfg.trials // 100),
                policy=cfg.policy,
                dims=None,
                jobs=cfg.jobs,
            )
            rep_out = check_graded_families(L, rep, graded_cfg)
        reports[name] = rep_out.to_json_dict()
    total = sum(len(r["violations"]) for r in reports.values())
    return {
        "schema_version": 1,
        "family": family,
        "rank": rank,
        "p": p,
        "config": cfg.to_json_dict(),
        "report": rep.to_json_dict(),
        "checks": reports,
        "violations_total": total,
        "ok": total == 0,
    }
