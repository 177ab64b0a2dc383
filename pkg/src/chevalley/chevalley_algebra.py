"""Chevalley Lie algebras over F_p in both lattice forms.

``simply_connected`` uses the simple coroots h_i as the Cartan basis;
``adjoint`` uses the fundamental coweights y_i (defined by
alpha_i(y_j) = delta_ij).  Root vectors are shared, structure constants
reduce mod p, and the canonical map between the two forms is the
identity on every root space.

Invariant symmetric bilinear forms are solved with the root-grading
ansatz: the only possibly nonzero pairings are <h_i, h_j> and
c_a = <e_a, e_-a>.  Associativity then reduces to the linear system

    <h_a, h> = a(h) c_a          for every root a and Cartan h,
    N_{a,b} c_{a+b} = N_{b,-a-b} c_a   whenever a+b is a root,

whose solution space is searched for a maximal-rank element.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .exact_linalg import (
    EchelonAccumulator,
    MatrixFp,
    Subspace,
    kernel,
    matmul_mod,
    rank,
)
from .root_data import (
    ChevalleyStructure,
    StructureConstantError,
    is_prime,
    structure_constants,
)

SIMPLY_CONNECTED = "simply_connected"
ADJOINT = "adjoint"


def _adjoint_bracket_integer(cs: ChevalleyStructure, i: int, j: int):
    """[b_i, b_j] over the integers in the coweight (adjoint) basis."""
    rs = cs.rs
    l, n = rs.rank, rs.n_positive
    if i < l and j < l:
        return ()
    if i < l or j < l:
        sign, yi, ei = (1, i, j) if i < l else (-1, j, i)
        coeff = sign * rs.roots[ei - l][yi]
        return ((ei, coeff),) if coeff else ()
    ri, rj = i - l, j - l
    if (ri + n) % (2 * n) == rj:
        sign = 1 if ri < n else -1
        coro = rs.cartan.T @ cs.coroot_table[ri % n]
        return tuple((t, sign * int(c)) for t, c in enumerate(coro) if c)
    nc = cs.n_table.get((ri, rj), 0)
    if nc == 0:
        return ()
    s = tuple(x + y for x, y in zip(rs.roots[ri], rs.roots[rj]))
    return ((l + rs.root_index(s), nc),)


def integral_ad(cs: ChevalleyStructure, flavor: str, i: int) -> sp.csr_matrix:
    """Integral adjoint matrix of basis element i in either lattice form."""
    if flavor == SIMPLY_CONNECTED:
        return cs.ad_integer(i)
    cache = cs.__dict__.setdefault("_ad_adjoint_cache", {})
    if i not in cache:
        m = cs.dimension
        rows, cols, vals = [], [], []
        for j in range(m):
            for k, cf in _adjoint_bracket_integer(cs, i, j):
                rows.append(k)
                cols.append(j)
                vals.append(cf)
        cache[i] = sp.csr_matrix(
            (np.array(vals, dtype=np.int64), (rows, cols)), shape=(m, m)
        )
    return cache[i]


class LieAlgebraFp:
    """An m-dimensional Lie algebra over F_p with a fixed basis.

    Basis order: Cartan elements (h_i or y_i) then e_a following the
    root order of the underlying root system.
    """

    def __init__(self, cs: ChevalleyStructure, p: int, flavor: str):
        if flavor not in (SIMPLY_CONNECTED, ADJOINT):
            raise ValueError(f"unknown flavor {flavor!r}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.cs = cs
        self.rs = cs.rs
        self.p = p
        self.flavor = flavor
        l = self.rs.rank
        self.rank = l
        self.m = cs.dimension
        cartan_tag = "h" if flavor == SIMPLY_CONNECTED else "y"
        self.labels = tuple(
            [f"{cartan_tag}_{i+1}" for i in range(l)]
            + [f"e[{','.join(map(str, r))}]" for r in self.rs.roots]
        )
        #: root coordinates per basis element, None on the Cartan part
        self.basis_roots = (None,) * l + self.rs.roots
        self._ads = self._build_ads()
        stacked = sp.vstack([a.reshape(1, self.m * self.m) for a in self._ads])
        self._ad_rows = stacked.tocsr()  # row i = vec(ad of basis i)
        self._ad_cols = self._ad_rows.T.tocsr()

    def _cartan_action(self, i: int, root) -> int:
        """Coefficient of e_a in [cartan_i, e_a]."""
        if self.flavor == SIMPLY_CONNECTED:
            return int(self.rs.cartan[i] @ np.array(root, dtype=np.int64)) % self.p
        return root[i] % self.p

    def _coroot_in_cartan(self, pos_idx: int) -> np.ndarray:
        """Coordinates of [e_a, e_-a] on the Cartan basis, a positive."""
        t = self.cs.coroot_table[pos_idx]
        if self.flavor == SIMPLY_CONNECTED:
            return t % self.p
        return (self.rs.cartan.T @ t) % self.p

    def bracket_basis(self, i: int, j: int):
        """[b_i, b_j] as ((index, coeff mod p), ...)."""
        l, n = self.rank, self.rs.n_positive
        if i < l and j < l:
            return ()
        if i < l or j < l:
            sign, hi, ei = (1, i, j) if i < l else (-1, j, i)
            cf = sign * self._cartan_action(hi, self.rs.roots[ei - l]) % self.p
            return ((ei, cf),) if cf else ()
        ri, rj = i - l, j - l
        if (ri + n) % (2 * n) == rj:
            sign = 1 if ri < n else -1
            coro = self._coroot_in_cartan(ri % n)
            return tuple((t, sign * int(c) % self.p) for t, c in enumerate(coro) if c)
        nc = self.cs.n_table.get((ri, rj), 0) % self.p
        if nc == 0:
            return ()
        s = tuple(x + y for x, y in zip(self.rs.roots[ri], self.rs.roots[rj]))
        return ((l + self.rs.root_index(s), nc),)

    def _build_ads(self):
        ads = []
        for i in range(self.m):
            a = integral_ad(self.cs, self.flavor, i).copy()
            a.data = a.data % self.p
            a.eliminate_zeros()
            ads.append(a)
        return ads

    def basis_ad(self, i: int) -> sp.csr_matrix:
        return self._ads[i]

    def ad(self, x) -> np.ndarray:
        """Adjoint matrix of an arbitrary element, dense mod p."""
        x = np.asarray(x, dtype=np.int64) % self.p
        return (self._ad_cols @ x % self.p).reshape(self.m, self.m)

    def bracket(self, x, y) -> np.ndarray:
        y = np.asarray(y, dtype=np.int64) % self.p
        return self.ad(x) @ y % self.p

    def basis_vector(self, i: int) -> np.ndarray:
        v = np.zeros(self.m, dtype=np.int64)
        v[i] = 1
        return v

    def root_vector_index(self, coords) -> int:
        return self.rank + self.rs.root_index(coords)

    def root_vector(self, coords) -> np.ndarray:
        return self.basis_vector(self.root_vector_index(coords))

    def highest_root_vector(self) -> np.ndarray:
        return self.root_vector(self.rs.highest_root)

    def __repr__(self):
        return f"LieAlgebraFp({self.rs.spec}, p={self.p}, {self.flavor})"


def instantiate(cs: ChevalleyStructure, p: int, flavor=SIMPLY_CONNECTED) -> LieAlgebraFp:
    """Reduce the integral bracket table mod p in the requested form."""
    return LieAlgebraFp(cs, p, flavor)


@lru_cache(maxsize=None)
def algebra(family: str, rank_: int, p: int, flavor=SIMPLY_CONNECTED) -> LieAlgebraFp:
    return instantiate(structure_constants(family, rank_), p, flavor)


def ad_matrix(L: LieAlgebraFp, x) -> MatrixFp:
    return MatrixFp(L.ad(x), L.p)


def centralizer(L: LieAlgebraFp, x) -> Subspace:
    """Kernel of the adjoint operator of x."""
    return kernel(L.ad(x), L.p)


def centralizer_dim(L: LieAlgebraFp, x) -> int:
    return L.m - rank(L.ad(x), L.p)


def center(L: LieAlgebraFp) -> Subspace:
    """Elements commuting with everything.

    Computed as the kernel of x -> ad(x) by intersecting the kernels of
    the per-basis bracket maps.
    """
    K = Subspace.full(L.m, L.p)
    for j in range(L.m):
        if K.dim == 0:
            break
        prod = (L.basis_ad(j) @ K.basis.T) % L.p
        combos = kernel(prod, L.p)
        if combos.dim == K.dim:
            continue
        K = Subspace.from_rows(matmul_mod(combos.basis, K.basis, L.p), L.p, L.m)
    return K


def derived_subalgebra(L: LieAlgebraFp) -> Subspace:
    """Span of all brackets of basis pairs."""
    acc = EchelonAccumulator(L.m, L.p)
    for j in range(L.m):
        acc.add(L.basis_ad(j).toarray().T)
        if acc.rank == L.m:
            break
    return acc.subspace()


def ideal_generated_by(L: LieAlgebraFp, seed: Subspace) -> Subspace:
    """Smallest ideal containing the seed: bracket closure to a fixpoint."""
    if (seed.m, seed.p) != (L.m, L.p):
        raise ValueError("seed subspace lives in the wrong space")
    acc = EchelonAccumulator(L.m, L.p)
    acc.add(seed.basis)
    grew = acc.rank > 0
    while grew and acc.rank < L.m:
        basis_now = acc.subspace().basis
        grew = False
        for j in range(L.m):
            if acc.add((L.basis_ad(j) @ basis_now.T % L.p).T):
                grew = True
    return acc.subspace()


# --- invariant bilinear forms ----------------------------------------------


@dataclass(frozen=True, eq=False)
class InvariantForm:
    """A maximal-rank invariant symmetric form with its kernel."""

    matrix: MatrixFp
    kernel: Subspace
    nullity: int
    solution_dim: int
    kernel_matches_center: bool


def _form_constraints(L: LieAlgebraFp):
    """Rows of the ansatz constraint system, plus the unknown layout."""
    l, n = L.rank, L.rs.n_positive
    n_h = l * (l + 1) // 2
    sym_index = {}
    k = 0
    for i in range(l):
        for j in range(i, l):
            sym_index[(i, j)] = k
            sym_index[(j, i)] = k
            k += 1
    nunk = n_h + n
    rows = []
    for a in range(n):
        coro = L._coroot_in_cartan(a)
        for i in range(l):
            row = np.zeros(nunk, dtype=np.int64)
            for j, cf in enumerate(coro):
                row[sym_index[(i, j)]] += int(cf)
            row[n_h + a] -= L._cartan_action(i, L.rs.roots[a])
            rows.append(row % L.p)
    for (ri, rj), nc in L.cs.n_table.items():
        s = tuple(x + y for x, y in zip(L.rs.roots[ri], L.rs.roots[rj]))
        si = L.rs.root_index(s)
        opp = (si + n) % (2 * n)
        nc2 = L.cs.n_table.get((rj, opp), 0)
        row = np.zeros(nunk, dtype=np.int64)
        row[n_h + si % n] += nc
        row[n_h + ri % n] -= nc2
        rows.append(row % L.p)
    return np.array(rows, dtype=np.int64), sym_index, n_h


def _assemble_gram(L: LieAlgebraFp, values, sym_index, n_h) -> np.ndarray:
    l, n = L.rank, L.rs.n_positive
    g = np.zeros((L.m, L.m), dtype=np.int64)
    for i in range(l):
        for j in range(l):
            g[i, j] = values[sym_index[(i, j)]]
    for a in range(n):
        g[l + a, l + a + n] = values[n_h + a]
        g[l + a + n, l + a] = values[n_h + a]
    return g


def _solution_combos(dim: int, p: int, limit: int = 10**5):
    """Projective representatives of the solution space, or a sample."""
    total = (p**dim - 1) // (p - 1)
    if total <= limit:
        for idx in range(dim):
            # first nonzero coordinate is 1, at position idx
            tail = dim - idx - 1
            for rest in range(p**tail):
                u = np.zeros(dim, dtype=np.int64)
                u[idx] = 1
                r = rest
                for t in range(tail):
                    u[idx + 1 + t] = r % p
                    r //= p
                yield u
        return
    rng = np.random.default_rng(0)
    for _ in range(100):
        u = rng.integers(0, p, size=dim, dtype=np.int64)
        if u.any():
            yield u


def invariant_form(L: LieAlgebraFp) -> InvariantForm:
    """Solve for an invariant symmetric form of maximal rank."""
    rows, sym_index, n_h = _form_constraints(L)
    sol = kernel(rows, L.p)
    if sol.dim == 0:
        raise StructureConstantError(
            f"no nonzero invariant form found for {L!r}; ansatz violated"
        )
    best_rank = -1
    best = None
    for u in _solution_combos(sol.dim, L.p):
        values = matmul_mod(u, sol.basis, L.p)
        g = _assemble_gram(L, values, sym_index, n_h)
        r = rank(g, L.p)
        if r > best_rank:
            best_rank = r
            best = g
    ker = kernel(best, L.p)
    return InvariantForm(
        matrix=MatrixFp(best, L.p),
        kernel=ker,
        nullity=L.m - best_rank,
        solution_dim=sol.dim,
        kernel_matches_center=(ker == center(L)),
    )


def form_is_invariant(L: LieAlgebraFp, gram) -> bool:
    """Associativity <[x,y],z> = <x,[y,z]> checked on all basis triples.

    Equivalent matrix condition, covering every third factor at once:
    ad(b)^T G + G ad(b) = 0 for each basis element b.
    """
    g = gram.entries if isinstance(gram, MatrixFp) else np.asarray(gram)
    for j in range(L.m):
        a = L.basis_ad(j)
        if ((a.T @ g + (a.T @ g.T).T) % L.p).any():
            return False
    return True


def sample_form_ranks(L: LieAlgebraFp, count: int, seed: int) -> list:
    """Ranks of random elements of the invariant-form solution space."""
    rows, sym_index, n_h = _form_constraints(L)
    sol = kernel(rows, L.p)
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        u = rng.integers(0, L.p, size=sol.dim, dtype=np.int64)
        values = matmul_mod(u, sol.basis, L.p)
        g = _assemble_gram(L, values, sym_index, n_h)
        out.append(rank(g, L.p))
    return out


# --- the canonical map g -> g_adjoint --------------------------------------


@dataclass(frozen=True, eq=False)
class CanonicalMap:
    """Homomorphism from the simply connected to the adjoint form."""

    matrix: MatrixFp
    cartan_convention: str  # 'transpose' or 'direct'
    kernel: Subspace
    image: Subspace


def _is_homomorphism(g: LieAlgebraFp, gflat: LieAlgebraFp, mat) -> bool:
    for i in range(g.m):
        lhs = matmul_mod(mat, g.basis_ad(i).toarray(), g.p)
        rhs = matmul_mod(gflat.ad(mat[:, i]), mat, g.p)
        if not np.array_equal(lhs, rhs):
            return False
    return True


def canonical_map(g: LieAlgebraFp, gflat: LieAlgebraFp) -> CanonicalMap:
    """Identity on root spaces, Cartan block from the Cartan matrix.

    The Cartan-block convention is settled mechanically: the transposed
    block is tried first and the alternative is used if the
    homomorphism property fails.
    """
    if g.cs is not gflat.cs or g.p != gflat.p:
        raise ValueError("both algebras must share structure and modulus")
    if (g.flavor, gflat.flavor) != (SIMPLY_CONNECTED, ADJOINT):
        raise ValueError("expected (simply_connected, adjoint) flavors")
    l = g.rank
    base = np.eye(g.m, dtype=np.int64)
    for convention in ("transpose", "direct"):
        mat = base.copy()
        block = g.rs.cartan.T if convention == "transpose" else g.rs.cartan
        mat[:l, :l] = block % g.p
        if _is_homomorphism(g, gflat, mat):
            return CanonicalMap(
                matrix=MatrixFp(mat, g.p),
                cartan_convention=convention,
                kernel=kernel(mat, g.p),
                image=Subspace.from_rows(mat.T, g.p),
            )
    raise StructureConstantError("no Cartan-block convention yields a homomorphism")


def semisimple_centralizer_dim(gflat: LieAlgebraFp, y) -> int:
    """Centralizer dimension of a coweight-basis element of the adjoint form.

    ``y`` may be a label like 'y_3', a 1-based coweight index, or a full
    coordinate vector.
    """
    if gflat.flavor != ADJOINT:
        raise ValueError("semisimple witnesses live in the adjoint form")
    if isinstance(y, str):
        y = int(y.split("_")[1])
    if np.isscalar(y):
        vec = gflat.basis_vector(int(y) - 1)
    else:
        vec = np.asarray(y, dtype=np.int64)
    return centralizer_dim(gflat, vec)


# --- D_l in characteristic 2 via the 2l-dimensional realization -------------


def _dl_epsilon_form(l: int, coords) -> np.ndarray:
    basis = np.zeros((l, l), dtype=np.int64)
    for k in range(l - 1):
        basis[k, k] = 1
        basis[k, k + 1] = -1
    basis[l - 1, l - 2] = 1
    basis[l - 1, l - 1] = 1
    return np.array(coords, dtype=np.int64) @ basis


def orthogonal_char2_form(l: int) -> InvariantForm:
    """Invariant form on D_l over F_2 from the 2l-dim matrix realization.

    Root vectors map to the standard basis of so_{2l}; the form is the
    trace pairing Tr(r11 r11' + r12^L r21'^U + r21^L r12'^U) with ^L/^U
    the strict triangular parts.  Only defined for D_l, p = 2.
    """
    if l < 4:
        raise ValueError("the orthogonal realization needs D_l with l >= 4")
    L = algebra("D", l, 2)
    n2 = 2 * l
    reps = np.zeros((L.m, n2, n2), dtype=np.int64)

    def e_mat(i, j):
        out = np.zeros((n2, n2), dtype=np.int64)
        out[i, j] = 1
        return out

    for idx, coords in enumerate(L.rs.roots):
        u = _dl_epsilon_form(l, coords)
        plus = [i for i in range(l) if u[i] == 1]
        minus = [i for i in range(l) if u[i] == -1]
        if len(plus) == 1 and len(minus) == 1:
            i, j = plus[0], minus[0]
            mat = e_mat(i, j) + e_mat(l + j, l + i)
        elif len(plus) == 2:
            i, j = plus
            mat = e_mat(i, l + j) + e_mat(j, l + i)
        else:
            i, j = minus
            mat = e_mat(l + j, i) + e_mat(l + i, j)
        reps[L.rank + idx] = mat
    for i in range(L.rank):
        simple = tuple(int(i == t) for t in range(l))
        a = L.rs.root_index(simple)
        b = L.rs.root_index(tuple(-x for x in simple))
        pa, pb = reps[L.rank + a], reps[L.rank + b]
        reps[i] = (pa @ pb + pb @ pa) % 2

    for i in range(L.m):
        for j in range(L.m):
            br = np.zeros((n2, n2), dtype=np.int64)
            for k, cf in L.bracket_basis(i, j):
                br = br + cf * reps[k]
            if ((br - reps[i] @ reps[j] - reps[j] @ reps[i]) % 2).any():
                raise StructureConstantError(
                    f"orthogonal realization is not a homomorphism at ({i},{j})"
                )

    r11 = reps[:, :l, :l]
    r12 = reps[:, :l, l:]
    r21 = reps[:, l:, :l]
    low = lambda a: np.tril(a, -1)
    up = lambda a: np.triu(a, 1)
    gram = (
        np.einsum("aij,bji->ab", r11, r11)
        + np.einsum("aij,bji->ab", low(r12), up(r21))
        + np.einsum("aij,bji->ab", low(r21), up(r12))
    ) % 2
    ker = kernel(gram, 2)
    return InvariantForm(
        matrix=MatrixFp(gram, 2),
        kernel=ker,
        nullity=L.m - rank(gram, 2),
        solution_dim=0,
        kernel_matches_center=(ker == center(L)),
    )
