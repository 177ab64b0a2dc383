"""Root-subgroup automorphisms x_a(t) from integral divided powers.

For a root vector e_a the powers ad(e_a)^k / k! have integer entries and
vanish from k = 4 on; reducing them mod p and summing t^k M_k gives the
one-parameter subgroups of the adjoint group action.  Divided powers are
always computed over the integers first, so characteristics 2 and 3 are
handled exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chevalley_algebra import SIMPLY_CONNECTED, LieAlgebraFp, integral_ad
from .exact_linalg import MatrixFp, matmul_mod
from .root_data import ChevalleyStructure, StructureConstantError

#: nilpotency bound: ad(e_a)^k = 0 for k >= this, every type
MAX_POWER = 4


@dataclass(frozen=True, eq=False)
class DividedPowerFamily:
    """Integer matrices M_k = ad(e_a)^k / k!, k = 0..k_max."""

    root: tuple
    matrices: tuple

    @property
    def k_max(self):
        return len(self.matrices) - 1


def divided_powers(cs: ChevalleyStructure, root, flavor=SIMPLY_CONNECTED) -> DividedPowerFamily:
    """Exact divided powers of ad(e_root); aborts on non-integral division."""
    root = tuple(root)
    key = f"_divpow_{flavor}"
    cache = cs.__dict__.setdefault(key, {})
    if root in cache:
        return cache[root]
    idx = cs.rs.rank + cs.rs.root_index(root)
    ad1 = integral_ad(cs, flavor, idx).toarray()
    m = cs.dimension
    mats = [np.eye(m, dtype=np.int64), ad1]
    k = 1
    while mats[-1].any():
        k += 1
        prod = mats[-1] @ ad1
        if (prod % k).any():
            raise StructureConstantError(
                f"ad(e_{root})^{k}/{k}! is not integral; bracket table is broken"
            )
        mats.append(prod // k)
        if k > MAX_POWER:
            raise StructureConstantError(
                f"ad(e_{root}) fails to vanish by power {MAX_POWER}"
            )
    fam = DividedPowerFamily(root=root, matrices=tuple(mats[:-1]))
    cache[root] = fam
    return fam


@dataclass(frozen=True, eq=False)
class RootAutomorphism:
    """x_a(t) = sum_k t^k M_k mod p; preserves the bracket."""

    root: tuple
    t: int
    matrix: MatrixFp


def root_automorphism(L: LieAlgebraFp, root, t: int) -> RootAutomorphism:
    fam = divided_powers(L.cs, root, L.flavor)
    t = int(t) % L.p
    m = L.m
    acc = np.zeros((m, m), dtype=np.int64)
    tk = 1
    for mat in fam.matrices:
        acc = acc + tk * (mat % L.p)
        tk = tk * t % L.p
    return RootAutomorphism(root=tuple(root), t=t, matrix=MatrixFp(acc % L.p, L.p))


def random_group_element(L: LieAlgebraFp, n_factors=None, rng=None) -> np.ndarray:
    """Seeded product of root automorphisms over random roots and parameters.

    Defaults to 2m factors, which mixes orbits well at this scale.
    """
    rng = np.random.default_rng(rng)
    if n_factors is None:
        n_factors = 2 * L.m
    if n_factors < 1:
        raise ValueError("need at least one factor")
    out = np.eye(L.m, dtype=np.int64)
    n_roots = len(L.rs.roots)
    for _ in range(n_factors):
        root = L.rs.roots[int(rng.integers(0, n_roots))]
        t = int(rng.integers(0, L.p))
        out = matmul_mod(root_automorphism(L, root, t).matrix.entries, out, L.p)
    return out


def is_bracket_automorphism(L: LieAlgebraFp, a) -> bool:
    """Check A[x,y] = [Ax, Ay] on all basis pairs, batched over matrices."""
    a = a.entries if isinstance(a, MatrixFp) else np.asarray(a, dtype=np.int64)
    m = L.m
    # ad(A e_i) for every column i, stacked as T3[i] = ad(A[:, i])
    cols = (L._ad_cols @ (a % L.p) % L.p).reshape(m, m, m)
    t3 = np.moveaxis(cols, 2, 0)
    lhs = matmul_mod(t3, a, L.p)  # ad(A e_i) @ A, batched over i
    ads = np.stack([L.basis_ad(i).toarray() for i in range(m)])
    rhs = matmul_mod(a[None, :, :], ads, L.p)  # A @ ad(e_i)
    return np.array_equal(lhs, rhs)
