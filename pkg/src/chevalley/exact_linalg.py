"""Exact linear algebra over prime fields.

Matrices are numpy int64 arrays with entries reduced mod p.  Gaussian
elimination is fully reduced, so the echelon basis of a subspace is
unique and subspace equality is representation equality.  Rows over F_2
are packed into Python integers and eliminated word-parallel; other
primes use vectorized residue arithmetic.  Primes must fit comfortably
in a machine word (p < 2**31) so products never overflow int64.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .root_data import is_prime

MAX_PRIME = 2**31

try:  # optional JIT for the rank-only hot path; numpy fallback below
    import numba as _numba

    @_numba.njit(cache=True, nogil=True)
    def _rank_elim_jit(a, p):  # pragma: no cover - exercised via rank()
        rows, cols = a.shape
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = -1
            for k in range(r, rows):
                if a[k, c] != 0:
                    pr = k
                    break
            if pr == -1:
                continue
            if pr != r:
                for t in range(c, cols):
                    tmp = a[r, t]
                    a[r, t] = a[pr, t]
                    a[pr, t] = tmp
            base = a[r, c] % p
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = inv * base % p
                base = base * base % p
                e >>= 1
            for k in range(r + 1, rows):
                f = a[k, c] * inv % p
                if f:
                    for t in range(c, cols):
                        a[k, t] = (a[k, t] - f * a[r, t]) % p
            r += 1
        return r

    @_numba.njit(cache=True, nogil=True)
    def _rref_elim_jit(a, p):  # pragma: no cover - exercised via rref()
        rows, cols = a.shape
        piv = np.empty(min(rows, cols), dtype=np.int64)
        r = 0
        for c in range(cols):
            if r == rows:
                break
            pr = -1
            for k in range(r, rows):
                if a[k, c] != 0:
                    pr = k
                    break
            if pr == -1:
                continue
            if pr != r:
                for t in range(c, cols):
                    tmp = a[r, t]
                    a[r, t] = a[pr, t]
                    a[pr, t] = tmp
            base = a[r, c] % p
            e = p - 2
            inv = 1
            while e > 0:
                if e & 1:
                    inv = inv * base % p
                base = base * base % p
                e >>= 1
            if inv != 1:
                for t in range(c, cols):
                    a[r, t] = a[r, t] * inv % p
            for k in range(rows):
                if k != r and a[k, c] != 0:
                    f = a[k, c]
                    for t in range(c, cols):
                        a[k, t] = (a[k, t] - f * a[r, t]) % p
            piv[r] = c
            r += 1
        return r, piv

    @_numba.njit(cache=True, nogil=True, parallel=True)
    def _batch_rank_jit(stack, p):  # pragma: no cover - exercised via batch_rank
        n = stack.shape[0]
        out = np.empty(n, dtype=np.int64)
        for b in _numba.prange(n):
            out[b] = _rank_elim_jit(stack[b], p)
        return out

except ImportError:  # pragma: no cover
    _rank_elim_jit = None
    _rref_elim_jit = None
    _batch_rank_jit = None


@dataclass(frozen=True)
class PrimeField:
    """A prime modulus, validated on construction."""

    p: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.p >= MAX_PRIME:
            raise ValueError(f"modulus {self.p} exceeds the machine-word bound")


class MatrixFp:
    """A dense matrix over F_p; entries normalized into [0, p)."""

    __slots__ = ("entries", "p")

    def __init__(self, entries, p: int):
        PrimeField(p)
        a = np.asarray(entries, dtype=np.int64) % p
        a.setflags(write=False)
        self.entries = a
        self.p = p

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    def __eq__(self, other):
        return (
            isinstance(other, MatrixFp)
            and self.p == other.p
            and np.array_equal(self.entries, other.entries)
        )

    def __repr__(self):
        return f"MatrixFp({self.rows}x{self.cols} mod {self.p})"


def _coerce(m, p):
    if isinstance(m, MatrixFp):
        return m.entries, m.p
    if p is None:
        raise ValueError("p is required for a raw array")
    return np.asarray(m, dtype=np.int64), p


def _rows_to_bits(a: np.ndarray) -> list:
    packed = np.packbits(a.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _bits_to_rows(bits: list, n: int) -> np.ndarray:
    nbytes = (n + 7) // 8
    if not bits:
        return np.zeros((0, n), dtype=np.int64)
    buf = np.frombuffer(
        b"".join(v.to_bytes(nbytes, "little") for v in bits), dtype=np.uint8
    ).reshape(len(bits), nbytes)
    return np.unpackbits(buf, axis=1, bitorder="little", count=n).astype(np.int64)


def _rref_gf2(a: np.ndarray):
    """Word-parallel reduced echelon form over F_2 via int bitsets."""
    work = _rows_to_bits(a % 2)
    n = a.shape[1]
    pivots = []
    r = 0
    for c in range(n):
        if r == len(work):
            break
        pr = next((k for k in range(r, len(work)) if (work[k] >> c) & 1), None)
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        for k in range(len(work)):
            if k != r and (work[k] >> c) & 1:
                work[k] ^= work[r]
        pivots.append(c)
        r += 1
    return _bits_to_rows(work[:r], n), pivots


def rref(m, p=None):
    """Unique reduced row echelon form; returns (matrix, pivot columns)."""
    a, p = _coerce(m, p)
    a = a % p
    if a.size == 0:
        return a.reshape(a.shape).copy(), []
    if _rref_elim_jit is not None:
        work = np.ascontiguousarray(a, dtype=np.int64)  # a is a fresh copy
        r, piv = _rref_elim_jit(work, p)
        return work[:r], [int(c) for c in piv[:r]]
    if p == 2:
        return _rref_gf2(a)
    a = a.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), p - 2, p)
        a[r] = a[r] * inv % p
        f = a[:, c].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(f[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(m, p=None) -> int:
    """Rank over F_p by exact Gaussian elimination."""
    if _rank_elim_jit is not None:
        a, p = _coerce(m, p)
        work = np.ascontiguousarray(a % p, dtype=np.int64)
        return int(_rank_elim_jit(work, p))
    _, pivots = rref(m, p)
    return len(pivots)


def batch_rank(stack, p: int) -> np.ndarray:
    """Ranks of a stack of matrices; the stack is consumed as scratch."""
    stack = np.ascontiguousarray(np.asarray(stack, dtype=np.int64) % p)
    if _batch_rank_jit is not None:
        return _batch_rank_jit(stack, p)
    return np.array([rank(a, p) for a in stack], dtype=np.int64)


def kernel(m, p=None) -> "Subspace":
    """Right null space {v : M v = 0} as a row-reduced subspace."""
    a, p = _coerce(m, p)
    n = a.shape[1]
    red, pivots = rref(a, p)
    free = [c for c in range(n) if c not in set(pivots)]
    if not free:
        return Subspace(np.zeros((0, n), dtype=np.int64), [], n, p)
    basis = np.zeros((len(free), n), dtype=np.int64)
    for k, f in enumerate(free):
        basis[k, f] = 1
        for i, c in enumerate(pivots):
            basis[k, c] = (-red[i, f]) % p
    return Subspace.from_rows(basis, p)


def matmul_mod(a, b, p: int) -> np.ndarray:
    """Exact a @ b mod p, through BLAS when the sizes permit."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    inner = a.shape[-1]
    if inner * (p - 1) ** 2 < 2**53:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return np.round(prod).astype(np.int64) % p
    return (a @ b) % p


class Subspace:
    """A subspace of F_p^m held as its unique reduced echelon basis."""

    __slots__ = ("basis", "pivots", "m", "p")

    def __init__(self, basis, pivots, m, p):
        basis = np.asarray(basis, dtype=np.int64)
        basis.setflags(write=False)
        self.basis = basis
        self.pivots = tuple(pivots)
        self.m = m
        self.p = p

    @classmethod
    def from_rows(cls, rows, p: int, m=None):
        rows = np.asarray(rows, dtype=np.int64)
        if rows.ndim == 1:
            rows = rows.reshape(1, -1)
        if m is None:
            m = rows.shape[1]
        if rows.shape[1] != m:
            raise ValueError("row width does not match ambient dimension")
        red, piv = rref(rows, p)
        return cls(red, piv, m, p)

    @classmethod
    def zero(cls, m: int, p: int):
        return cls(np.zeros((0, m), dtype=np.int64), [], m, p)

    @classmethod
    def full(cls, m: int, p: int):
        return cls(np.eye(m, dtype=np.int64), range(m), m, p)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def codim(self) -> int:
        return self.m - self.dim

    def contains(self, v) -> bool:
        v = np.asarray(v, dtype=np.int64) % self.p
        if self.dim == 0:
            return not v.any()
        resid = (v - matmul_mod(v[list(self.pivots)], self.basis, self.p)) % self.p
        return not resid.any()

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(row) for row in other.basis)

    def __eq__(self, other):
        return (
            isinstance(other, Subspace)
            and (self.m, self.p, self.pivots) == (other.m, other.p, other.pivots)
            and np.array_equal(self.basis, other.basis)
        )

    def __hash__(self):
        return hash((self.m, self.p, self.pivots, self.basis.tobytes()))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of F_{self.p}^{self.m})"

    def to_digit_strings(self):
        """Rows as strings: digits for p < 10, comma-separated otherwise."""
        if self.p < 10:
            return ["".join(str(int(x)) for x in row) for row in self.basis]
        return [",".join(str(int(x)) for x in row) for row in self.basis]

    @classmethod
    def from_digit_strings(cls, rows, m: int, p: int):
        if not rows:
            return cls.zero(m, p)
        if p < 10:
            mat = [[int(ch) for ch in row] for row in rows]
        else:
            mat = [[int(x) for x in row.split(",")] for row in rows]
        return cls.from_rows(np.array(mat, dtype=np.int64), p, m)


def _check_compatible(a: Subspace, b: Subspace):
    if (a.m, a.p) != (b.m, b.p):
        raise ValueError(
            f"ambient mismatch: F_{a.p}^{a.m} vs F_{b.p}^{b.m}"
        )


def span_sum(a: Subspace, b: Subspace) -> Subspace:
    """Smallest subspace containing both summands."""
    _check_compatible(a, b)
    return Subspace.from_rows(np.vstack([a.basis, b.basis]), a.p, a.m)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    """Exact intersection via the left null space of the stacked bases."""
    _check_compatible(a, b)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.m, a.p)
    stacked = np.vstack([a.basis, (-b.basis) % a.p])
    combos = kernel(stacked.T, a.p)  # rows z with z @ stacked = 0
    if combos.dim == 0:
        return Subspace.zero(a.m, a.p)
    vecs = matmul_mod(combos.basis[:, : a.dim], a.basis, a.p)
    return Subspace.from_rows(vecs, a.p, a.m)


def random_subspace(m: int, d: int, p: int, rng) -> Subspace:
    """Uniform d-dimensional subspace; rows are redrawn until rank d."""
    if not 0 <= d <= m:
        raise ValueError(f"dimension {d} outside [0, {m}]")
    rng = np.random.default_rng(rng)
    if d == 0:
        return Subspace.zero(m, p)
    while True:
        rows = rng.integers(0, p, size=(d, m), dtype=np.int64)
        s = Subspace.from_rows(rows, p, m)
        if s.dim == d:
            return s


class EchelonAccumulator:
    """Incrementally row-reduce batches of vectors into one subspace.

    Keeps a fully reduced basis at all times, so intermediate ranks are
    exact and the final subspace is canonical.
    """

    def __init__(self, m: int, p: int):
        self.m = m
        self.p = p
        self.basis = np.zeros((0, m), dtype=np.int64)
        self.pivots = []

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    def add(self, rows) -> int:
        """Fold in rows; returns how much the rank grew."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.m) % self.p
        if rows.size == 0:
            return 0
        if self.rank:
            rows = (rows - matmul_mod(rows[:, self.pivots], self.basis, self.p)) % self.p
        red, piv = rref(rows, self.p)
        if not piv:
            return 0
        if self.rank:
            self.basis = (
                self.basis - matmul_mod(self.basis[:, piv], red, self.p)
            ) % self.p
        merged = np.vstack([self.basis, red])
        order = np.argsort(np.concatenate([self.pivots, piv]).astype(np.int64))
        self.basis = merged[order]
        self.pivots = sorted(self.pivots + list(piv))
        return len(piv)

    def subspace(self) -> Subspace:
        return Subspace(self.basis.copy(), self.pivots, self.m, self.p)
