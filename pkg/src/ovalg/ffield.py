"""Prime-field arithmetic and exact row reduction.

Two elimination engines live here:

* GF(2): every row is a Python int used as a bitset, column 0 being the most
  significant bit, so the leading column of a row is ``row.bit_length() - 1``
  away from the top and row operations are a single XOR.
* GF(p), p > 2: rows are float64 (or int64 for p >= 2**26.5) numpy arrays
  holding residues. Rows are folded into a running rref one block at a time,
  so the bulk of the work is matrix products that go through BLAS. Products
  are chunked along the inner dimension to stay exact.

The reduced row echelon form of a matrix is unique, so every path returns the
same rref byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import BadParameters, DimensionMismatch, ZeroInverse

MIN_PROXY_PRIME = 2**20
MAX_PRIME = 2**31

_MR_BASES = (2, 7, 61)  # deterministic below 4_759_123_141


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 2**32."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 61):
        if n % small == 0:
            return n == small
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_primes(start: int, count: int) -> list[int]:
    out = []
    k = start
    while len(out) < count:
        if is_prime(k):
            out.append(k)
        k += 1
    return out


# Three distinct primes just above 2**20; squares stay below 2**42 so float64
# dot products of length <= 2048 are exact.
PROXY_PRIMES: tuple[int, ...] = tuple(next_primes(MIN_PROXY_PRIME, 3))


@dataclass(frozen=True)
class FieldSpec:
    """GF(p), optionally quotiented by field equations or used as a char-0 proxy."""

    p: int
    field_equations: bool = False
    char0_proxy: bool = False

    def __post_init__(self):
        if not (2 <= self.p < MAX_PRIME) or not is_prime(self.p):
            raise BadParameters(f"modulus {self.p} is not a prime in [2, 2**31)")
        if self.char0_proxy:
            if self.p < MIN_PROXY_PRIME:
                raise BadParameters("char0 proxy needs a prime >= 2**20")
            if self.field_equations:
                raise BadParameters("field equations make no sense in char0 proxy mode")

    @classmethod
    def gf(cls, p: int, field_equations: bool = False) -> "FieldSpec":
        return cls(p, field_equations=field_equations)

    @classmethod
    def char0(cls, p: int | None = None) -> "FieldSpec":
        return cls(PROXY_PRIMES[0] if p is None else p, char0_proxy=True)

    @property
    def q(self) -> int:
        return self.p

    @property
    def mode(self) -> str:
        return "char0_proxy" if self.char0_proxy else "exact"

    def with_prime(self, p: int) -> "FieldSpec":
        return FieldSpec(p, self.field_equations, self.char0_proxy)

    def describe(self) -> str:
        if self.char0_proxy:
            return f"char0 proxy GF({self.p})"
        tail = " with field equations" if self.field_equations else ""
        return f"GF({self.p}){tail}"

    def to_dict(self) -> dict:
        return {"p": self.p, "field_equations": self.field_equations,
                "char0_proxy": self.char0_proxy}

    @classmethod
    def from_dict(cls, d: dict) -> "FieldSpec":
        return cls(int(d["p"]), bool(d.get("field_equations", False)),
                   bool(d.get("char0_proxy", False)))


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.field.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field.p != self.field.p:
                raise DimensionMismatch("elements of different fields")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldElement(self.value + self._coerce(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElement(self.value - self._coerce(other), self.field)

    def __rsub__(self, other):
        return FieldElement(self._coerce(other) - self.value, self.field)

    def __mul__(self, other):
        return FieldElement(self.value * self._coerce(other), self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def inv(self) -> "FieldElement":
        return FieldElement(fe_inv(self.value, self.field), self.field)

    def __int__(self):
        return self.value


def fe_inv(a, F: FieldSpec) -> int:
    """Inverse of ``a`` modulo ``F.p``; raises ZeroInverse for 0."""
    a = int(a) % F.p
    if a == 0:
        raise ZeroInverse("0 has no inverse")
    return pow(a, F.p - 2, F.p)


@dataclass
class RowReduction:
    """Nonzero rows of the rref, the rank and the pivot columns."""

    rref: np.ndarray
    rank: int
    pivots: list[int]
    ncols: int

    def full(self, nrows: int) -> np.ndarray:
        out = np.zeros((nrows, self.ncols), dtype=np.int64)
        out[: self.rank] = self.rref
        return out

    @property
    def nonpivots(self) -> list[int]:
        piv = set(self.pivots)
        return [c for c in range(self.ncols) if c not in piv]


# ---------------------------------------------------------------- GF(2) engine

def pack_rows(M: np.ndarray) -> list[int]:
    """Pack a 0/1 matrix into ints; column 0 becomes the top bit."""
    M = np.asarray(M, dtype=np.uint8) & 1
    if M.shape[0] == 0:
        return []
    packed = np.packbits(M, axis=1)
    return [int.from_bytes(row.tobytes(), "big") for row in packed]


def unpack_rows(rows: Sequence[int], ncols: int) -> np.ndarray:
    nbytes = (ncols + 7) // 8
    out = np.zeros((len(rows), ncols), dtype=np.int64)
    for i, r in enumerate(rows):
        bits = np.unpackbits(np.frombuffer(r.to_bytes(nbytes, "big"), dtype=np.uint8))
        out[i] = bits[:ncols]
    return out


def gf2_rref(rows: Iterable[int]) -> list[int]:
    """Reduced echelon form of packed GF(2) rows, sorted by leading bit (descending)."""
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = r
                break
            r ^= prow
    lower_mask = 0
    for lead in sorted(pivots):
        r = pivots[lead]
        m = r & lower_mask
        while m:
            b = m.bit_length() - 1
            r ^= pivots[b]
            m ^= 1 << b
        pivots[lead] = r
        lower_mask |= 1 << lead
    return [pivots[k] for k in sorted(pivots, reverse=True)]


def gf2_rank(rows: Iterable[int]) -> int:
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            lead = r.bit_length() - 1
            prow = pivots.get(lead)
            if prow is None:
                pivots[lead] = r
                break
            r ^= prow
    return len(pivots)


def _row_reduce_gf2(M: np.ndarray) -> RowReduction:
    nrows, ncols = M.shape
    nbits = 8 * ((ncols + 7) // 8)
    reduced = gf2_rref(pack_rows(M))
    pivots = [nbits - r.bit_length() for r in reduced]
    return RowReduction(unpack_rows(reduced, ncols), len(reduced), pivots, ncols)


# ---------------------------------------------------------------- GF(p) engine

_LEAF_ROWS = 16
_BLOCK_ROWS = 256
_FLOAT_EXACT = 2**53


def _engine_dtype(p: int):
    return np.float64 if (p - 1) ** 2 < _FLOAT_EXACT // 4 else np.int64


def mod_p(x: np.ndarray, p: int) -> np.ndarray:
    """Residues of an integer-valued array; float64 avoids the slow fmod."""
    if x.dtype != np.float64:
        return np.mod(x, p)
    r = x - np.floor(x * (1.0 / p)) * p
    r[r < 0] += p
    r[r >= p] -= p
    return r


def matmul_mod(X: np.ndarray, Y: np.ndarray, p: int) -> np.ndarray:
    """(X @ Y) mod p for residue matrices, exact for p < 2**31."""
    k = X.shape[1]
    if k == 0:
        return np.zeros((X.shape[0], Y.shape[1]), dtype=X.dtype)
    limit = _FLOAT_EXACT if X.dtype == np.float64 else 2**63 - 1
    chunk = max(1, (limit - 1) // ((p - 1) ** 2 or 1) - 1)
    if chunk >= k:
        return mod_p(X @ Y, p)
    acc = np.zeros((X.shape[0], Y.shape[1]), dtype=X.dtype)
    for s in range(0, k, chunk):
        acc += mod_p(X[:, s:s + chunk] @ Y[s:s + chunk], p)
        acc %= p
    return acc


def _leaf_rref(A: np.ndarray, p: int):
    A = A.copy()
    r, c = A.shape
    piv = []
    row = col = 0
    while row < r and col < c:
        nzc = np.flatnonzero(A[row:, col:].any(axis=0))
        if nzc.size == 0:
            break
        cc = col + int(nzc[0])
        rr = row + int(np.flatnonzero(A[row:, cc])[0])
        if rr != row:
            A[[row, rr]] = A[[rr, row]]
        inv = pow(int(A[row, cc]), p - 2, p)
        if inv != 1:
            A[row, cc:] = mod_p(A[row, cc:] * inv, p)
        colv = A[:, cc].copy()
        colv[row] = 0
        nzr = np.flatnonzero(colv)
        if nzr.size:
            A[nzr, cc:] = mod_p(A[nzr, cc:] - np.outer(colv[nzr], A[row, cc:]), p)
        piv.append(cc)
        row += 1
        col = cc + 1
    return A[:row], np.asarray(piv, dtype=np.int64)


class _Fold:
    """Running rref that absorbs blocks of rows (GF(p) engine)."""

    def __init__(self, ncols: int, p: int, dtype, sub_block: int):
        self.p = p
        self.dtype = dtype
        self.sub = sub_block
        self.E = np.zeros((0, ncols), dtype=dtype)
        self.piv = np.zeros(0, dtype=np.int64)

    def add(self, B: np.ndarray) -> None:
        p = self.p
        B = B[B.any(axis=1)]
        if B.shape[0] == 0:
            return
        ncols = B.shape[1]
        if self.piv.size:
            # Only the free (non-pivot) columns can change: E is the identity on
            # its pivots and the reduced block vanishes there.
            free = np.setdiff1d(np.arange(ncols), self.piv, assume_unique=True)
            Ef = self.E[:, free]
            Bf = B[:, free] - matmul_mod(B[:, self.piv], Ef, p)
            Bf[Bf < 0] += p
            Bf = Bf[Bf.any(axis=1)]
            if Bf.shape[0] == 0:
                return
        else:
            free = None
            Bf = B
        if Bf.shape[0] <= _LEAF_ROWS or self.sub <= _LEAF_ROWS:
            E3f, p3f = _leaf_rref(Bf, p)
        else:
            E3f, p3f = _rref_rows(Bf, p, self.sub)
        if E3f.shape[0] == 0:
            return
        if free is None:
            E3, p3 = E3f, p3f
        else:
            p3 = free[p3f]
            Ef = Ef - matmul_mod(Ef[:, p3f], E3f, p)
            Ef[Ef < 0] += p
            self.E[:, free] = Ef
            E3 = np.zeros((E3f.shape[0], ncols), dtype=E3f.dtype)
            E3[:, free] = E3f
        E = np.vstack([self.E, E3])
        piv = np.concatenate([self.piv, p3])
        order = np.argsort(piv, kind="stable")
        self.E, self.piv = E[order], piv[order]

    @property
    def rank(self) -> int:
        return int(self.piv.size)


def _rref_rows(A: np.ndarray, p: int, block: int = _BLOCK_ROWS):
    """Row-blocked elimination: fold blocks of rows into a running rref.

    Each block is first reduced against the current rref by one matrix
    product, then row-reduced on its own (recursively, with smaller blocks),
    and finally used to clear its pivot columns from the running rref.
    """
    keep = A.any(axis=1)
    if not keep.all():
        A = A[keep]
    if A.shape[0] <= _LEAF_ROWS:
        return _leaf_rref(A, p)
    fold = _Fold(A.shape[1], p, A.dtype, max(_LEAF_ROWS, block // 8))
    for s in range(0, A.shape[0], block):
        fold.add(A[s:s + block])
        if fold.rank == A.shape[1]:
            break
    return fold.E, fold.piv


class Eliminator:
    """Incremental row reduction: feed blocks of rows, read the rref at the end.

    Useful when the full matrix would not fit in memory at once.
    """

    def __init__(self, ncols: int, F: FieldSpec):
        self.ncols = ncols
        self.F = F
        self.p = F.p
        self.dtype = _engine_dtype(F.p)
        self._fold = _Fold(ncols, F.p, self.dtype, _BLOCK_ROWS // 8)

    @property
    def rank(self) -> int:
        return self._fold.rank

    @property
    def full(self) -> bool:
        return self.rank == self.ncols

    def add(self, rows) -> None:
        A = np.asarray(rows)
        if A.ndim != 2 or A.shape[1] != self.ncols:
            raise DimensionMismatch("block has the wrong number of columns")
        if A.dtype != self.dtype:
            A = mod_p(A.astype(np.int64), self.p).astype(self.dtype)
        for s in range(0, A.shape[0], _BLOCK_ROWS):
            if self.full:
                return
            self._fold.add(A[s:s + _BLOCK_ROWS])

    def result(self) -> RowReduction:
        E, piv = self._fold.E, self._fold.piv
        return RowReduction(E.astype(np.int64), int(piv.size), [int(c) for c in piv], self.ncols)


def _row_reduce_modp(M: np.ndarray, p: int) -> RowReduction:
    dtype = _engine_dtype(p)
    A = mod_p(np.asarray(M, dtype=np.int64), p).astype(dtype)
    E, piv = _rref_rows(A, p)
    return RowReduction(E.astype(np.int64), int(E.shape[0]), [int(c) for c in piv], A.shape[1])


# Dense GF(2) matrices above this many entries go through the BLAS engine,
# which beats Python-level XOR on big blocks.
_GF2_BITSET_LIMIT = 4_000_000


def _as_matrix(M) -> np.ndarray:
    if isinstance(M, np.ndarray):
        A = M
    else:
        rows = [list(map(int, r)) for r in M]
        if rows and len({len(r) for r in rows}) > 1:
            raise DimensionMismatch("rows of different lengths")
        A = np.array(rows, dtype=np.int64)
        if A.ndim == 1:
            A = A.reshape(len(rows), 0)
    if A.ndim != 2:
        raise DimensionMismatch("expected a 2-d matrix")
    return A


def row_reduce(M, F: FieldSpec) -> RowReduction:
    """Reduced row echelon form of ``M`` over GF(F.p).

    Pivots are the leftmost nonzero columns; zero rows are dropped from the
    returned ``rref`` (``RowReduction.full`` pads them back).
    """
    A = _as_matrix(M)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return RowReduction(np.zeros((0, A.shape[1]), dtype=np.int64), 0, [], A.shape[1])
    if F.p == 2 and A.size <= _GF2_BITSET_LIMIT:
        return _row_reduce_gf2(mod_p(A, 2))
    return _row_reduce_modp(A, F.p)


def matrix_rank(M, F: FieldSpec) -> int:
    A = _as_matrix(M)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    if F.p == 2 and A.size <= _GF2_BITSET_LIMIT:
        return gf2_rank(pack_rows(mod_p(A, 2)))
    return _row_reduce_modp(A, F.p).rank


def in_row_space(vec, red: RowReduction, F: FieldSpec) -> bool:
    """Whether ``vec`` lies in the row space described by ``red``."""
    v = mod_p(np.asarray(vec, dtype=np.int64), F.p)
    if red.rank == 0:
        return not v.any()
    dtype = _engine_dtype(F.p)
    coeffs = v[red.pivots].reshape(1, -1).astype(dtype)
    prod = matmul_mod(coeffs, np.asarray(red.rref).astype(dtype), F.p)[0].astype(np.int64)
    return not mod_p(v - prod, F.p).any()
