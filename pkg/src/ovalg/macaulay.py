"""Macaulay matrices, Hilbert functions by rank, Groebner checks, solving and first fall degrees."""

from __future__ import annotations

import csv
import heapq
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .errors import BadParameters, BudgetExceeded, DegreeTooSmall, NotFoundWithin
from .ffield import Eliminator, FieldSpec, RowReduction, matmul_mod, mod_p, row_reduce
from .polyring import (Polynomial, Ring, format_monomial, grevlex_key, mono_div, mono_lcm,
                       mono_mul, monomials_of_degree)
from .series import TruncatedSeries

DEFAULT_MAX_ENTRIES = 10**8

_settings = {"max_entries": DEFAULT_MAX_ENTRIES}

# Koszul rows are compressed by a random combination only over large primes,
# where losing rank by accident is negligible.
COMPRESS_MIN_PRIME = 2**20
COMPRESS_SEED = 20240611


def set_max_entries(limit: int) -> None:
    """Change the default matrix budget (rows x columns) used by every builder."""
    _settings["max_entries"] = int(limit)


def max_entries() -> int:
    return _settings["max_entries"]


def _check_budget(rows: int, cols: int, limit: int | None):
    limit = max_entries() if limit is None else limit
    if rows * cols > limit:
        raise BudgetExceeded(f"matrix {rows}x{cols} exceeds the budget of {limit} entries")


# ---------------------------------------------------------------- matrices

@dataclass
class MacaulayMatrix:
    """Coefficient matrix of monomial multiples mu * f_i.

    ``mode`` is ``"hom"`` (all rows of degree d) or ``"aff"`` (degree <= d).
    """

    mode: str
    degree: int
    ring: Ring
    columns: list
    rows: list  # (multiplier monomial, 0-based equation index)
    entries: np.ndarray = field(repr=False)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def field(self) -> FieldSpec:
        return self.ring.field

    def column_labels(self) -> list[str]:
        return [format_monomial(m, self.ring.names) for m in self.columns]

    def row_labels(self) -> list[str]:
        return [f"{format_monomial(mu, self.ring.names)}*f{i + 1}" for mu, i in self.rows]

    def row_reduce(self) -> RowReduction:
        return row_reduce(self.entries, self.field)

    def rank(self) -> int:
        return matrix_rank_of(self.entries, self.field)

    def rows_to_polynomials(self, red: RowReduction | None = None) -> list[Polynomial]:
        """Nonzero rows (of the rref by default) as polynomials, by leading monomial descending."""
        mat = (red if red is not None else self.row_reduce()).rref
        polys = []
        for row in mat:
            nz = np.flatnonzero(row)
            if nz.size:
                polys.append(Polynomial({self.columns[c]: int(row[c]) for c in nz}, self.ring, False))
        polys.sort(key=lambda f: grevlex_key(f.leading_monomial()), reverse=True)
        return polys

    def write_csv(self, path: str) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow([""] + self.column_labels())
            for label, row in zip(self.row_labels(), self.entries):
                w.writerow([label] + [int(c) for c in row])


def read_macaulay_csv(path: str) -> tuple[list[str], list[str], np.ndarray]:
    """Read back a matrix dump: (column labels, row labels, entries)."""
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    header = rows[0][1:]
    labels = [r[0] for r in rows[1:]]
    entries = np.array([[int(c) for c in r[1:]] for r in rows[1:]], dtype=np.int64).reshape(len(labels), len(header))
    return header, labels, entries


def matrix_rank_of(A: np.ndarray, F: FieldSpec) -> int:
    from .ffield import matrix_rank
    return matrix_rank(A, F)


def _columns(ring: Ring, d: int, mode: str) -> list:
    if mode == "hom":
        return ring.monomials(d)
    cols = []
    for e in range(d, -1, -1):
        cols.extend(ring.monomials(e))
    return cols


def _multipliers(ring: Ring, polys: Sequence[Polynomial], d: int, mode: str) -> list:
    """Row labels: for hom mode (equation, multiplier ascending); for aff mode
    (multiplier degree ascending, equation, multiplier ascending)."""
    rows = []
    if mode == "hom":
        for i, f in enumerate(polys):
            k = d - f.degree()
            rows.extend((mu, i) for mu in reversed(ring.monomials(k)))
        return rows
    degs = [f.degree() for f in polys]
    for k in range(0, d + 1):
        mus = list(reversed(ring.monomials(k)))
        for i, df in enumerate(degs):
            if k <= d - df:
                rows.extend((mu, i) for mu in mus)
    return rows


def _fill(ring: Ring, polys, rows, col_index, ncols) -> np.ndarray:
    p = ring.p
    M = np.zeros((len(rows), ncols), dtype=np.int64)
    cache = {}
    for r, (mu, i) in enumerate(rows):
        f = polys[i]
        for m, c in f.terms.items():
            key = (mu, m)
            prod = cache.get(key)
            if prod is None:
                prod = ring.reduce_monomial(mono_mul(mu, m))
                cache[key] = prod
            if prod is None:
                continue
            j = col_index[prod]
            M[r, j] = (M[r, j] + c) % p
    return M


def build_macaulay(S, d: int, mode: str = "hom", max_entries: int | None = None) -> MacaulayMatrix:
    """M_d (``mode="hom"``) or M_<=d (``mode="aff"``) of a system or list of polynomials."""
    polys, ring = _polys_and_ring(S)
    if mode not in ("hom", "aff"):
        raise BadParameters(f"unknown Macaulay mode {mode!r}")
    polys = [f for f in polys if f]
    if polys and d < max(f.degree() for f in polys):
        raise DegreeTooSmall(f"degree {d} is below the largest generator degree")
    if mode == "hom":
        for f in polys:
            if not f.is_homogeneous():
                raise BadParameters("homogeneous Macaulay matrix needs homogeneous polynomials")
    columns = _columns(ring, d, mode)
    rows = _multipliers(ring, polys, d, mode)
    _check_budget(len(rows), len(columns), max_entries)
    col_index = {m: j for j, m in enumerate(columns)}
    entries = _fill(ring, polys, rows, col_index, len(columns))
    return MacaulayMatrix(mode, d, ring, columns, rows, entries)


def _polys_and_ring(S) -> tuple[list, Ring]:
    if hasattr(S, "polys"):
        return list(S.polys), S.ring
    polys = list(S)
    if not polys:
        raise BadParameters("cannot infer the ring of an empty polynomial list")
    return polys, polys[0].ring


def macaulay_row_count(ring: Ring, degrees: Sequence[int], d: int) -> int:
    """Exact number of rows of M_d: sum of dim R_{d - deg f_i}."""
    return sum(ring.component_dim(d - k) for k in degrees if d >= k)


def rank_at_degree(S, d: int, max_entries: int | None = None) -> int:
    return build_macaulay(S, d, "hom", max_entries).rank()


def kernel_dim_at_degree(S, d: int, max_entries: int | None = None) -> int:
    """rows(M_d) - rank(M_d): every syzygy at degree d, trivial ones included."""
    M = build_macaulay(S, d, "hom", max_entries)
    return M.shape[0] - M.rank()


# ---------------------------------------------------------------- Hilbert function

class _QuotientDegree:
    """Basis of (R/P)_e (as column positions) with the normal form of every monomial."""

    def __init__(self, ring: Ring, e: int, polys, max_entries):
        self.monos = ring.monomials(e)
        self.index = {m: j for j, m in enumerate(self.monos)}
        p = ring.p
        gens = [f for f in polys if f.degree() <= e]
        if gens:
            M = build_macaulay(gens, e, "hom", max_entries)
            red = M.row_reduce()
        else:
            red = RowReduction(np.zeros((0, len(self.monos)), dtype=np.int64), 0, [], len(self.monos))
        piv = red.pivots
        pivset = set(piv)
        self.basis = [j for j in range(len(self.monos)) if j not in pivset]
        self.dim = len(self.basis)
        nf = np.zeros((len(self.monos), self.dim), dtype=np.int64)
        for k, j in enumerate(self.basis):
            nf[j, k] = 1
        if red.rank and self.dim:
            nf[piv] = (-red.rref[:, self.basis]) % p
        self.normal_form = nf

    def mult_maps(self, lower: "_QuotientDegree", n: int) -> list[np.ndarray]:
        """Matrices of multiplication by x_i from ``lower`` (degree e-1) into self."""
        maps = []
        for i in range(n):
            rows = []
            for j in lower.basis:
                m = list(lower.monos[j])
                m[i] += 1
                rows.append(self.index[tuple(m)])
            maps.append(self.normal_form[rows] if rows else np.zeros((0, self.dim), dtype=np.int64))
        return maps


def _free_generators(polys, ring: Ring) -> tuple[list, Ring]:
    """Re-read polynomials in the free ring, adding x_i^q for a graded quotient."""
    free = Ring(ring.n, FieldSpec(ring.p, False, ring.field.char0_proxy), "free", ring.names)
    out = [Polynomial(f.terms, free) for f in polys if f]
    if ring.quotient == "graded":
        q = ring.p
        for i in range(ring.n):
            m = [0] * ring.n
            m[i] = q
            out.append(Polynomial({tuple(m): 1}, free))
    elif ring.quotient == "affine":
        raise BadParameters("Hilbert functions need a graded ring; use top parts in the graded quotient")
    return out, free


def _extension_step(A: list[np.ndarray], n: int, F: FieldSpec, max_entries) -> tuple[int, list[np.ndarray]]:
    """From multiplication maps (R/P)_{d-1} -> (R/P)_d, build (R/P)_{d+1} and its maps.

    (R/P)_{d+1} is the quotient of R_1 (x) (R/P)_d by the Koszul relations
    x_i (x) x_j b - x_j (x) x_i b, b running over a basis of (R/P)_{d-1}.
    """
    p = F.p
    Hp, Hd = A[0].shape
    ncols = n * Hd
    if Hd == 0:
        return 0, [np.zeros((0, 0), dtype=np.int64) for _ in range(n)]
    # rows are streamed; only the running echelon form (at most ncols rows) is held
    _check_budget(ncols, ncols, max_entries)
    elim = Eliminator(ncols, F)
    pairs = list(combinations(range(n), 2))
    nrows = Hp * len(pairs)
    if p >= COMPRESS_MIN_PRIME and nrows > 2 * ncols:
        # Replace the Koszul rows by ncols random combinations of them. The rank
        # survives except with probability about p^-(ncols - rank + 1). Each
        # pair (i, j) only touches column blocks i and j, so the product is
        # formed block by block.
        dtype = elim.dtype
        rng = np.random.default_rng(COMPRESS_SEED + ncols)
        Af = [a.astype(dtype) for a in A]
        acc = np.zeros((ncols, ncols), dtype=dtype)
        for i, j in pairs:
            mix = rng.integers(0, p, size=(ncols, Hp)).astype(dtype)
            acc[:, i * Hd:(i + 1) * Hd] += matmul_mod(mix, Af[j], p)
            acc[:, j * Hd:(j + 1) * Hd] -= matmul_mod(mix, Af[i], p)
        # each entry is a sum of at most n - 1 residues of either sign
        elim.add(mod_p(acc, p))
    else:
        neg = [(-a) % p for a in A]
        per_block = max(1, 2048 // max(Hp, 1))
        for s in range(0, len(pairs), per_block):
            chunk = pairs[s:s + per_block]
            block = np.zeros((Hp * len(chunk), ncols), dtype=np.int64)
            for k, (i, j) in enumerate(chunk):
                r0 = k * Hp
                block[r0:r0 + Hp, i * Hd:(i + 1) * Hd] = A[j]
                block[r0:r0 + Hp, j * Hd:(j + 1) * Hd] = neg[i]
            elim.add(block)
            if elim.full:
                break
    red = elim.result()
    pivset = set(red.pivots)
    basis = [c for c in range(ncols) if c not in pivset]
    Hn = len(basis)
    proj = np.zeros((ncols, Hn), dtype=np.int64)
    proj[basis, np.arange(Hn)] = 1
    if red.rank and Hn:
        proj[red.pivots] = (-red.rref[:, basis]) % p
    return Hn, [proj[i * Hd:(i + 1) * Hd] for i in range(n)]


def _macaulay_cost(ring: Ring, degrees, d: int) -> int:
    rows = macaulay_row_count(ring, degrees, d)
    cols = ring.component_dim(d)
    return rows * cols * min(rows, cols)


def _extension_cost(n: int, Hp: int, Hd: int) -> int:
    rows = Hp * n * (n - 1) // 2
    cols = n * Hd
    return rows * cols * min(rows, cols)


def empirical_hilbert(S, D: int, method: str = "auto", max_entries: int | None = None) -> TruncatedSeries:
    """H(d) = dim R_d - rank M_d for d = 0..D.

    ``method``: ``"macaulay"`` builds M_d at every degree; ``"extension"``
    uses Macaulay matrices only up to the largest generator degree and then
    grows the quotient degree by degree through Koszul relations; ``"auto"``
    switches when the extension step becomes cheaper.
    """
    polys, ring = _polys_and_ring(S)
    if method not in ("auto", "macaulay", "extension"):
        raise BadParameters(f"unknown method {method!r}")
    polys = [f for f in polys if f]
    for f in polys:
        if not f.is_homogeneous():
            raise BadParameters("empirical_hilbert needs homogeneous polynomials (use top parts)")
    if ring.quotient == "affine":
        raise BadParameters("use the graded quotient for Hilbert functions")
    if method == "macaulay":
        out = []
        for d in range(D + 1):
            gens = [f for f in polys if f.degree() <= d]
            rank = build_macaulay(gens, d, "hom", max_entries).rank() if gens else 0
            out.append(ring.component_dim(d) - rank)
        return TruncatedSeries(out)
    gens, free = _free_generators(polys, ring)
    n = ring.n
    F = free.field
    d0 = max((f.degree() for f in gens), default=0)
    if d0 == 0:
        return TruncatedSeries([free.component_dim(d) for d in range(D + 1)])
    degrees = [f.degree() for f in gens]
    out = []
    prev = cur = None
    d = 0
    while d <= D:
        if d <= d0 or method == "auto" and prev is not None and \
                _macaulay_cost(free, degrees, d) <= _extension_cost(n, prev.dim, cur.dim):
            q = _QuotientDegree(free, d, gens, max_entries)
            out.append(q.dim)
            prev, cur = cur, q
            d += 1
            continue
        break
    if d > D:
        return TruncatedSeries(out)
    maps = cur.mult_maps(prev, n)
    while d <= D:
        Hn, maps = _extension_step(maps, n, F, max_entries)
        out.append(Hn)
        d += 1
        if Hn == 0:
            out.extend([0] * (D + 1 - d))
            break
    return TruncatedSeries(out)


def hilbert_on_columns(S, D: int, columns_filter: Callable[[tuple], bool],
                       max_entries: int | None = None) -> tuple[TruncatedSeries, bool]:
    """dim(W_d) - rank(M_d) where W_d is spanned by the monomials passing the filter.

    Also reports whether every entry outside W_d vanished (the system lies in W).
    """
    polys, ring = _polys_and_ring(S)
    polys = [f for f in polys if f]
    out = []
    inside = True
    for d in range(D + 1):
        monos = ring.monomials(d)
        keep = np.array([columns_filter(m) for m in monos], dtype=bool)
        gens = [f for f in polys if f.degree() <= d]
        if gens:
            M = build_macaulay(gens, d, "hom", max_entries)
            if M.entries[:, ~keep].any():
                inside = False
            rank = matrix_rank_of(M.entries[:, keep], ring.field)
        else:
            rank = 0
        out.append(int(keep.sum()) - rank)
    return TruncatedSeries(out), inside


# ---------------------------------------------------------------- Groebner bases

@dataclass
class GroebnerCheckResult:
    is_basis: bool
    failing_pair: tuple | None = None
    remainder: Polynomial | None = None
    pair_polys: tuple | None = None

    def __bool__(self):
        return self.is_basis


def _field_polys(ring: Ring) -> list[Polynomial]:
    q = ring.p
    out = []
    for i in range(ring.n):
        m = [0] * ring.n
        m[i] = q
        terms = {tuple(m): 1}
        if ring.quotient == "affine":
            lin = [0] * ring.n
            lin[i] = 1
            terms[tuple(lin)] = q - 1
        out.append(terms)
    return out


class _Reducer:
    """Full multivariate division by a list of monic polynomials (grevlex)."""

    def __init__(self, polys: list[dict], p: int):
        self.p = p
        self.polys = polys
        self.lead = [max(f, key=grevlex_key) for f in polys]
        self.by_lead = {}
        for k, m in enumerate(self.lead):
            self.by_lead.setdefault(m, k)
        self.leads = list(self.by_lead.items())

    def divisor(self, m) -> int | None:
        k = self.by_lead.get(m)
        if k is not None:
            return k
        for lm, k in self.leads:
            if all(a <= b for a, b in zip(lm, m)):
                return k
        return None

    def reduce(self, f: dict) -> dict:
        p = self.p
        f = dict(f)
        heap = [(_neg_key(m), m) for m in f]
        heapq.heapify(heap)
        rem = {}
        while heap:
            _, m = heapq.heappop(heap)
            c = f.pop(m, 0)
            if not c:
                continue
            k = self.divisor(m)
            if k is None:
                rem[m] = c
                continue
            g = self.polys[k]
            shift = mono_div(m, self.lead[k])
            for gm, gc in g.items():
                t = mono_mul(gm, shift)
                if t == m:
                    continue
                old = f.get(t)
                v = ((old or 0) - c * gc) % p
                if v:
                    f[t] = v
                    if old is None:
                        heapq.heappush(heap, (_neg_key(t), t))
                elif old is not None:
                    del f[t]
        return rem


def _neg_key(m):
    deg, rest = grevlex_key(m)
    return (-deg, tuple(-x for x in rest))


def _monic(terms: dict, p: int) -> dict:
    lm = max(terms, key=grevlex_key)
    inv = pow(terms[lm], p - 2, p)
    return {m: c * inv % p for m, c in terms.items()}


def _spoly(f: dict, g: dict, lf, lg, p: int) -> dict:
    l = mono_lcm(lf, lg)
    a, b = mono_div(l, lf), mono_div(l, lg)
    out = {}
    for m, c in f.items():
        t = mono_mul(m, a)
        out[t] = (out.get(t, 0) + c) % p
    for m, c in g.items():
        t = mono_mul(m, b)
        out[t] = (out.get(t, 0) - c) % p
    return {m: c for m, c in out.items() if c}


def _coprime(a, b) -> bool:
    return all(x == 0 or y == 0 for x, y in zip(a, b))


def groebner_check(polys: Sequence[Polynomial], order: str = "grevlex",
                   witness: bool = True) -> GroebnerCheckResult:
    """Buchberger's criterion with the coprime-leading-term skip.

    Field polynomials of the ring's quotient (x_i^q - x_i or x_i^q) are
    appended. The decision uses the equivalent test on the set of elements with
    minimal leading terms; on failure the failing pair is found by scanning
    S-pairs of the whole list by increasing lcm (grevlex), reducing modulo the
    whole list. Indices in ``failing_pair`` refer to ``polys``.
    """
    if order != "grevlex":
        raise BadParameters("only grevlex is supported")
    polys = [f for f in polys if f]
    if not polys:
        return GroebnerCheckResult(True)
    ring = polys[0].ring
    p = ring.p
    items = [_monic(dict(f.terms), p) for f in polys]
    if ring.quotient != "free":
        items += [_monic(t, p) for t in _field_polys(ring)]
    leads = [max(f, key=grevlex_key) for f in items]
    # elements whose leading monomial is minimal (no other lead divides it)
    minimal = []
    seen = set()
    for k, lm in enumerate(leads):
        if lm in seen:
            continue
        if any(j != k and leads[j] != lm and all(a <= b for a, b in zip(leads[j], lm)) for j in range(len(leads))):
            continue
        seen.add(lm)
        minimal.append(k)
    red_min = _Reducer([items[k] for k in minimal], p)
    ok = True
    minimal_set = set(minimal)
    for k in range(len(items)):
        if k not in minimal_set and red_min.reduce(items[k]):
            ok = False
            break
    if ok:
        for a, b in combinations(minimal, 2):
            if _coprime(leads[a], leads[b]):
                continue
            if red_min.reduce(_spoly(items[a], items[b], leads[a], leads[b], p)):
                ok = False
                break
    if ok:
        return GroebnerCheckResult(True)
    if not witness:
        return GroebnerCheckResult(False)
    red_all = _Reducer(items, p)
    pairs = [(a, b) for a, b in combinations(range(len(items)), 2) if not _coprime(leads[a], leads[b])]
    pairs.sort(key=lambda ab: (grevlex_key(mono_lcm(leads[ab[0]], leads[ab[1]])), ab))
    free = Ring(ring.n, ring.field, "free", ring.names) if ring.quotient != "free" else ring
    for a, b in pairs:
        rem = red_all.reduce(_spoly(items[a], items[b], leads[a], leads[b], p))
        if rem:
            pa = polys[a] if a < len(polys) else Polynomial(items[a], free)
            pb = polys[b] if b < len(polys) else Polynomial(items[b], free)
            return GroebnerCheckResult(False, (a, b), Polynomial(rem, free), (pa, pb))
    # Only reachable if the decision above disagreed with the pair scan.
    raise AssertionError("Groebner decision and pair scan disagree")


def solving_degree(S, d_max: int, order: str = "grevlex", max_entries: int | None = None,
                   start: int | None = None) -> int:
    """Least d <= d_max such that the rref rows of M_<=d form a Groebner basis."""
    polys, ring = _polys_and_ring(S)
    polys = [f for f in polys if f]
    lo = max((f.degree() for f in polys), default=0)
    lo = max(lo, 1) if start is None else max(start, lo)
    for d in range(lo, d_max + 1):
        M = build_macaulay(polys, d, "aff", max_entries)
        basis = M.rows_to_polynomials()
        if groebner_check(basis, order, witness=False).is_basis:
            return d
    raise NotFoundWithin(d_max, "solving degree")


def rref_polynomials(S, d: int, max_entries: int | None = None) -> list[Polynomial]:
    """Rows of rref(M_<=d) as polynomials, leading monomial descending."""
    return build_macaulay(S, d, "aff", max_entries).rows_to_polynomials()


def degree_fall_rows(S, d: int, max_entries: int | None = None) -> list[Polynomial]:
    """Rows of rref(M_<=d) of degree < d that are not combinations of M_<=(d-1) rows."""
    polys, ring = _polys_and_ring(S)
    top = build_macaulay(polys, d, "aff", max_entries)
    lower = [f for f in top.rows_to_polynomials() if f.degree() < d]
    if d - 1 < max(f.degree() for f in polys if f):
        return lower
    prev = build_macaulay(polys, d - 1, "aff", max_entries)
    red = prev.row_reduce()
    index = {m: j for j, m in enumerate(prev.columns)}
    from .ffield import in_row_space
    out = []
    for f in lower:
        vec = np.zeros(len(prev.columns), dtype=np.int64)
        for m, c in f.terms.items():
            vec[index[m]] = c
        if not in_row_space(vec, red, ring.field):
            out.append(f)
    return out


def first_fall_degree(S, d_max: int, triv: Callable[[int, int, int], int] | None = None,
                      max_entries: int | None = None) -> int:
    """Least d <= d_max where the kernel of M_d(top parts) exceeds the trivial count."""
    from .invariants import triv_count

    polys, ring = _polys_and_ring(S)
    tops = [f.top_part() for f in polys if f]
    if ring.quotient == "affine":
        ring = ring.with_quotient("graded")
        tops = [Polynomial(f.terms, ring) for f in tops]
        tops = [f for f in tops if f]
    if not tops:
        raise NotFoundWithin(d_max, "first fall degree")
    n, m = ring.n, len(tops)
    count = triv if triv is not None else (lambda n_, m_, d_: triv_count(n_, m_, d_, ring.field, ring.bounded))
    lo = max(f.degree() for f in tops)
    for d in range(lo, d_max + 1):
        if kernel_dim_at_degree(tops, d, max_entries) > count(n, m, d):
            return d
    raise NotFoundWithin(d_max, "first fall degree")
