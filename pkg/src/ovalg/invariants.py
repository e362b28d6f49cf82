"""Derived invariants of quadratic systems: trivial syzygies, Hilbert-series
decompositions for OV and mixed systems, regularity degrees and dimension."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Sequence

import numpy as np

from .errors import (BadParameters, IdentityViolation, InsufficientHeadroom, NotFoundWithin,
                     NotMixed, NotOV, OvalgError, SingularSubset)
from .ffield import PROXY_PRIMES, FieldSpec, in_row_space
from .macaulay import (build_macaulay, empirical_hilbert, first_fall_degree, groebner_check,
                       hilbert_on_columns, rref_polynomials, solving_degree)
from .polyring import Polynomial, Ring
from .series import (TruncatedSeries, bracket, expand, predict_oil_ring, predict_ov_semiregular,
                     predict_semiregular_char0, predict_semiregular_fq)
from .sysgen import PolySystem, is_ov

# ---------------------------------------------------------------- trivial syzygies


def _triv_char0(n: int, m: int, d: int) -> int:
    total = 0
    i = 1
    while d - 2 - 2 * i >= 0:
        delta = d - 2 - 2 * i
        total += (-1) ** (i - 1) * comb(n + delta - 1, delta) * comb(m, i + 1)
        i += 1
    return total


def _triv_gf2(n: int, m: int, d: int) -> int:
    total = 0
    i = 1
    while d - 2 - 2 * i >= 0:
        delta = d - 2 - 2 * i
        total += (-1) ** (i - 1) * comb(n, delta) * comb(m + i, i + 1)
        i += 1
    return total


def _triv_fq(n: int, m: int, d: int, q: int) -> int:
    # rows of M_d minus the rank a semi-regular system would reach
    R = expand(predict_semiregular_fq(n, 0, q), d)
    raw = expand(predict_semiregular_fq(n, m, q), d)
    rows = m * R.get(d - 2)
    return rows - (R[d] - raw[d])


def triv_count(n: int, m: int, d: int, F: FieldSpec | None = None, bounded: bool | None = None) -> int:
    """Number of independent trivial relations among the degree-d rows of m quadratics.

    Characteristic 0 (or no field equations): Koszul relations f_i f_j = f_j f_i.
    Over GF(2) with field equations the relations f^2 = f are added; over GF(q),
    q > 2, the count comes from the semi-regular series.
    """
    if d < 4 or m < 1:
        return 0
    bounded = (F is not None and F.field_equations) if bounded is None else bounded
    if not bounded:
        return _triv_char0(n, m, d)
    if F.p == 2:
        return _triv_gf2(n, m, d)
    return _triv_fq(n, m, d, F.p)


def triv_table(n: int, m: int, D: int, F: FieldSpec | None = None) -> list[int]:
    return [triv_count(n, m, d, F) for d in range(D + 1)]


# ---------------------------------------------------------------- Delta_S relations

@dataclass
class DeltaRelation:
    """det of the v x v linear-form matrix A with f_i = sum_j x_j A[i][j]."""

    subset: tuple
    delta: Polynomial
    matrix: list

    @property
    def v(self) -> int:
        return len(self.subset)

    def decomposition_holds(self, S: PolySystem) -> bool:
        ring = S.ring
        for row, i in zip(self.matrix, self.subset):
            acc = ring.zero()
            for j, a in enumerate(row):
                acc = acc + ring.var(j) * a
            if acc != S.polys[i]:
                return False
        return True


def vinegar_decomposition(f: Polynomial, v: int) -> list[Polynomial]:
    """Linear forms A_j with f = sum_{j<v} x_j A_j; each monomial goes to its smallest variable."""
    ring = f.ring
    parts = [dict() for _ in range(v)]
    for m, c in f.terms.items():
        if sum(m) != 2:
            raise BadParameters("decomposition needs a quadratic form")
        a = next(i for i, e in enumerate(m) if e)
        if a >= v:
            raise NotOV("oil-oil monomial in an OV decomposition")
        rest = list(m)
        rest[a] -= 1
        parts[a][tuple(rest)] = c
    return [Polynomial(t, ring) for t in parts]


def poly_det(A: Sequence[Sequence[Polynomial]], ring: Ring) -> Polynomial:
    """Determinant by cofactor expansion along the first row."""
    k = len(A)
    if k == 0:
        return ring.one()
    if k == 1:
        return A[0][0]
    total = ring.zero()
    for j in range(k):
        if not A[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * poly_det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def delta_relation(S: PolySystem, subset: Sequence[int]) -> DeltaRelation:
    """Delta_S for a v-subset of an OV system (vinegar x_1..x_v)."""
    v = S.v
    subset = tuple(subset)
    if len(subset) != v:
        raise BadParameters(f"subset must have exactly v={v} indices")
    A = [vinegar_decomposition(S.polys[i], v) for i in subset]
    delta = poly_det(A, S.ring)
    if not delta:
        raise SingularSubset(f"determinant vanishes for subset {subset}")
    return DeltaRelation(subset, delta, A)


def in_ideal(gens: Sequence[Polynomial], h: Polynomial) -> bool:
    """Membership of a homogeneous h in the ideal of homogeneous gens, by Macaulay rank."""
    if not h:
        return True
    gens = [f for f in gens if f and f.degree() <= h.degree()]
    if not gens:
        return False
    M = build_macaulay(gens, h.degree(), "hom")
    red = M.row_reduce()
    index = {m: j for j, m in enumerate(M.columns)}
    vec = np.zeros(len(M.columns), dtype=np.int64)
    for m, c in h.terms.items():
        vec[index[m]] = c
    return in_row_space(vec, red, M.field)


def verify_delta(S: PolySystem, rel: DeltaRelation, g: Polynomial) -> bool:
    """True when delta * g lies in the ideal of the subset (g a vinegar quadratic form)."""
    v = S.v
    if g and (not g.is_homogeneous() or g.degree() != 2):
        raise BadParameters("g must be a quadratic form")
    for m in g.terms:
        if not any(m[:v]):
            raise BadParameters("g has a monomial without vinegar variables")
    return in_ideal([S.polys[i] for i in rel.subset], rel.delta * g)


def delta_multiples_in_ideal(S: PolySystem, rel: DeltaRelation) -> bool:
    """x_i * delta in the subset ideal for every vinegar variable x_i."""
    gens = [S.polys[i] for i in rel.subset]
    return all(in_ideal(gens, S.ring.var(i) * rel.delta) for i in range(S.v))


def vinegar_quadratics(S: PolySystem) -> list[Polynomial]:
    """Monomial basis of V_2: x_a x_b with a a vinegar index."""
    return [S.ring.monomial(m) for m in S.ring.monomials(2) if any(m[:S.v])]


# ---------------------------------------------------------------- dimension and regularity

def _interpolate(points: list[tuple[int, int]]):
    """Exact Lagrange interpolant through the points, as a callable."""

    def value(x: int) -> Fraction:
        total = Fraction(0)
        for i, (xi, yi) in enumerate(points):
            term = Fraction(yi)
            for j, (xj, _) in enumerate(points):
                if j != i:
                    term *= Fraction(x - xj, xi - xj)
            total += term
        return total

    return value


def index_of_regularity(h: TruncatedSeries, dim: int, D: int | None = None) -> int:
    """Least d from which h agrees with a polynomial of degree dim - 1 up to D.

    The window d..D must contain at least dim + 2 values (dim to fit, two to
    confirm); otherwise InsufficientHeadroom is raised.
    """
    D = h.D if D is None else min(D, h.D)
    if dim < 0:
        raise BadParameters("dimension must be non-negative")
    for d in range(D + 1):
        if D - d + 1 < dim + 2:
            break
        if dim == 0:
            if all(h[e] == 0 for e in range(d, D + 1)):
                return d
            continue
        fit = _interpolate([(e, h[e]) for e in range(d, d + dim)])
        if all(fit(e) == h[e] for e in range(d + dim, D + 1)):
            return d
    raise InsufficientHeadroom(f"no regularity index with {dim + 2} confirming values up to degree {D}")


def estimate_dimension(h: TruncatedSeries, window: int = 2) -> int:
    """Smallest k whose k-th finite difference vanishes on the last ``window`` values."""
    vals = list(h)
    for k in range(len(vals)):
        diff = vals
        for _ in range(k):
            diff = [b - a for a, b in zip(diff, diff[1:])]
        if len(diff) < window:
            break
        if all(x == 0 for x in diff[-window:]):
            return k
    raise InsufficientHeadroom("series too short to estimate its dimension")


def regularity_from_series(h: TruncatedSeries) -> int:
    """Least d with h(d) = 0 on the tail, else the index of regularity at the estimated dimension."""
    dim = estimate_dimension(h)
    return index_of_regularity(h, dim)


def _max_independent(n: int, leads: list) -> int:
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    supports = [s for s in supports if s]
    if any(not frozenset(i for i, e in enumerate(m) if e) for m in leads):
        return -1  # a constant: unit ideal
    for size in range(n, -1, -1):
        for U in combinations(range(n), size):
            U = frozenset(U)
            if not any(s <= U for s in supports):
                return size
    return 0


def krull_dimension(S, d_max: int = 8) -> int:
    """Dimension of R/F read from the leading terms of a Groebner basis.

    The basis is the rref of M_<=d at the solving degree; field polynomials of
    the ring's quotient take part. Returns -1 for the unit ideal.
    """
    polys = list(S.polys) if hasattr(S, "polys") else list(S)
    polys = [f for f in polys if f]
    ring = S.ring if hasattr(S, "ring") else polys[0].ring
    if not polys:
        return 0 if ring.quotient != "free" else ring.n
    d = solving_degree(polys, d_max)
    basis = rref_polynomials(polys, d)
    leads = [g.leading_monomial() for g in basis]
    if ring.quotient != "free":
        for i in range(ring.n):
            m = [0] * ring.n
            m[i] = ring.p
            leads.append(tuple(m))
    return _max_independent(ring.n, leads)


# ---------------------------------------------------------------- OV systems

@dataclass
class OVDecomposition:
    """H_{R/F} = H_{K_o} + H_{V/F}, with the identity checked per degree."""

    rf: TruncatedSeries
    ko: TruncatedSeries
    vf: TruncatedSeries
    vf_independent: bool = False
    inside_v: bool = True

    def __iter__(self):
        return iter((self.rf, self.ko, self.vf))

    def identity_holds(self) -> bool:
        return all(self.rf[d] == self.ko[d] + self.vf[d] for d in range(self.rf.D + 1))


def ov_decomposition(S: PolySystem, D: int, independent: bool = False,
                     method: str = "auto") -> OVDecomposition:
    """Split the Hilbert function of a homogeneous OV system along R/V = K_o.

    With ``independent`` the V-part comes from Macaulay matrices restricted to
    the vinegar columns (and H_{R/F} from ``method``), and the additive identity
    is asserted; otherwise H_{V/F} is the difference.
    """
    v = S.v
    if is_ov(S.polys, range(v)) is None or not 0 <= v < S.n:
        raise NotOV(f"system is not OV with vinegar x1..x{v}")
    rf = empirical_hilbert(S, D, method=method)
    ko = expand(predict_oil_ring(S.n, v, S.field), D)
    if not independent:
        return OVDecomposition(rf, ko, rf - ko)
    vf, inside = hilbert_on_columns(S, D, lambda m: any(m[:v]))
    dec = OVDecomposition(rf, ko, vf, True, inside)
    if not inside or not dec.identity_holds():
        raise IdentityViolation("H_{R/F} != H_{K_o} + H_{V/F}")
    return dec


def ov_dreg(S: PolySystem, D: int, vf: TruncatedSeries | None = None) -> int:
    """Least d with H_{V/F}(d) = 0, or the index of regularity of H_{V/F} when it never vanishes."""
    if vf is None:
        vf = ov_decomposition(S, D).vf
    for d in range(1, vf.D + 1):
        if vf[d] == 0 and all(vf[e] == 0 for e in range(d, vf.D + 1)):
            return d
    try:
        return regularity_from_series(vf)
    except InsufficientHeadroom as exc:
        raise NotFoundWithin(vf.D, "degree of regularity") from exc


# ---------------------------------------------------------------- mixed systems

@dataclass
class MixedDecomposition:
    """H_{R/P} = H_{(V+Q)/P} + H_{K_o/Q_o}, plus optional part series."""

    rp: TruncatedSeries
    vqp: TruncatedSeries
    koqo: TruncatedSeries
    rf: TruncatedSeries | None = None
    rq: TruncatedSeries | None = None

    def __iter__(self):
        return iter((self.rp, self.vqp, self.koqo))

    def q_over_fq(self) -> TruncatedSeries | None:
        """H_{Q/(F cap Q)} = H_{R/F} - H_{R/P}."""
        return None if self.rf is None else self.rf - self.rp

    def f_over_fq(self) -> TruncatedSeries | None:
        """H_{F/(F cap Q)} = H_{R/Q} - H_{R/P}."""
        return None if self.rq is None else self.rq - self.rp


def oil_part_system(S: PolySystem) -> tuple[list[Polynomial], Ring]:
    """The fully quadratic polynomials with every vinegar monomial deleted, over the oil ring."""
    v = S.v
    oil_ring = Ring(S.n - v, S.field, S.ring.quotient)
    out = []
    for q in S.polys[S.e:]:
        terms = {m[v:]: c for m, c in q.terms.items() if not any(m[:v])}
        out.append(Polynomial(terms, oil_ring))
    return out, oil_ring


def mixed_decomposition(S: PolySystem, D: int, parts: bool = False, method: str = "auto") -> MixedDecomposition:
    if S.kind != "mixed" and S.kind != "ov":
        raise NotMixed("mixed_decomposition needs a mixed (or OV) system")
    e = S.e if S.kind == "mixed" else S.m
    if is_ov(S.polys[:e], range(S.v)) is None:
        raise NotMixed(f"the first {e} polynomials are not OV for v={S.v}")
    if S.kind == "ov":
        S = PolySystem(S.polys, S.ring, S.homogeneous, "mixed", S.v, S.m, 0, S.seed, validate=False)
    rp = empirical_hilbert(S, D, method=method)
    qo, oil_ring = oil_part_system(S)
    qo = [f for f in qo if f]
    if qo:
        koqo = empirical_hilbert(qo, D, method=method)
    else:
        koqo = expand(predict_oil_ring(S.n, S.v, S.field), D)
    vqp = rp - koqo
    if any(c < 0 for c in vqp):
        raise IdentityViolation("H_{(V+Q)/P} has a negative coefficient")
    dec = MixedDecomposition(rp, vqp, koqo)
    if parts:
        dec.rf = empirical_hilbert(S.polys[:S.e], D, method=method)
        q = [f for f in S.polys[S.e:] if f]
        dec.rq = (empirical_hilbert(q, D, method=method) if q else
                  TruncatedSeries([S.ring.component_dim(d) for d in range(D + 1)]))
        if any(c < 0 for c in dec.q_over_fq()) or any(c < 0 for c in dec.f_over_fq()):
            raise IdentityViolation("a part series exceeds the whole")
    return dec


def mixed_dreg(S: PolySystem, D: int, vqp: TruncatedSeries | None = None) -> int:
    """Least d with H_{(V+Q)/P}(d) = 0, else its index of regularity."""
    if vqp is None:
        vqp = mixed_decomposition(S, D).vqp
    return ov_dreg(S, D, vqp)


# ---------------------------------------------------------------- further checks

@dataclass
class TRv2Report:
    v: int
    m: int
    degree: int
    expected: int
    raw: int
    computed: dict  # prime -> H_{R/F}(v+2)
    subsets_checked: int

    @property
    def holds(self) -> bool:
        return all(h - self.raw == self.expected for h in self.computed.values())

    def to_dict(self) -> dict:
        return {"v": self.v, "m": self.m, "degree": self.degree, "expected_excess": self.expected,
                "semiregular": self.raw, "computed": {str(p): h for p, h in self.computed.items()},
                "subsets_checked": self.subsets_checked, "holds": self.holds}


def tr_v2_check(S: PolySystem, primes: Sequence[int] = PROXY_PRIMES, check_subsets: bool = True) -> TRv2Report:
    """H_{R/F}(v+2) against the semi-regular coefficient plus binom(m, v+1)."""
    v, m, n = S.v, S.m, S.n
    if not v < m < n:
        raise BadParameters("the relation count needs v < m < n")
    checked = 0
    if check_subsets:
        for sub in combinations(range(m), v):
            delta_relation(S, sub)
            checked += 1
    d = v + 2
    raw = expand(predict_semiregular_char0(n, m), d)[d]
    computed = {}
    for p in primes:
        Sp = S.with_prime(p) if p != S.field.p else S
        computed[p] = empirical_hilbert(Sp, d)[d]
    return TRv2Report(v, m, d, comb(m, v + 1), raw, computed, checked)


@dataclass
class ChainReport:
    d_fall: int | None
    d_reg: int | None
    solv_deg: int | None
    notes: list = field(default_factory=list)

    @property
    def fall_ok(self) -> bool | None:
        if self.d_fall is None or self.d_reg is None:
            return None
        return self.d_fall <= self.d_reg + 1

    @property
    def reg_ok(self) -> bool | None:
        if self.d_reg is None or self.solv_deg is None:
            return None
        return self.d_reg <= self.solv_deg

    @property
    def holds(self) -> bool:
        return self.fall_ok is not False and self.reg_ok is not False

    def to_dict(self) -> dict:
        return {"d_fall": self.d_fall, "d_reg": self.d_reg, "solv_deg": self.solv_deg,
                "d_fall<=d_reg+1": self.fall_ok, "d_reg<=solv_deg": self.reg_ok, "notes": self.notes}


def top_system(S) -> list[Polynomial]:
    """Top-degree parts, read in the graded version of the ring."""
    polys = list(S.polys) if hasattr(S, "polys") else list(S)
    ring = polys[0].ring
    graded = ring.with_quotient("graded") if ring.quotient == "affine" else ring
    return [g for g in (Polynomial(f.top_part().terms, graded) for f in polys if f) if g]


def degree_of_regularity(S, D: int) -> int:
    """Index of regularity of the top-part system."""
    tops = top_system(S)
    h = empirical_hilbert(tops, D)
    return regularity_from_series(h)


def inequality_chain(S, d_max: int, strict: bool = False) -> ChainReport:
    """d_fall <= d_reg + 1 and d_reg <= solv_deg for a quadratic system."""
    rep = ChainReport(None, None, None)
    for name, fn in (("d_fall", lambda: first_fall_degree(S, d_max)),
                     ("d_reg", lambda: degree_of_regularity(S, d_max + 2)),
                     ("solv_deg", lambda: solving_degree(S, d_max))):
        try:
            setattr(rep, name, fn())
        except (NotFoundWithin, InsufficientHeadroom) as exc:
            if strict:
                raise NotFoundWithin(d_max, name) from exc
            rep.notes.append(f"{name}: {exc}")
    return rep


@dataclass
class HFqReport:
    q: int
    delta: int
    full: TruncatedSeries
    dropped: TruncatedSeries
    i_reg: int | None
    mismatches: list

    @property
    def holds_below_ireg(self) -> bool:
        limit = self.i_reg if self.i_reg is not None else self.full.D + 1
        return all(d >= limit for d in self.mismatches)

    @property
    def holds(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict:
        return {"q": self.q, "delta": self.delta, "full": list(self.full), "dropped": list(self.dropped),
                "i_reg": self.i_reg, "mismatches": self.mismatches,
                "holds_below_ireg": self.holds_below_ireg}


def hfq_decomposition_check(S, D: int) -> HFqReport:
    """H_{R/F'}(d) against sum_{i<q} H_{R/F}(d - i delta), F' = F without its last generator."""
    polys = [f for f in (S.polys if hasattr(S, "polys") else S)]
    ring = S.ring if hasattr(S, "ring") else polys[0].ring
    q = ring.p
    ambient = TruncatedSeries([ring.component_dim(d) for d in range(D + 1)])
    if not polys:
        return HFqReport(q, 0, ambient, ambient, None, [])
    delta = polys[-1].degree()
    full = empirical_hilbert(polys, D)
    rest = polys[:-1]
    dropped = empirical_hilbert(rest, D) if rest else ambient
    mismatches = [d for d in range(D + 1)
                  if dropped[d] != sum(full.get(d - i * delta) for i in range(q) if d - i * delta >= 0)]
    try:
        i_reg = regularity_from_series(full)
    except InsufficientHeadroom:
        i_reg = None
    return HFqReport(q, delta, full, dropped, i_reg, mismatches)


# ---------------------------------------------------------------- report

@dataclass
class InvariantReport:
    summary: dict
    hilbert: TruncatedSeries | None = None
    predicted: TruncatedSeries | None = None
    branch: str | None = None
    vf: TruncatedSeries | None = None
    oil: TruncatedSeries | None = None
    d_reg: int | None = None
    i_reg: int | None = None
    d_fall: int | None = None
    solv_deg: int | None = None
    dim: int | None = None
    triv: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def failed(self) -> list[str]:
        return [k for k, ok in self.flags.items() if ok is False and k in _ASSERTED]

    def to_dict(self) -> dict:
        def ser(s):
            return list(s) if s is not None else None
        return {
            "summary": self.summary, "hilbert": ser(self.hilbert), "predicted": ser(self.predicted),
            "branch": self.branch, "vf": ser(self.vf), "oil": ser(self.oil),
            "d_reg": self.d_reg, "i_reg": self.i_reg, "d_fall": self.d_fall,
            "solv_deg": self.solv_deg, "dim": self.dim, "triv": self.triv,
            "flags": self.flags, "checks": self.checks, "notes": self.notes,
        }


# flags whose failure means a broken identity rather than a non-generic system
_ASSERTED = {"ov_identity", "mixed_identity", "chain", "delta", "trv2"}


def _try(rep: InvariantReport, name: str, fn):
    try:
        return fn()
    except OvalgError as exc:
        rep.notes.append(f"{name}: {exc}")
        return None


def analyze(S: PolySystem, D: int | None = None, d_max: int = 6,
            checks: Sequence[str] = ()) -> InvariantReport:
    """Compute every applicable invariant of a system and run the requested checks.

    ``checks`` may contain ``ov``, ``mixed``, ``hfq``, ``chain``, ``trv2`` and ``delta``.
    """
    n, m = S.n, S.m
    D = D if D is not None else max(2 * n, 8)
    F = S.field
    rep = InvariantReport({"n": n, "m": m, "kind": S.kind_label(), "field": F.describe(),
                           "quotient": S.ring.quotient, "homogeneous": S.homogeneous,
                           "D": D, "d_max": d_max})
    if F.char0_proxy:
        rep.notes.append(f"characteristic 0 simulated modulo p={F.p}")
    polys = [f for f in S.polys if f]
    tops = top_system(S) if polys else []
    if tops:
        h = _try(rep, "hilbert", lambda: empirical_hilbert(tops, D))
    else:
        h = TruncatedSeries([S.ring.component_dim(d) for d in range(D + 1)])
    rep.hilbert = h
    if F.field_equations:
        rep.predicted = bracket(expand(predict_semiregular_fq(n, len(tops), F.p), D))
        rep.branch = f"GF({F.p}) semi-regular"
    elif S.kind == "ov" and S.homogeneous:
        rep.predicted, rep.branch = predict_ov_semiregular(n, S.v, m, D)
        if rep.branch == "m<=v":
            rep.predicted = bracket(rep.predicted)
    else:
        rep.predicted = bracket(expand(predict_semiregular_char0(n, len(tops)), D))
        rep.branch = "semi-regular"
    if h is not None:
        rep.flags["semiregular_match"] = list(h) == list(rep.predicted)
        rep.dim = _try(rep, "dim", lambda: krull_dimension(tops, d_max)) if tops else n
        dim = rep.dim if rep.dim is not None and rep.dim >= 0 else _try(rep, "dim", lambda: estimate_dimension(h))
        if dim is not None:
            rep.i_reg = _try(rep, "i_reg", lambda: index_of_regularity(h, dim))
        # the semi-regularity condition refers to i_reg of the system it defines;
        # the regularity index of the predicted series stands in for it
        rep.checks["semiregular"] = {"match": rep.flags["semiregular_match"], "circular_definition": True,
                                     "i_reg_predicted": _try(rep, "i_reg_predicted",
                                                             lambda: regularity_from_series(rep.predicted))}
        if S.kind == "ov" and S.ring.quotient == "free" and rep.dim is not None and rep.dim >= 0:
            # the oil subspace lies in the variety, so height <= v
            rep.flags["height_bound"] = rep.dim >= n - S.v
    rep.triv = triv_table(n, len(tops), D, F if F.field_equations else None)
    if polys:
        rep.d_fall = _try(rep, "d_fall", lambda: first_fall_degree(S, d_max))
        rep.solv_deg = _try(rep, "solv_deg", lambda: solving_degree(S, d_max))
    if S.kind == "ov" and S.homogeneous and h is not None:
        rep.oil = expand(predict_oil_ring(n, S.v, F), D)
        rep.vf = h - rep.oil
        rep.d_reg = _try(rep, "d_reg", lambda: ov_dreg(S, D, rep.vf))
    elif S.kind == "mixed" and S.homogeneous:
        dec = _try(rep, "mixed", lambda: mixed_decomposition(S, D, parts="mixed" in checks))
        if dec is not None:
            rep.vf, rep.oil = dec.vqp, dec.koqo
            rep.d_reg = _try(rep, "d_reg", lambda: mixed_dreg(S, D, dec.vqp))
            rep.flags["mixed_identity"] = True
            if dec.rf is not None:
                rep.checks["mixed"] = {"q_over_fq": list(dec.q_over_fq()), "f_over_fq": list(dec.f_over_fq())}
        else:
            rep.flags["mixed_identity"] = False
    elif h is not None and tops:
        rep.d_reg = rep.i_reg
    if "ov" in checks:
        try:
            dec = ov_decomposition(S, min(D, 8), independent=True)
            rep.flags["ov_identity"] = True
            rep.checks["ov"] = {"rf": list(dec.rf), "ko": list(dec.ko), "vf": list(dec.vf)}
        except IdentityViolation as exc:
            rep.flags["ov_identity"] = False
            rep.notes.append(str(exc))
        except OvalgError as exc:
            rep.notes.append(f"ov: {exc}")
    if "chain" in checks and polys:
        chain = inequality_chain(S, d_max)
        rep.checks["chain"] = chain.to_dict()
        rep.flags["chain"] = chain.holds
    if "hfq" in checks and polys:
        r = _try(rep, "hfq", lambda: hfq_decomposition_check(tops, min(D, 8)))
        if r is not None:
            rep.checks["hfq"] = r.to_dict()
            rep.flags["hfq_below_ireg"] = r.holds_below_ireg
    if "trv2" in checks:
        r = _try(rep, "trv2", lambda: tr_v2_check(S))
        if r is not None:
            rep.checks["trv2"] = r.to_dict()
            rep.flags["trv2"] = r.holds
    if "delta" in checks and S.kind == "ov":
        ok = True
        rows = []
        for sub in combinations(range(m), S.v):
            try:
                rel = delta_relation(S, sub)
            except SingularSubset:
                rows.append({"subset": list(sub), "singular": True})
                continue
            good = delta_multiples_in_ideal(S, rel)
            ok = ok and good
            rows.append({"subset": list(sub), "delta": str(rel.delta), "in_ideal": good})
        rep.checks["delta"] = rows
        rep.flags["delta"] = ok
    return rep
