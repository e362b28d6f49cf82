"""Worked examples and checkable claims, reproduced row by row.

Systems given with explicit coefficients are embedded verbatim. Systems given
only by their parameters are regenerated from seeds, and the rows accept the
generic value with a stated agreement rate.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from math import comb
from typing import Callable

import numpy as np

from .ffield import FieldSpec
from .invariants import (delta_multiples_in_ideal, delta_relation, hfq_decomposition_check,
                         index_of_regularity, inequality_chain, krull_dimension, mixed_decomposition,
                         mixed_dreg, ov_decomposition, ov_dreg, tr_v2_check, triv_count, verify_delta,
                         vinegar_quadratics)
from .macaulay import (build_macaulay, empirical_hilbert, first_fall_degree, groebner_check,
                       kernel_dim_at_degree, rref_polynomials, solving_degree)
from .polyring import Polynomial, Ring
from .series import (RationalGF, bracket, expand, ipoly_pow, predict_ov_hfg, predict_semiregular_char0,
                     predict_semiregular_fq)
from .sysgen import (LinearTransform, PolySystem, apply_transform, gen_full, gen_mixed, gen_ov, is_ov,
                     parse_system, search_ov_transform)


@dataclass
class Row:
    criterion: int
    claim: str
    expected: object
    computed: object
    passed: bool
    note: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        text = f"[{verdict}] C{self.criterion} {self.claim}: expected {self.expected}, computed {self.computed}"
        return text + (f" ({self.note})" if self.note else "")

    def to_dict(self) -> dict:
        return {"criterion": self.criterion, "claim": self.claim, "expected": _plain(self.expected),
                "computed": _plain(self.computed), "passed": self.passed, "note": self.note}


def _plain(x):
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (bool, int, float, str)) or x is None:
        return x
    return str(x)


# ---------------------------------------------------------------- embedded systems

EXA_MM = """ring GF(2) vars 3
kind full
homogeneous false
x1^2 + x1*x2 + x2^2 + x1*x3 + x1 + x2 + x3
x1^2 + x2^2 + x2*x3 + x3^2 + x1 + 1
x1^2 + x2^2 + x1*x3 + x1 + x2 + 1
x1^2 + x2^2 + x3^2 + x1 + x2 + x3
"""
EXA_MM_NAMES = ("x", "y", "z")

# the reference M_<=3, rows 1*f1..1*f4, z*f1, y*f1, x*f1, z*f2, ...
EXA_MM_M3 = """
00000000001111001110
00000000001010111001
00000000001011001101
00000000001010011110
00001111000001110000
01110100000110100000
11101000001101000000
00001010110001000010
01010010100100000100
10100101001000001000
00001011000001100010
01010100000110000100
10101000001100001000
00001010010001110000
01010000100110100000
10100001001101000000
"""

EXA_MM_RREF3 = [
    "x^3 + z^3 + z^2 + 1", "x^2*y + z^2 + 1", "x*y^2 + z + 1", "y^3",
    "x^2*z + z^3 + z + 1", "x*y*z + z^2 + z", "y^2*z + z + 1", "x*z^2 + z^3 + z^2 + z",
    "y*z^2 + z^2 + 1", "x^2 + z^2", "x*y + z + 1", "y^2",
    "x*z + z^2 + z + 1", "y*z + z + 1", "x + z", "y",
]

SEC42 = """ring GF(2) vars 4
kind full
homogeneous true
x2*x3 + x2*x4 + x3*x4 + x4^2
x1^2 + x1*x2 + x1*x4 + x2*x4
x2*x3 + x1*x4
x2*x3 + x2*x4
"""
# x1 = y2 + y3, x2 = y3, x3 = y1 + y4, x4 = y4
SEC42_TRANSFORM = [[0, 1, 1, 0], [0, 0, 1, 0], [1, 0, 0, 1], [0, 0, 0, 1]]
SEC42_IMAGE = ["x1*x3 + x1*x4", "x2^2 + x2*x3 + x2*x4", "x1*x3 + x2*x4", "x1*x3"]

MIXED1 = dict(n=10, v=3, e=6, u=6)
MIXED1_KOQO = [1, 7, 22, 42, 57, 63, 64, 64]
MIXED2 = dict(n=10, v=3, e=6, u=4)
MIXED2_VQP = [0, 3, 21, 64, 106, 99, 51, 10, 1, 1]


def exa_mm():
    S = parse_system(EXA_MM)
    ring = Ring(3, S.field, S.ring.quotient, EXA_MM_NAMES)
    return S.in_ring(ring)


def exa_mm_m3() -> np.ndarray:
    return np.array([[int(c) for c in line] for line in EXA_MM_M3.split()], dtype=np.int64)


def sec42():
    return parse_system(SEC42)


# ---------------------------------------------------------------- criteria

def criterion1() -> list[Row]:
    a = list(expand(RationalGF(ipoly_pow([1, 1], 8), [1, 0, 1]), 6))
    b = list(expand(RationalGF(ipoly_pow([1, 1], 10), ipoly_pow([1, 0, 1], 13)), 4))
    ea, eb = [1, 8, 27, 48, 43, 8, -15], [1, 10, 32, -10, -284]
    return [Row(1, "(1+t)^8/(1+t^2) to degree 6", ea, a, a == ea),
            Row(1, "(1+t)^10/(1+t^2)^13 to degree 4", eb, b, b == eb)]


def criterion2(seeds: int = 10) -> list[Row]:
    F = FieldSpec(2, True)
    t0 = time.time()
    hs, ks = [], []
    for s in range(seeds):
        S = gen_full(8, 1, F, seed=s)
        h = empirical_hilbert(S, 6)
        if h[2] != 27:
            continue  # degenerate f
        hs.append(tuple(h[2:7]))
        ks.append(tuple(kernel_dim_at_degree(S, d) for d in (4, 5, 6)))
    elapsed = time.time() - t0
    h_major = list(Counter(hs).most_common(1)[0][0])
    k_major = list(Counter(ks).most_common(1)[0][0])
    triv = [triv_count(8, 1, d, F) for d in (4, 5, 6)]
    return [
        Row(2, "H(2..5) of one GF(2) quadratic, n=8", [27, 48, 43, 8], h_major[:4], h_major[:4] == [27, 48, 43, 8],
            f"{len(hs)} generic seeds"),
        Row(2, "H(6) = 0", 0, h_major[4], h_major[4] == 0),
        Row(2, "kernel at d=4,5,6 equals triv_count", triv, k_major, k_major == triv),
        Row(2, "runtime under 5 s", "< 5 s", f"{elapsed:.2f} s", elapsed < 5),
    ]


def criterion3() -> list[Row]:
    S = exa_mm()
    M = build_macaulay(S, 3, "aff")
    golden = exa_mm_m3()
    rows = [Row(3, "M_<=3 equals the reference 16x20 matrix", "16x20 equal", f"{M.shape[0]}x{M.shape[1]}",
                M.entries.shape == golden.shape and bool((M.entries == golden).all()))]
    polys = [str(f) for f in M.rows_to_polynomials()]
    expected = [str(S.ring.parse(t)) for t in EXA_MM_RREF3]
    rows.append(Row(3, "rref(M_<=3) polynomials", len(expected), len(polys), sorted(polys) == sorted(expected)))
    res = groebner_check(M.rows_to_polynomials())
    pair = tuple(str(f) for f in res.pair_polys) if res.pair_polys else None
    rows.append(Row(3, "Groebner witness", ("y*z + z + 1", "y", "z + 1"),
                    (pair[0], pair[1], str(res.remainder)) if pair else None,
                    not res.is_basis and pair == ("y*z + z + 1", "y") and str(res.remainder) == "z + 1"))
    sd = solving_degree(S, 6)
    rows.append(Row(3, "solving degree", 4, sd, sd == 4))
    ff = first_fall_degree(S, 6)
    rows.append(Row(3, "first fall degree", 3, ff, ff == 3))
    last = {str(f) for f in rref_polynomials(S, 4)}
    want = {"x + 1", "y", "z + 1"}
    rows.append(Row(3, "rref(M_<=4) contains x+1, y, z+1", sorted(want), sorted(want & last), want <= last))
    return rows


def _ov_params(rng: np.random.Generator, q2: bool):
    n = int(rng.integers(4, 11)) if q2 else int(rng.integers(3, 7))
    v = int(rng.integers(1, min(4, n - 1) + 1))
    m = int(rng.integers(1, 15))
    return n, v, m


def criterion4(count: int = 100, D: int = 8) -> list[Row]:
    rng = np.random.default_rng(4)
    bad = []
    for k in range(count):
        q2 = k < count // 2
        n, v, m = _ov_params(rng, q2)
        F = FieldSpec(2, True) if q2 else FieldSpec.char0()
        S = gen_ov(n, v, m, F, seed=1000 + k)
        try:
            ov_decomposition(S, D, independent=True)
        except AssertionError:
            bad.append((n, v, m, F.p))
    return [Row(4, f"H_R/F = H_Ko + H_V/F for d <= {D}, {count} OV systems", 0, len(bad), not bad,
                f"violations {bad[:3]}" if bad else "GF(2) and proxy, n <= 10")]


F2_SERIES = [1, 9, 33, 57, 127, 253, 463]


def criterion5(seeds: int = 50, D: int = 5) -> list[Row]:
    C = FieldSpec.char0()
    values = Counter()
    prefix_ok = True
    hfg = predict_ov_hfg(9, 3, 12, 2)
    for s in range(seeds):
        S = gen_ov(9, 3, 12, C, seed=s)
        dec = ov_decomposition(S, D)
        values[ov_dreg(S, D, dec.vf)] += 1
        prefix_ok &= list(dec.vf[1:3]) == [3, 12] == list(hfg[1:3])
    seen = sorted(values)
    # a system whose rows never reach the vinegar monomial x1*x9^2 keeps H_V/F(d) >= 1
    S = gen_ov(9, 3, 12, C, seed=1)
    gap = (1, 0, 0, 0, 0, 0, 0, 0, 1)
    T = PolySystem([Polynomial({k: c for k, c in f.terms.items() if k != gap}, S.ring) for f in S.polys],
                   S.ring, True, "ov", v=3)
    dec = ov_decomposition(T, 6)
    gap_dreg = ov_dreg(T, 6, dec.vf)
    return [Row(5, "d_reg in {3,4} for every seed", "{3,4}", dict(values), set(seen) <= {3, 4}),
            Row(5, "both 3 and 4 observed", [3, 4], seen, seen == [3, 4], f"{seeds} seeds"),
            Row(5, "H_V/F(1..2) = 3, 12 as predicted", [3, 12], list(hfg[1:3]), prefix_ok),
            Row(5, "x1*x9 removed: H_R/F and d_reg", (F2_SERIES, 3), (list(dec.rf), gap_dreg),
                list(dec.rf) == F2_SERIES and gap_dreg == 3, "constructed, not a random seed")]


CRIT6_CASES = [(5, 1, 5), (6, 2, 6), (6, 2, 8), (7, 2, 7), (7, 3, 9), (8, 3, 8), (8, 2, 11),
               (9, 3, 9), (9, 3, 12), (9, 4, 10), (10, 4, 10), (10, 2, 12)]


def criterion6(cases=CRIT6_CASES, seeds: int = 2) -> list[Row]:
    C = FieldSpec.char0()
    over, exact, witness = [], [], []
    for n, v, m in cases:
        for s in range(seeds):
            S = gen_ov(n, v, m, C, seed=97 * n + 13 * v + m + 1000 * s)
            dec = ov_decomposition(S, v + 2)
            d = ov_dreg(S, v + 2, dec.vf)
            over.append(d <= v + 1)
            if m == n:
                exact.append(d == v + 1)
                witness.append(dec.vf[v] == comb(n - 1, v - 1))
    return [Row(6, "d_reg <= v+1 for m >= n", len(over), sum(over), all(over)),
            Row(6, "d_reg = v+1 for m = n", len(exact), sum(exact), all(exact)),
            Row(6, "H_V/F(v) = binom(n-1, v-1) for m = n", len(witness), sum(witness), all(witness))]


CRIT7_CASES = [(6, 2, 3), (7, 3, 4), (8, 2, 5), (8, 3, 5), (7, 1, 3)]


def criterion7(cases=CRIT7_CASES) -> list[Row]:
    C = FieldSpec.char0()
    deg_ok = member_ok = verify_ok = True
    checked = 0
    trv2 = []
    for k, (n, v, m) in enumerate(cases):
        S = gen_ov(n, v, m, C, seed=700 + k)
        for sub in _subsets(m, v, 3):
            rel = delta_relation(S, sub)
            checked += 1
            deg_ok &= rel.delta.degree() == v and rel.decomposition_holds(S)
            member_ok &= delta_multiples_in_ideal(S, rel)
            verify_ok &= all(verify_delta(S, rel, g) for g in vinegar_quadratics(S))
        if v < m < n:
            r = tr_v2_check(S)
            trv2.append(r.holds)
    return [Row(7, "deg Delta = v and f_i = sum x_j A_ij", checked, checked if deg_ok else "mismatch", deg_ok),
            Row(7, "x_i * Delta in the subset ideal", checked, checked if member_ok else "mismatch", member_ok),
            Row(7, "Delta * g in the ideal for g spanning V_2", checked, checked if verify_ok else "mismatch",
                verify_ok),
            Row(7, "H(v+2) = semiregular(v+2) + binom(m, v+1) over 3 primes", len(trv2), sum(trv2), all(trv2))]


def _subsets(m: int, v: int, limit: int):
    from itertools import combinations
    out = list(combinations(range(m), v))
    return out[:limit]


def criterion8(seeds1: int = 10, seeds2: int = 5) -> list[Row]:
    C = FieldSpec.char0()
    koqo_hits = dreg1_hits = 0
    for s in range(seeds1):
        S = gen_mixed(**MIXED1, F=C, seed=s)
        dec = mixed_decomposition(S, 7)
        koqo_hits += list(dec.koqo) == MIXED1_KOQO
        dreg1_hits += mixed_dreg(S, 7, dec.vqp) == 5
    dreg2_hits = vqp_hits = excess_hits = 0
    observed = Counter()
    for s in range(seeds2):
        S = gen_mixed(**MIXED2, F=C, seed=s)
        dec = mixed_decomposition(S, 9)
        observed[tuple(dec.vqp)] += 1
        dreg2_hits += mixed_dreg(S, 9, dec.vqp) == 8
        vqp_hits += list(dec.vqp) == MIXED2_VQP
        raw = expand(predict_semiregular_char0(10, 10), 5)[5]
        excess_hits += dec.rp[5] - raw == comb(6, 4)
    common = list(observed.most_common(1)[0][0])

    def rate(h, k):
        return h / k >= 0.9

    return [
        Row(8, "example 1: H_Ko/Qo", MIXED1_KOQO, f"{koqo_hits}/{seeds1} seeds", rate(koqo_hits, seeds1)),
        Row(8, "example 1: d_reg = 5", 5, f"{dreg1_hits}/{seeds1} seeds", rate(dreg1_hits, seeds1)),
        Row(8, "example 2: d_reg = 8", 8, f"{dreg2_hits}/{seeds2} seeds", rate(dreg2_hits, seeds2)),
        Row(8, "example 2: H_(V+Q)/P", MIXED2_VQP, common, rate(vqp_hits, seeds2),
            f"{vqp_hits}/{seeds2} seeds match"),
        Row(8, "example 2: excess binom(6,4) = 15 at degree 5", 15, f"{excess_hits}/{seeds2} seeds",
            excess_hits == seeds2),
    ]


def criterion9() -> list[Row]:
    S = sec42()
    dim = krull_dimension(S, 8)
    h = list(empirical_hilbert(S, 8))
    want = [1, 4] + [k + 4 for k in range(2, 9)]
    ireg = index_of_regularity(empirical_hilbert(S, 8), 2)
    T = LinearTransform(SEC42_TRANSFORM, S.field)
    image = apply_transform(S, T)
    image_ok = [str(f) for f in image.polys] == [str(S.ring.parse(t)) for t in SEC42_IMAGE]
    found = search_ov_transform(S, 2)
    found_ok = found is not None and is_ov(apply_transform(S, found), range(2)) is not None
    return [Row(9, "Krull dimension", 2, dim, dim == 2),
            Row(9, "Hilbert series to degree 8", want, h, h == want),
            Row(9, "index of regularity", 2, ireg, ireg == 2),
            Row(9, "substitution gives the OV system in y1, y2", SEC42_IMAGE,
                [str(f) for f in image.polys], image_ok and is_ov(image, range(2)) is not None),
            Row(9, "OV transform search with v = 2", "found", "found" if found_ok else "none", found_ok)]


def _counts(c: Counter) -> dict:
    return {k: c[k] for k in sorted(c)}


def criterion10(chain_seeds: int = 50, ov_seeds: int = 20) -> list[Row]:
    F = FieldSpec(2, True)
    rng = np.random.default_rng(10)
    viol = []
    undecided = 0
    for s in range(chain_seeds):
        n = int(rng.integers(3, 9))
        m = n + int(rng.integers(0, 4))
        S = gen_full(n, m, F, homogeneous=False, seed=5000 + s)
        rep = inequality_chain(S, 8)
        if None in (rep.d_fall, rep.d_reg, rep.solv_deg):
            undecided += 1
        if not rep.holds:
            viol.append((n, m, rep.d_fall, rep.d_reg, rep.solv_deg))
    within = {"gf2": 0, "char0": 0}
    excess = {"gf2": Counter(), "char0": Counter()}
    for s in range(ov_seeds):
        n = int(rng.integers(4, 8))
        v = int(rng.integers(1, 4))
        for key, field_ in (("gf2", F), ("char0", FieldSpec.char0())):
            S = gen_ov(n, v, n + 1, field_, homogeneous=False, seed=6000 + s)
            sd = solving_degree(S, 8)
            within[key] += sd <= v + 1
            excess[key][sd - (v + 1)] += 1
    return [Row(10, "d_fall <= d_reg + 1 and d_reg <= solv_deg", chain_seeds, chain_seeds - len(viol),
                not viol and not undecided, f"violations {viol[:3]}, undecided {undecided}"),
            Row(10, "NH-OV m = n+1 over GF(2): solv_deg <= v+1", ov_seeds, within["gf2"],
                within["gf2"] == ov_seeds, f"empirical support; solv_deg - (v+1) counts {_counts(excess['gf2'])}"),
            Row(10, "NH-OV m = n+1 over the char0 proxy: solv_deg <= v+1", ov_seeds, within["char0"],
                within["char0"] == ov_seeds,
                f"empirical support; solv_deg - (v+1) counts {_counts(excess['char0'])}")]


def _macaulay_series(polys, D):
    return empirical_hilbert(polys, D, method="macaulay")


def criterion11(oracle: Callable | None = None, D: int = 6) -> list[Row]:
    """Splitting check for q in {2, 3}.

    ``oracle(polys, D)`` supplies series computed another way; by default the
    plain Macaulay ranks, tests pass a normal-form enumeration.
    """
    oracle = oracle or _macaulay_series
    rows = []
    for q in (2, 3):
        F = FieldSpec(q, True)
        ok_split = ok_oracle = True
        cases = 0
        skipped = 0
        vacuous = []
        for n in (2, 3, 4, 5):
            for m in (1, 2):
                predicted = list(bracket(expand(predict_semiregular_fq(n, m, q), D)))
                for s in range(50):
                    S = gen_full(n, m, F, seed=1000 * s + 100 * q + 10 * n + m)
                    rep = hfq_decomposition_check(S, D)
                    ok_oracle &= list(rep.full) == list(oracle(S.polys, D))
                    if list(rep.full) == predicted:
                        break
                    skipped += 1
                else:
                    # no semi-regular instance: nothing to check
                    vacuous.append((n, m))
                    continue
                cases += 1
                ok_split &= rep.holds_below_ireg
                if m > 1:
                    ok_oracle &= list(rep.dropped) == list(oracle(S.polys[:-1], D))
        rows.append(Row(11, f"GF({q}): H_R/F' = sum H_R/F(d - i delta) below i_reg", cases,
                        cases if ok_split else "mismatch", ok_split and cases > 0,
                        f"semi-regular instances only; {skipped} other draws skipped; "
                        f"no semi-regular instance for (n, m) in {vacuous}"))
        rows.append(Row(11, f"GF({q}): series equal the independent oracle for d <= {D}", "equal",
                        "equal" if ok_oracle else "mismatch", ok_oracle))
    return rows


CRITERIA = {1: criterion1, 2: criterion2, 3: criterion3, 4: criterion4, 5: criterion5, 6: criterion6,
            7: criterion7, 8: criterion8, 9: criterion9, 10: criterion10, 11: criterion11}

QUICK = {4: dict(count=20), 5: dict(seeds=10), 8: dict(seeds1=3, seeds2=1), 10: dict(chain_seeds=10, ov_seeds=5)}


def _run_one(args):
    k, quick = args
    kwargs = QUICK.get(k, {}) if quick else {}
    return CRITERIA[k](**kwargs)


def run_all(which=None, quick: bool = False, jobs: int = 1) -> list[Row]:
    """Run the selected criteria (all by default); rows keep criterion order."""
    tasks = [(k, quick) for k in sorted(which or CRITERIA)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_run_one, tasks))
    else:
        parts = [_run_one(t) for t in tasks]
    return [r for part in parts for r in part]
