from math import comb

import numpy as np
import pytest

from ovalg import macaulay
from ovalg.errors import BudgetExceeded, DegreeTooSmall, NotFoundWithin
from ovalg.ffield import FieldSpec
from ovalg.macaulay import (build_macaulay, degree_fall_rows, empirical_hilbert, first_fall_degree,
                            groebner_check, kernel_dim_at_degree, rank_at_degree, read_macaulay_csv,
                            rref_polynomials, solving_degree)
from ovalg.polyring import Polynomial, Ring, grevlex_key
from ovalg.sysgen import gen_full, gen_ov

from oracles import buchberger, normal_form_hilbert, rank_mod_p


def dicts(polys):
    return [dict(f.terms) for f in polys]


def test_hom_matrix_shape_and_rank():
    S = gen_full(4, 3, FieldSpec(7), seed=1)
    for d in (2, 3, 4):
        M = build_macaulay(S, d)
        assert M.shape == (3 * comb(4 + d - 3, d - 2), comb(4 + d - 1, d))
        assert M.rank() == rank_mod_p(M.entries.tolist(), 7) == rank_at_degree(S, d)
        assert kernel_dim_at_degree(S, d) == M.shape[0] - M.rank()
        keys = [grevlex_key(c) for c in M.columns]
        assert keys == sorted(keys, reverse=True)


def test_aff_matrix_columns_descend_by_degree():
    S = gen_full(3, 2, FieldSpec(2, True), homogeneous=False, seed=4)
    M = build_macaulay(S, 3, "aff")
    degs = [sum(c) for c in M.columns]
    assert degs == sorted(degs, reverse=True)
    assert all(max(c) <= 1 for c in M.columns)
    assert M.rank() == rank_mod_p(M.entries.tolist(), 2)


def test_csv_roundtrip(tmp_path):
    S = gen_ov(4, 2, 2, FieldSpec(5), seed=2)
    M = build_macaulay(S, 3)
    path = tmp_path / "m.csv"
    M.write_csv(str(path))
    cols, rows, A = read_macaulay_csv(str(path))
    assert cols == M.column_labels() and rows == M.row_labels()
    assert (A == M.entries).all()
    assert rows[0].endswith("*f1")


def test_errors_and_budget():
    S = gen_full(5, 2, FieldSpec(3), seed=0)
    with pytest.raises(DegreeTooSmall):
        build_macaulay(S, 1)
    with pytest.raises(BudgetExceeded):
        build_macaulay(S, 4, max_entries=100)
    old = macaulay.max_entries()
    try:
        macaulay.set_max_entries(10)
        with pytest.raises(BudgetExceeded):
            rank_at_degree(S, 3)
    finally:
        macaulay.set_max_entries(old)


@pytest.mark.parametrize("p,fe,n,m,seed", [(7, False, 4, 3, 0), (2, True, 5, 3, 1), (3, True, 4, 2, 2),
                                           (11, False, 5, 2, 3), (2, True, 6, 6, 4)])
def test_hilbert_matches_normal_form_oracle(p, fe, n, m, seed):
    S = gen_full(n, m, FieldSpec(p, fe), seed=seed)
    D = 6
    ref = normal_form_hilbert(dicts(S.polys), n, p, D, q=p if fe else None)
    for method in ("macaulay", "extension", "auto"):
        assert list(empirical_hilbert(S, D, method=method)) == ref


def test_hilbert_of_ov_system_char0_proxy_methods_agree():
    S = gen_ov(7, 2, 7, FieldSpec.char0(), seed=9)
    a = empirical_hilbert(S, 6, method="macaulay")
    b = empirical_hilbert(S, 6, method="extension")
    assert list(a) == list(b)


def test_groebner_check_against_buchberger():
    F = FieldSpec(5)
    R = Ring(3, F)
    polys = [R.parse("x1^2 + 2*x2*x3"), R.parse("x1*x2 + x3^2"), R.parse("x2^2 - x1*x3")]
    res = groebner_check(polys)
    G = buchberger(dicts(polys), 5)
    expected_basis = len(G) == len(polys)
    assert bool(res) == expected_basis
    if not res:
        assert res.failing_pair is not None and res.remainder
    gb = [Polynomial(g, R) for g in G]
    assert groebner_check(gb)


def test_solving_degree_rows_form_a_basis():
    S = gen_full(4, 5, FieldSpec(2, True), homogeneous=False, seed=6)
    d = solving_degree(S, 6)
    assert groebner_check(rref_polynomials(S, d))
    if d > 2:
        assert not groebner_check(rref_polynomials(S, d - 1))
    with pytest.raises(NotFoundWithin):
        solving_degree(S, d - 1, start=2) if d > 2 else (_ for _ in ()).throw(NotFoundWithin(1))


def test_first_fall_degree_has_falling_rows():
    S = gen_full(5, 5, FieldSpec(2, True), homogeneous=False, seed=3)
    d = first_fall_degree(S, 6)
    assert degree_fall_rows(S, d)
    assert all(f.degree() < d for f in degree_fall_rows(S, d))


def test_gf2_degree4_matrix_of_thirteen_quadrics():
    # 13 * binom(10, 2) rows over binom(10, 4) columns; the rank is capped by the columns
    S = gen_full(10, 13, FieldSpec(2, True), seed=0)
    M = build_macaulay(S, 4)
    assert M.shape == (585, 210)
    assert M.rank() == 210
