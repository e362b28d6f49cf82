import json
from math import comb

import pytest

from ovalg.errors import BadParameters, InsufficientHeadroom, NotOV, SingularSubset
from ovalg.ffield import FieldSpec
from ovalg.invariants import (analyze, delta_multiples_in_ideal, delta_relation, estimate_dimension,
                              hfq_decomposition_check, in_ideal, index_of_regularity, inequality_chain,
                              krull_dimension, mixed_decomposition, mixed_dreg, oil_part_system,
                              ov_decomposition, ov_dreg, poly_det, triv_count, verify_delta,
                              vinegar_decomposition, vinegar_quadratics)
from ovalg.macaulay import empirical_hilbert, kernel_dim_at_degree
from ovalg.polyring import Ring
from ovalg.series import TruncatedSeries, expand, predict_oil_ring
from ovalg.sysgen import PolySystem, gen_full, gen_mixed, gen_ov

from oracles import buchberger, normal_form_hilbert, reduce

P0 = FieldSpec.char0()


def test_triv_count_matches_generic_kernels():
    # below the first fall degree every kernel vector is trivial
    for n, m in [(8, 2), (9, 3)]:
        S = gen_full(n, m, P0, seed=n + m)
        for d in (4, 5):
            assert triv_count(n, m, d, P0) == kernel_dim_at_degree(S, d)
    GF2 = FieldSpec(2, True)
    S = gen_full(8, 2, GF2, seed=1)
    assert triv_count(8, 2, 4, GF2) == comb(2, 2) + 2 == kernel_dim_at_degree(S, 4)
    assert triv_count(8, 2, 3, GF2) == 0


def test_delta_relation_against_buchberger():
    F = FieldSpec(101)
    S = gen_ov(6, 2, 3, F, seed=5)
    rel = delta_relation(S, (0, 1))
    assert rel.v == 2 and rel.delta.degree() == 2 and rel.decomposition_holds(S)
    assert delta_multiples_in_ideal(S, rel)
    gens = [dict(S.polys[i].terms) for i in rel.subset]
    G = buchberger(gens, 101, max_degree=4)
    for i in range(2):
        assert not reduce(dict((S.ring.var(i) * rel.delta).terms), G, 101)
    for g in vinegar_quadratics(S)[:4]:
        assert verify_delta(S, rel, g)
        assert not reduce(dict((rel.delta * g).terms), G, 101)


def test_delta_errors_and_det():
    R = Ring(3, FieldSpec(7))
    x1, x2, x3 = R.gens()
    assert poly_det([[x1, x2], [x3, x1]], R) == x1 * x1 - x2 * x3
    S = PolySystem([x1 * x3, x1 * x3 * 2], R, kind="ov", v=1)
    with pytest.raises(BadParameters):
        delta_relation(S, (0, 1))
    S2 = PolySystem([x1 * x2 * 0 + x1 * x3, x1 * x3 * 3], R, kind="ov", v=2)
    with pytest.raises(SingularSubset):
        delta_relation(S2, (0, 1))
    with pytest.raises(NotOV):
        vinegar_decomposition(x3 * x3, 1)


def test_in_ideal():
    R = Ring(3, FieldSpec(5))
    x1, x2, x3 = R.gens()
    assert in_ideal([x1 * x2], x1 * x2 * x3)
    assert not in_ideal([x1 * x2], x1 * x3 * x3)


def test_krull_dimension_known_ideals():
    R = Ring(3, FieldSpec(5))
    x1, x2, x3 = R.gens()
    assert krull_dimension([x1 * x1, x1 * x2]) == 2
    assert krull_dimension([x1 * x2, x2 * x3, x1 * x3]) == 1
    assert krull_dimension([x1 * x1, x2 * x2, x3 * x3]) == 0
    Rg = Ring(4, FieldSpec(2, True), "graded")
    assert krull_dimension(PolySystem([], Rg)) == 0


def test_index_of_regularity():
    h = TruncatedSeries([1, 4, 6, 7, 8, 9, 10, 11, 12])
    assert estimate_dimension(h) == 2
    assert index_of_regularity(h, 2) == 2
    z = TruncatedSeries([1, 3, 3, 1, 0, 0])
    assert estimate_dimension(z) == 0 and index_of_regularity(z, 0) == 4
    with pytest.raises(InsufficientHeadroom):
        index_of_regularity(TruncatedSeries([1, 3, 3, 1, 0]), 0)
    with pytest.raises(BadParameters):
        index_of_regularity(h, -1)


def test_ov_decomposition_independent_and_dreg():
    S = gen_ov(6, 2, 6, P0, seed=2)
    dec = ov_decomposition(S, 6, independent=True)
    assert dec.identity_holds() and dec.vf_independent
    plain = ov_decomposition(S, 6)
    assert list(plain.vf) == list(dec.vf)
    assert list(dec.ko) == list(expand(predict_oil_ring(6, 2), 6))
    assert ov_dreg(S, 6, dec.vf) == 3


def test_mixed_decomposition_uses_oil_part():
    S = gen_mixed(6, 2, 3, 2, P0, seed=3)
    dec = mixed_decomposition(S, 6, parts=True)
    qo, oil_ring = oil_part_system(S)
    ref = normal_form_hilbert([dict(f.terms) for f in qo], oil_ring.n, S.field.p, 6)
    assert list(dec.koqo) == ref
    assert [a - b for a, b in zip(dec.rp, dec.koqo)] == list(dec.vqp)
    assert all(c >= 0 for c in dec.q_over_fq()) and all(c >= 0 for c in dec.f_over_fq())
    assert mixed_dreg(S, 6, dec.vqp) >= 2


def test_chain_on_affine_systems():
    for seed in range(4):
        S = gen_full(5, 6, FieldSpec(2, True), homogeneous=False, seed=seed)
        rep = inequality_chain(S, 6)
        assert rep.holds


def test_hfq_split_single_generator():
    # one quadric over GF(2): H_R(d) = H(d) + H(d-2) below the regularity index
    S = gen_full(5, 1, FieldSpec(2, True), seed=0)
    rep = hfq_decomposition_check(S, 6)
    assert rep.delta == 2
    ref = normal_form_hilbert([dict(S.polys[0].terms)], 5, 2, 6, q=2)
    assert list(rep.full) == ref
    assert rep.holds_below_ireg


def test_analyze_report_serialises():
    S = gen_ov(6, 2, 6, P0, seed=1)
    rep = analyze(S, 7, 5, ["ov", "chain", "delta", "trv2"])
    data = rep.to_dict()
    json.dumps(data)
    assert not rep.failed
    assert data["hilbert"][:3] == [1, 6, 15]
    assert list(empirical_hilbert(S, 7)) == data["hilbert"]
