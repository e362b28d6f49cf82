import numpy as np
import pytest

from ovalg.errors import BadParameters, DimensionMismatch, ZeroInverse
from ovalg.ffield import (Eliminator, FieldElement, FieldSpec, fe_inv, gf2_rank, in_row_space, is_prime,
                          matrix_rank, next_primes, pack_rows, row_reduce, unpack_rows)

from oracles import rank_mod_p

PRIMES = [2, 3, 5, 7, 65537, 1048583]


def test_primality_and_next_primes():
    assert [k for k in range(30) if is_prime(k)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    ps = next_primes(2**20, 3)
    assert len(ps) == 3 and all(is_prime(p) and p >= 2**20 for p in ps)
    assert ps == sorted(set(ps))


def test_fieldspec_validation():
    with pytest.raises(BadParameters):
        FieldSpec(4)
    with pytest.raises(BadParameters):
        FieldSpec.char0(101)
    assert FieldSpec.char0().mode == "char0_proxy"
    assert FieldSpec(3, True).describe() == "GF(3) with field equations"
    assert FieldSpec.from_dict(FieldSpec(5, True).to_dict()) == FieldSpec(5, True)


@pytest.mark.parametrize("p", [2, 3, 7, 65537])
def test_inverse(p):
    F = FieldSpec(p)
    for a in range(1, min(p, 200)):
        assert a * fe_inv(a, F) % p == 1
    with pytest.raises(ZeroInverse):
        fe_inv(0, F)
    x = FieldElement(p - 1, F)
    assert int(x * x.inv()) == 1


def test_field_element_arithmetic():
    F = FieldSpec(7)
    a, b = FieldElement(5, F), FieldElement(4, F)
    assert int(a + b) == 2 and int(a - b) == 1 and int(a * b) == 6 and int(-a) == 2
    assert int(3 - a) == 5
    with pytest.raises(DimensionMismatch):
        a + FieldElement(1, FieldSpec(5))


@pytest.mark.parametrize("p", PRIMES)
def test_rank_matches_reference(p):
    rng = np.random.default_rng(p)
    F = FieldSpec(p)
    for _ in range(15):
        r, c, k = rng.integers(1, 12, size=3)
        # low-rank product so ranks below full actually occur
        M = (rng.integers(0, p, (r, k)) @ rng.integers(0, p, (k, c))) % p if p < 2**16 else \
            rng.integers(0, p, (r, c))
        assert matrix_rank(M, F) == rank_mod_p(M.tolist(), p)


@pytest.mark.parametrize("p", [2, 5, 1048583])
def test_rref_is_reduced_and_spans(p):
    rng = np.random.default_rng(7)
    F = FieldSpec(p)
    M = rng.integers(0, p, (9, 14))
    M[4] = (M[0] + 2 * M[1]) % p
    red = row_reduce(M, F)
    E = red.rref
    assert red.rank == rank_mod_p(M.tolist(), p) == E.shape[0]
    for i, c in enumerate(red.pivots):
        col = E[:, c] % p
        assert col[i] == 1 and np.count_nonzero(col) == 1
        assert not E[i, :c].any()
    assert red.pivots == sorted(red.pivots)
    for row in M:
        assert in_row_space(row, red, F)
    # same row space: stacking does not increase the rank
    assert rank_mod_p(np.vstack([M, E]).tolist(), p) == red.rank


def test_in_row_space_negative():
    F = FieldSpec(3)
    red = row_reduce([[1, 0, 0], [0, 1, 0]], F)
    assert not in_row_space([0, 0, 1], red, F)
    assert in_row_space([2, 1, 0], red, F)


def test_gf2_packing_roundtrip():
    rng = np.random.default_rng(0)
    M = rng.integers(0, 2, (13, 77))
    assert (unpack_rows(pack_rows(M), 77) == M).all()
    assert gf2_rank(pack_rows(M)) == rank_mod_p(M.tolist(), 2)


@pytest.mark.parametrize("p", [2, 3, 1048583])
def test_eliminator_blocks(p):
    rng = np.random.default_rng(3)
    F = FieldSpec(p)
    M = rng.integers(0, p, (40, 12)) * (rng.random((40, 1)) < 0.5)
    el = Eliminator(12, F)
    for s in range(0, 40, 7):
        el.add(M[s:s + 7])
    assert el.rank == matrix_rank(M, F)
    res = el.result()
    assert all(in_row_space(r, res, F) for r in M)


def test_empty_and_ragged():
    F = FieldSpec(5)
    assert matrix_rank(np.zeros((0, 4), dtype=int), F) == 0
    with pytest.raises(DimensionMismatch):
        matrix_rank([[1, 2], [3]], F)
