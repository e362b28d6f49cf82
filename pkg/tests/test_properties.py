"""Property tests for algebraic identities the package relies on."""

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from ovalg.ffield import FieldSpec, matrix_rank, row_reduce
from ovalg.invariants import ov_decomposition
from ovalg.macaulay import empirical_hilbert
from ovalg.polyring import Polynomial, Ring, format_polynomial, parse_polynomial
from ovalg.series import RationalGF, TruncatedSeries, bracket, expand, ipoly_mul
from ovalg.sysgen import LinearTransform, PolySystem, apply_transform, gen_full, gen_ov

from oracles import rank_mod_p

SMALL_PRIMES = st.sampled_from([2, 3, 5, 7])
FAST = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
SLOW = settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def polys(draw, p, n=3, max_deg=3, max_terms=5):
    ring = Ring(n, FieldSpec(p))
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        m = tuple(draw(st.lists(st.integers(0, max_deg), min_size=n, max_size=n)))
        terms[m] = draw(st.integers(0, p - 1))
    return Polynomial(terms, ring)


@FAST
@given(st.data(), SMALL_PRIMES)
def test_ring_axioms(data, p):
    f, g, h = (data.draw(polys(p)) for _ in range(3))
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert (f - g) + g == f
    assert parse_polynomial(format_polynomial(f), f.ring) == f
    if f and g:
        assert (f * g).degree() == f.degree() + g.degree()


@FAST
@given(st.lists(st.integers(-5, 5), min_size=1, max_size=6),
       st.lists(st.integers(-3, 3), min_size=0, max_size=4), st.integers(0, 12))
def test_expand_inverts_multiplication(a, tail, D):
    den = [1] + tail
    s = expand(RationalGF(ipoly_mul(a, den), den), D)
    assert list(s) == (a + [0] * (D + 1))[: D + 1]


@FAST
@given(st.lists(st.integers(-4, 9), min_size=1, max_size=10))
def test_bracket_properties(coeffs):
    s = TruncatedSeries(coeffs)
    b = bracket(s)
    assert len(b) == len(s)
    assert list(bracket(b)) == list(b)
    t0 = s.first_nonpositive()
    if t0 is not None:
        assert all(c == 0 for c in list(b)[t0:])
        assert list(b)[:t0] == coeffs[:t0]


@FAST
@given(SMALL_PRIMES, st.integers(1, 7), st.integers(1, 9), st.integers(0, 10**6))
def test_rank_properties(p, r, c, seed):
    M = np.random.default_rng(seed).integers(0, p, (r, c))
    F = FieldSpec(p)
    k = matrix_rank(M, F)
    assert k == rank_mod_p(M.tolist(), p) == matrix_rank(M.T, F)
    assert k <= min(r, c)
    red = row_reduce(M, F)
    again = row_reduce(red.rref, F)
    assert (again.rref == red.rref).all()


@SLOW
@given(st.sampled_from([2, 3]), st.integers(3, 5), st.integers(1, 3), st.integers(0, 10**6))
def test_hilbert_is_invariant_under_coordinate_change(q, n, m, seed):
    F = FieldSpec(q, True)
    S = gen_full(n, m, F, seed=seed)
    rng = np.random.default_rng(seed + 1)
    # unit lower triangular times unit upper triangular is always invertible
    L = np.tril(rng.integers(0, q, (n, n)), -1) + np.eye(n, dtype=np.int64)
    U = np.triu(rng.integers(0, q, (n, n)), 1) + np.eye(n, dtype=np.int64)
    T = LinearTransform(((L @ U) % q).tolist(), F)
    assert list(empirical_hilbert(S, 5)) == list(empirical_hilbert(apply_transform(S, T), 5))


@SLOW
@given(st.sampled_from([2, 3, 7]), st.integers(3, 5), st.integers(1, 4), st.integers(0, 10**6))
def test_adding_a_generator_shrinks_the_series(p, n, m, seed):
    F = FieldSpec(p, p < 5)
    S = gen_full(n, m + 1, F, seed=seed)
    D = 5
    big = empirical_hilbert(S, D)
    small = empirical_hilbert(PolySystem(S.polys[:-1], S.ring, True), D)
    assert all(a <= b for a, b in zip(big, small))
    assert all(big[d] <= S.ring.component_dim(d) for d in range(D + 1))
    assert big[0] == 1 and big[1] == n


@SLOW
@given(st.sampled_from(["gf2", "char0"]), st.integers(3, 7), st.integers(1, 3), st.integers(1, 8),
       st.integers(0, 10**6))
def test_ov_additivity(field, n, v, m, seed):
    v = min(v, n - 1)
    F = FieldSpec(2, True) if field == "gf2" else FieldSpec.char0()
    S = gen_ov(n, v, m, F, seed=seed)
    dec = ov_decomposition(S, 6, independent=True)
    assert dec.identity_holds()
    assert all(c >= 0 for c in dec.vf)
