from math import comb

import pytest

from ovalg.errors import BadParameters, NonUnitConstantTerm, NotFoundWithin, UnderdeterminedNotCovered
from ovalg.series import (RationalGF, TruncatedSeries, bracket, cumulative_solving_bound, dreg_witness, expand,
                          format_series, ipoly_mul, ipoly_pow, measure_correction, predict_oil_ring,
                          predict_ov_hfg, predict_ov_semiregular, predict_semiregular_char0,
                          predict_semiregular_fq, predict_dreg_bound)

from oracles import series_coeffs


def test_golden_expansions():
    num = ipoly_pow([1, 1], 8)
    assert list(expand(RationalGF(num, [1, 0, 1]), 6)) == [1, 8, 27, 48, 43, 8, -15]
    gf = RationalGF(ipoly_pow([1, 1], 10), ipoly_pow([1, 0, 1], 13))
    assert list(expand(gf, 4)) == [1, 10, 32, -10, -284]


def test_expand_matches_reference_division():
    for num, den in [([1, 2, 3], [1, -1]), ([1], [1, -3, 2]), ([2, 0, -1, 5], [1, 0, 0, 1])]:
        assert list(expand(RationalGF(num, den), 9)) == series_coeffs(num, den, 9)


def test_negative_unit_denominator_normalised():
    assert list(expand(RationalGF([-1], [-1, 1]), 4)) == [1, 1, 1, 1, 1]
    with pytest.raises(NonUnitConstantTerm):
        RationalGF([1], [2, 1])
    with pytest.raises(BadParameters):
        expand(RationalGF([1]), -1)


def test_bracket_and_format():
    s = TruncatedSeries([1, 4, 0, 3, -2])
    assert list(bracket(s)) == [1, 4, 0, 0, 0]
    assert list(bracket(TruncatedSeries([1, 2]))) == [1, 2]
    assert format_series(TruncatedSeries([1, -1, 0, 2])) == "1 - t + 2t^3"
    assert format_series(TruncatedSeries([0, 0])) == "0"


def test_semiregular_char0_is_binomial_series():
    # n variables, no equations: dim of degree-d forms
    assert list(expand(predict_semiregular_char0(4, 0), 5)) == [comb(3 + d, d) for d in range(6)]
    # one quadric in 3 variables: h(d) = 2d + 1
    assert list(expand(predict_semiregular_char0(3, 1), 6)) == [2 * d + 1 for d in range(7)]


def test_semiregular_fq_no_equations_is_bounded_monomials():
    # (1 + t + t^2)^2 counts exponents < 3
    assert list(expand(predict_semiregular_fq(2, 0, 3), 5)) == [1, 2, 3, 2, 1, 0]
    with pytest.raises(BadParameters):
        predict_semiregular_fq(2, 1, 1)


def test_oil_ring_and_hfg():
    assert list(expand(predict_oil_ring(5, 2), 3)) == [1, 3, 6, 10]
    assert list(expand(predict_oil_ring(5, 2, type("F", (), {"field_equations": True, "p": 2})()), 4)) == \
        [1, 3, 3, 1, 0]
    hfg = predict_ov_hfg(9, 3, 12, 4)
    assert list(hfg)[:3] == [0, 3, 12]


def test_ov_branches():
    assert predict_ov_semiregular(6, 3, 2, 5)[1] == "m<=v"
    assert predict_ov_semiregular(6, 3, 4, 5)[1] == "v<m<n"
    s, branch = predict_ov_semiregular(6, 2, 6, 6)
    assert branch == "m>=n"
    oil = list(expand(predict_oil_ring(6, 2), 6))
    assert all(a >= b for a, b in zip(s, oil)) and s[0] == 1


def test_correction_and_bounds():
    base = TruncatedSeries([1, 2, 3, 4, 5])
    comp = TruncatedSeries([1, 2, 3, 6, 9])
    assert list(measure_correction(comp, base, 1)) == [2, 4]
    with pytest.raises(BadParameters):
        measure_correction(TruncatedSeries([1, 3, 3, 4, 5]), base, 1)
    assert predict_dreg_bound(8, 3, 8) == 4
    with pytest.raises(UnderdeterminedNotCovered):
        predict_dreg_bound(8, 3, 7)
    assert dreg_witness(8, 3) == comb(7, 2)


def test_cumulative_solving_bound():
    assert cumulative_solving_bound(TruncatedSeries([1, 4, -3, -9])) == 3
    with pytest.raises(NotFoundWithin):
        cumulative_solving_bound(TruncatedSeries([1, 1, 1]))
    with pytest.raises(BadParameters):
        cumulative_solving_bound(TruncatedSeries([1, 1]), (3, 1), "other")


def test_ipoly_helpers():
    assert ipoly_mul([1, 1], [1, -1]) == [1, 0, -1]
    assert ipoly_pow([1, 1], 3) == [1, 3, 3, 1]


def test_determined_plus_one_cumulative_sums():
    from itertools import accumulate
    n = 7
    h = expand(RationalGF(ipoly_mul(ipoly_pow([1, 1], n + 1), [1, -1])), n + 1)
    assert list(accumulate(h)) == [comb(n + 1, d) for d in range(n + 2)]
    for v in (1, 2, 3):
        assert cumulative_solving_bound(h, (n, v)) == v + 1
