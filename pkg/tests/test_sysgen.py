import pytest

from ovalg.errors import BadParameters, NotMixed, NotOV, ParseError, SingularTransform
from ovalg.ffield import FieldSpec
from ovalg.polyring import Ring
from ovalg.sysgen import (LinearTransform, PolySystem, apply_transform, default_quotient, gen_full, gen_mixed,
                          gen_ov, is_ov, load_system, parse_system, save_system, search_ov_transform)

GF2 = FieldSpec(2, True)
P0 = FieldSpec.char0()


def test_default_quotients():
    assert default_quotient(FieldSpec(2, True), True) == "graded"
    assert default_quotient(FieldSpec(2, True), False) == "affine"
    assert default_quotient(FieldSpec(5), True) == "free"


def test_generation_is_seeded_and_shaped():
    S = gen_ov(7, 3, 5, P0, seed=11)
    assert S.kind == "ov" and S.m == 5 and S.n == 7
    assert is_ov(S) is not None and is_ov(S) <= 3
    assert gen_ov(7, 3, 5, P0, seed=11).to_text() == S.to_text()
    assert gen_ov(7, 3, 5, P0, seed=12).to_text() != S.to_text()
    M = gen_mixed(6, 2, 3, 2, GF2, seed=1)
    assert all(is_ov([f], range(2)) for f in M.polys[:3])
    N = gen_full(4, 3, GF2, homogeneous=False, seed=2)
    assert N.ring.quotient == "affine" and not N.homogeneous


def test_validation():
    R = Ring(3, FieldSpec(5))
    with pytest.raises(NotOV):
        PolySystem([R.parse("x3^2")], R, kind="ov", v=1)
    with pytest.raises(NotMixed):
        PolySystem([R.parse("x1*x2")], R, kind="mixed", v=1, e=2, u=1)
    with pytest.raises(BadParameters):
        PolySystem([R.parse("x1")], R)
    with pytest.raises(BadParameters):
        gen_ov(4, 4, 2, P0)


@pytest.mark.parametrize("fmt", ["text", "json"])
def test_roundtrip(tmp_path, fmt):
    for S in (gen_ov(6, 2, 4, P0, seed=3), gen_mixed(5, 2, 2, 2, GF2, False, seed=4)):
        path = tmp_path / f"s.{fmt}"
        save_system(S, str(path), fmt)
        T = load_system(str(path))
        assert T.to_dict() == S.to_dict()


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_system("ring GF(2) vars 2\n")
    with pytest.raises(ParseError):
        parse_system("ring GF(2) vars 2\nkind full\nhomogeneous maybe\nx1*x2\n")


def test_transform_roundtrip():
    F = FieldSpec(3, True)
    S = gen_full(4, 3, F, seed=5)
    T = LinearTransform([[1, 1, 0, 0], [0, 1, 0, 0], [0, 2, 1, 0], [1, 0, 0, 1]], F)
    back = apply_transform(apply_transform(S, T), T.inverse())
    assert [str(f) for f in back.polys] == [str(f) for f in S.polys]
    assert T.compose(T.inverse()).matrix == LinearTransform.identity(4, F).matrix
    with pytest.raises(SingularTransform):
        LinearTransform([[1, 1], [2, 2]], F)


def test_search_recovers_hidden_ov_structure():
    F = FieldSpec(2, True)
    S = gen_ov(5, 2, 3, F, seed=8)
    T = LinearTransform([[1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [1, 1, 1, 0, 0], [0, 1, 0, 1, 0], [1, 0, 1, 1, 1]], F)
    hidden = apply_transform(S, T)
    U = search_ov_transform(hidden, 2)
    assert U is not None
    assert is_ov(apply_transform(hidden, U), range(2)) == [0, 1]
