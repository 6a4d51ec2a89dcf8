import random

import pytest

from vslab.errors import DivisionByZero, EvenCharacteristic, ReducibleModulus
from vslab.gf import GF, is_prime, make_field, parse_descriptor

FIELDS = [(7, 1, None), (3, 2, [1, 0, 1]), (5, 1, None), (3, 3, None), (5, 2, None)]


def test_make_field_basics():
    f7 = make_field(7, 1)
    assert f7.q == 7 and f7.p == 7
    f9 = make_field(3, 2, [1, 0, 1])  # T^2 + 1, irreducible: -1 non-square mod 3
    assert f9.q == 9
    assert f9.descriptor == "3^2/1,0,1"


def test_even_characteristic_rejected():
    with pytest.raises(EvenCharacteristic):
        make_field(2, 1)
    with pytest.raises(EvenCharacteristic):
        make_field(9, 1)  # not prime


def test_reducible_modulus_rejected():
    # T^2 - 1 = (T-1)(T+1)
    with pytest.raises(ReducibleModulus):
        make_field(3, 2, [2, 0, 1])
    with pytest.raises(ReducibleModulus):
        make_field(5, 2, [0, 1])  # wrong degree


def test_modulus_search_is_deterministic():
    a = GF(3, 2)
    b = GF(3, 2)
    assert a.modulus == b.modulus
    # lowest canonical index first: T^2+1 has low-part index 1, and
    # T^2, T^2+... with index 0 is reducible, so index 1 wins.
    assert a.modulus == (1, 0, 1)


def test_prime_field_ops():
    f7 = make_field(7)
    assert f7.inv(3) == 5  # 3*5 = 15 = 1 mod 7
    assert f7.pow(2, 5) == 4  # 32 mod 7
    assert f7.add(6, 3) == 2
    assert f7.sub(1, 3) == 5


def test_f9_t_squared():
    f9 = make_field(3, 2, [1, 0, 1])
    t = f9.element([0, 1])
    assert f9.mul(t, t) == 2  # t^2 = -1 = 2 mod 3


def test_enumeration_bijection():
    for p, k, mod in FIELDS:
        gf = make_field(p, k, mod)
        seen = list(gf.elements())
        assert seen == list(range(gf.q))
        assert seen[0] == 0
        for i in seen:
            assert gf.element(gf.coeffs(i)) == i


@pytest.mark.parametrize("p,k,mod", FIELDS)
def test_field_axioms_random(p, k, mod):
    gf = make_field(p, k, mod)
    rng = random.Random(1234 + gf.q)
    for _ in range(200):
        x, y, z = (rng.randrange(gf.q) for _ in range(3))
        assert gf.add(x, y) == gf.add(y, x)
        assert gf.mul(x, y) == gf.mul(y, x)
        assert gf.add(gf.add(x, y), z) == gf.add(x, gf.add(y, z))
        assert gf.mul(gf.mul(x, y), z) == gf.mul(x, gf.mul(y, z))
        assert gf.mul(x, gf.add(y, z)) == gf.add(gf.mul(x, y), gf.mul(x, z))
        assert gf.add(x, gf.neg(x)) == 0
        if x:
            assert gf.mul(x, gf.inv(x)) == 1


@pytest.mark.parametrize("p,k,mod", FIELDS)
def test_fermat_lagrange(p, k, mod):
    gf = make_field(p, k, mod)
    for x in gf.elements():
        assert gf.pow(x, gf.q) == x
        if x:
            assert gf.pow(x, gf.q - 1) == 1


def test_division_by_zero():
    gf = make_field(5)
    with pytest.raises(DivisionByZero):
        gf.inv(0)
    with pytest.raises(DivisionByZero):
        gf.div(3, 0)


def test_numpy_tables_match_scalar_ops():
    for p, k, mod in [(7, 1, None), (3, 2, [1, 0, 1])]:
        gf = make_field(p, k, mod)
        add, mul = gf.add_table(), gf.mul_table()
        for x in gf.elements():
            for y in gf.elements():
                assert add[x, y] == gf.add(x, y)
                assert mul[x, y] == gf.mul(x, y)


def test_descriptor_round_trip():
    for p, k, mod in FIELDS:
        gf = make_field(p, k, mod)
        again = parse_descriptor(gf.descriptor)
        assert again == gf and again.modulus == gf.modulus
    assert parse_descriptor("7^1").q == 7
    assert parse_descriptor("7").q == 7
    with pytest.raises(EvenCharacteristic):
        parse_descriptor("25^1")


def test_is_prime():
    assert [n for n in range(2, 30) if is_prime(n)] == [
        2, 3, 5, 7, 11, 13, 17, 19, 23, 29,
    ]
