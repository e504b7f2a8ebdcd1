import pytest
from hypothesis import given, strategies as st

from vrx.basering import (Integers, ModN, Poly, Product, RingElement, coerce,
                          enumerate_idempotents, is_unit, parse_ring, unit_inverse)
from vrx.errors import DescriptorMismatch, InfiniteRing, NotAUnit, ParseError


@pytest.mark.parametrize("s", ["z", "zmod:30", "poly:z:x", "poly:zmod:5:t", "prod:zmod:4,zmod:3"])
def test_descriptor_round_trip(s):
    assert str(parse_ring(s)) == s


@pytest.mark.parametrize("s,pos", [("zmod:", 5), ("zmod:1", 5), ("q", 0), ("poly:z", 6), ("zz", 0)])
def test_parse_errors_carry_position(s, pos):
    with pytest.raises(ParseError) as exc:
        parse_ring(s)
    assert exc.value.position == pos


@given(st.integers(2, 200), st.integers(-500, 500), st.integers(-500, 500))
def test_modn_matches_python_arithmetic(n, a, b):
    R = ModN(n)
    x, y = R(a), R(b)
    assert (x + y).value == (a + b) % n
    assert (x * y).value == (a * b) % n
    assert (-x).value == (-a) % n


def test_idempotents_of_z30_brute_force():
    want = sorted(e for e in range(30) if e * e % 30 == e)
    got = [e.value for e in enumerate_idempotents(ModN(30))]
    assert got == want and len(got) == 8


def test_idempotents_of_product():
    got = enumerate_idempotents(parse_ring("prod:zmod:4,zmod:3"))
    assert len(got) == 4


def test_units_and_inverses():
    R = ModN(30)
    assert is_unit(R(7)) and unit_inverse(R(7)).value == 13
    assert not is_unit(R(6))
    with pytest.raises(NotAUnit):
        unit_inverse(R(6))


def test_integers_are_infinite():
    with pytest.raises(InfiniteRing):
        enumerate_idempotents(Integers())


def test_mixed_descriptors_refuse_to_combine():
    with pytest.raises(DescriptorMismatch):
        ModN(6)(1) + ModN(4)(1)


def test_coerce_accepts_several_forms():
    R = ModN(6)
    assert coerce(R, 7) == 1
    assert coerce(R, "5") == 5
    assert coerce(R, R(2)) == 2
    with pytest.raises(DescriptorMismatch):
        coerce(R, ModN(4)(1))


def test_polynomial_multiplication():
    P = Poly(Integers(), "x")
    x = P("x")
    assert (x + 1) * (x - 1) == P("x^2-1")


def test_characteristics():
    assert Integers().characteristic() == 0
    assert ModN(6).characteristic() == 6
    assert parse_ring("prod:zmod:4,zmod:3").characteristic() == 12
