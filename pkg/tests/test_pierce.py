from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from vrx.errors import NotExhaustive, PreconditionFailed
from vrx.pierce import (boolean_ring, build_pierce_bundle, check_center_vnr,
                        check_global_sections_iso, check_partition, check_stalk_indecomposable,
                        check_vnr_simple_stalks, is_indecomposable, is_vnr,
                        regular_ideal_Mbar, regular_ideal_lattice, stone_space)

from conftest import inst


def factor(n):
    out, p = {}, 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def crt_atoms(n):
    """Primitive idempotents of Z/n: 1 mod p^k and 0 mod the cofactor."""
    out = []
    for p, k in factor(n).items():
        q = p ** k
        out.append(next(e for e in range(n) if e % q == 1 % q and e % (n // q) == 0))
    return sorted(out)


def test_boolean_ring_of_z30():
    V = inst("comm:zmod:30")
    B = boolean_ring(V)
    assert len(B) == 8 and B.check_axioms().ok
    # xor and meet agree with CRT coordinates in (Z/2)^3
    coords = lambda e: tuple(e.get(0, 0) % p for p in (2, 3, 5))
    for e in B.elements:
        for f in B.elements:
            ce, cf = coords(e), coords(f)
            assert coords(B.meet(e, f)) == tuple(a * b for a, b in zip(ce, cf))
            assert coords(B.xor(e, f)) == tuple((a + b) % 2 for a, b in zip(ce, cf))


def test_complement_xor_is_one():
    B = boolean_ring(inst("comm:zmod:60"))
    for e in B.elements:
        assert B.xor(e, B.complement(e)) == B.one


@pytest.mark.parametrize("n", [30, 60, 12, 7, 8, 210])
def test_stone_space_atoms_are_crt_idempotents(n):
    V = inst(f"comm:zmod:{n}")
    B = boolean_ring(V)
    pts = stone_space(B)
    assert sorted(p.atom[0] for p in pts) == crt_atoms(n)
    assert check_partition(B, pts).ok


def test_stalks_of_z60():
    bundle = build_pierce_bundle(inst("comm:zmod:60"))
    assert sorted(s.descriptor for s in bundle.stalks) == ["zmod:3", "zmod:4", "zmod:5"]
    assert bundle.check_sizes().ok
    assert check_stalk_indecomposable(bundle).ok


def test_stalks_of_direct_sum():
    V = inst("dsum(comm:zmod:3,virasoro:zmod:3:1)", 6)
    bundle = build_pierce_bundle(V)
    assert sorted(s.descriptor for s in bundle.stalks) == ["comm:zmod:3", "virasoro:zmod:3:1"]
    assert bundle.check_sizes().ok
    assert check_global_sections_iso(V, bundle).ok


def test_mbar_for_mod5_point():
    V = inst("comm:zmod:30")
    pts = stone_space(boolean_ring(V))
    p5 = next(p for p in pts if p.atom[0] % 5 == 1)
    ideal, rep = regular_ideal_Mbar(V, p5)
    assert rep.ok
    assert ideal.size() == 6


def test_indecomposable_negative_control():
    assert not is_indecomposable(inst("comm:zmod:6"))
    assert is_indecomposable(inst("comm:zmod:4"))


def test_global_sections_on_z30():
    assert check_global_sections_iso(inst("comm:zmod:30")).ok


@pytest.mark.parametrize("n", [30, 60, 12, 9])
def test_regular_ideal_lattice(n):
    rep = regular_ideal_lattice(inst(f"comm:zmod:{n}"))
    assert rep.ok
    assert rep.details["regularIdeals"] == 2 ** len(factor(n))
    assert rep.details["allIdeals"] == len(divisors(n))


def test_vnr_verdicts():
    assert is_vnr(inst("comm:zmod:30"))[0] is True
    ok, witness, exhaustive = is_vnr(inst("comm:zmod:60"))
    assert not ok and witness == {0: 2} and exhaustive


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 80))
def test_vnr_iff_squarefree(n):
    V = inst(f"comm:zmod:{n}")
    squarefree = all(k == 1 for k in factor(n).values())
    assert is_vnr(V)[0] is squarefree
    rep = check_vnr_simple_stalks(V)
    assert rep.ok and rep.details["vnr"] is squarefree


def test_center_vnr():
    assert check_center_vnr(inst("comm:zmod:30")).ok
    with pytest.raises(PreconditionFailed):
        check_center_vnr(inst("comm:zmod:60"))


def test_boolean_ring_needs_finite_search():
    with pytest.raises(NotExhaustive):
        boolean_ring(inst("virasoro:z:1", 4))


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 120))
def test_stalk_sizes_multiply(n):
    bundle = build_pierce_bundle(inst(f"comm:zmod:{n}"))
    assert bundle.check_sizes().ok
    assert len(bundle.points) == len(factor(n))


def test_divided_power_instance_over_a_field_is_simple():
    """Ideals are closed under D_m, and D_1 x = 1, so nilpotent x generates everything."""
    V = inst("commhs:poly:zmod:3:x:deg=2")
    assert is_vnr(V)[0] is True
    assert check_center_vnr(V).ok
