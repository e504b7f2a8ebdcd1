from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from vrx.basering import Integers, ModN
from vrx.errors import BaseMismatch, InfiniteSearchSpace, NotIdempotent
from vrx.structure import (center_truncated, characteristic_of_vertex_ring, check_endo_iso,
                           check_ideal, check_structure_constants_equal, check_tensor_hs,
                           check_unit, decompose_by_idempotent, direct_sum, find_idempotents,
                           find_unit_inverse, principal_ideal, tensor_product)
from vrx.virasoro import OMEGA, build_M, check_virasoro_vector

from conftest import inst


def scalars(V, states):
    lab = V.all_labels()[0]
    return sorted(s.get(lab, 0) for s in states)


def test_center_of_trivial_comm_is_everything(Z30):
    c = center_truncated(Z30)
    assert c.is_everything() and c.report.ok


def test_center_of_divided_powers_is_constants(Zx):
    c = center_truncated(Zx)
    assert c.generators() == [{0: 1}]
    assert all(info["level"] == "exact" for info in c.by_weight.values())


def test_center_of_virasoro_weight_zero():
    V = inst("virasoro:z:0", 8)
    c = center_truncated(V)
    assert c.to_json()["0"]["generators"] == [[["1", "1"]]]
    assert all(not c.to_json()[str(w)]["generators"] for w in range(2, 9))


def test_idempotents_of_z30(Z30):
    ids = find_idempotents(Z30)
    assert scalars(Z30, ids) == sorted(e for e in range(30) if e * e % 30 == e)


def test_idempotents_need_candidates_over_z():
    with pytest.raises(InfiniteSearchSpace):
        find_idempotents(inst("virasoro:z:1", 4))
    V = inst("virasoro:z:1", 4)
    assert find_idempotents(V, candidates=[{(): 1}, {(): 2}, {}]) == [{(): 1}, {}]


def test_idempotents_of_direct_sum_include_component_vacua():
    V = inst("dsum(virasoro:zmod:3:1,comm:zmod:3)", 6)
    ids = find_idempotents(V)
    assert V.component_vacuum(0) in ids and V.component_vacuum(1) in ids
    assert len(ids) == 4


@pytest.mark.parametrize("a,b,ok", [(7, 13, True), (13, 7, True), (11, 11, True), (7, 12, False)])
def test_check_unit_z30(Z30, a, b, ok):
    rep = check_unit(Z30, a, b)
    assert rep.details["hypothesis"] is ok
    assert rep.ok


def test_unit_inverses_by_search(Z30):
    for a in range(30):
        b = find_unit_inverse(Z30, a) if a else None
        if gcd(a, 30) == 1:
            assert b == {0: pow(a, -1, 30)}
        else:
            assert b is None


def test_omega_is_not_a_unit(M6):
    assert find_unit_inverse(M6, {OMEGA: 1}) is None


@pytest.mark.parametrize("spec,char", [("virasoro:z:1", 0), ("virasoro:zmod:6:1", 6),
                                       ("comm:prod:zmod:4,zmod:3", 12), ("comm:zmod:30", 30)])
def test_characteristic(spec, char):
    assert characteristic_of_vertex_ring(inst(spec, 4)) == char


def test_principal_ideal_of_six(Z30):
    P = principal_ideal(Z30, 6)
    assert sorted(s.get(0, 0) for s in P.elements()) == [0, 6, 12, 18, 24]


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 40), st.data())
def test_principal_ideals_are_gcd_multiples(n, data):
    a = data.draw(st.integers(0, n - 1))
    V = inst(f"comm:zmod:{n}")
    P = principal_ideal(V, {0: a} if a else {})
    d = gcd(a, n)
    assert sorted(s.get(0, 0) for s in P.elements()) == list(range(0, n, d))


def test_principal_ideal_of_omega_over_z(M6):
    P = principal_ideal(M6, {OMEGA: 1})
    assert P.contains({(): 1})


def test_direct_sum_and_decomposition():
    U, W = inst("virasoro:zmod:3:1", 5), inst("comm:zmod:3")
    V = direct_sum(U, W)
    A, B, rep = decompose_by_idempotent(V, V.component_vacuum(0))
    assert rep.ok and A.is_coordinate() and B.is_coordinate()
    assert check_structure_constants_equal(A, U, lambda lab: (0, lab), 4).ok
    assert check_structure_constants_equal(B, W, lambda lab: (1, lab)).ok


def test_decompose_rejects_non_idempotent(Z30):
    with pytest.raises(NotIdempotent):
        decompose_by_idempotent(Z30, 2)


def test_direct_sum_rejects_mixed_bases():
    with pytest.raises(BaseMismatch):
        direct_sum(inst("comm:zmod:3"), inst("comm:zmod:5"))


def test_image_of_crt_idempotent_is_an_ideal(Z30):
    A, B, rep = decompose_by_idempotent(Z30, 6)
    assert rep.ok and A.size() == 5 and B.size() == 6
    assert check_ideal(A).ok


def test_tensor_product_hs_and_virasoro_vector():
    U = build_M(Integers(), 1, 6)
    T = tensor_product(U, U)
    assert check_tensor_hs(T, 4).ok
    nu = {**T.pure(U.vacuum, {OMEGA: 1}), **T.pure({OMEGA: 1}, U.vacuum)}
    assert check_virasoro_vector(T, nu, 2, max_weight=4, box=3).ok
    assert not check_virasoro_vector(T, nu, 1, max_weight=4, box=3).ok


def test_tensor_dimensions_are_convolutions():
    U = build_M(Integers(), 1, 6)
    T = tensor_product(U, U)
    du = [len(U.labels(w)) for w in range(7)]
    for w in range(7):
        assert len(T.labels(w)) == sum(du[i] * du[w - i] for i in range(w + 1))


def test_endo_iso(Z30):
    assert check_endo_iso(Z30).ok
    assert check_endo_iso(inst("dsum(virasoro:zmod:3:1,comm:zmod:3)", 6), max_weight=3).ok


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 60))
def test_idempotents_lie_in_center_and_char_matches(n):
    V = inst(f"comm:zmod:{n}")
    c = center_truncated(V)
    for e in find_idempotents(V, center=c):
        assert c.contains(e)
    assert characteristic_of_vertex_ring(V) == n


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(2, 4))
def test_decompose_recovers_direct_sum(p, N):
    U, W = inst(f"virasoro:zmod:{p}:1", N), inst(f"comm:zmod:{p}")
    V = direct_sum(U, W)
    A, B, rep = decompose_by_idempotent(V, V.component_vacuum(1))
    assert rep.ok
    assert check_structure_constants_equal(A, W, lambda lab: (1, lab)).ok
    assert check_structure_constants_equal(B, U, lambda lab: (0, lab)).ok
