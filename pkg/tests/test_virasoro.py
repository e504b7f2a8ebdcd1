from functools import lru_cache
from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from vrx.basering import Integers, ModN
from vrx.errors import NotAVirasoroVector, TruncationEscape
from vrx.vertexcore import check_truncation_axiom, locality_order
from vrx.virasoro import (OMEGA, VACUUM, VermaModule, build_M, check_base_change,
                          check_dm_canonical, check_dm_power, check_l0_grading,
                          check_omega_locality4, check_verma_field_property, check_virasoro_vector,
                          check_voa_axioms, graded_dimensions, initial_morphism, partitions,
                          vir_bracket)

from conftest import inst


# -- independent oracles -------------------------------------------------------------

def count_partitions(w, least=2):
    """Partitions of w into parts >= least by the coin-change recursion."""
    table = [1] + [0] * w
    for part in range(least, w + 1):
        for k in range(part, w + 1):
            table[k] += table[k - part]
    return table[w]


def straighten(j, mono, cprime):
    """L(j) on the basis vector L(-n1)...L(-nk)1 (n1 >= ... >= nk >= 2) of M(c', 0).

    Written from the bracket alone: commute L(j) to the right until it meets
    the vacuum, which L(j) kills for j >= -1.
    """
    return dict(_straighten(j, tuple(mono), cprime))


@lru_cache(maxsize=None)
def _straighten(j, mono, cprime):
    out = {}

    def add(state, c):
        for k, v in state:
            out[k] = out.get(k, 0) + c * v

    if j <= -2 and (not mono or -j >= mono[0]):
        return ((( -j,) + mono, 1),)
    if not mono:
        return ()
    n1, rest = mono[0], mono[1:]
    inner = _straighten(j, rest, cprime)
    for lab, c in inner:
        add(_straighten(-n1, lab, cprime), c)
    if j + n1:
        add(_straighten(j - n1, rest, cprime), j + n1)
    if j == n1:
        add(((rest, 1),), (j + 1) * j * (j - 1) // 6 * cprime)
    return tuple((k, v) for k, v in sorted(out.items()) if v)


# -- tests -----------------------------------------------------------------------------

def test_graded_dimensions_match_partition_count(M10):
    assert graded_dimensions(M10) == [count_partitions(w) for w in range(11)]
    assert graded_dimensions(M10) == [1, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12]


def test_partitions_are_descending_with_parts_at_least_two():
    for w in range(12):
        for lam in partitions(w):
            assert sum(lam) == w and all(p >= 2 for p in lam)
            assert list(lam) == sorted(lam, reverse=True)


@pytest.mark.parametrize("cprime", [0, 1, 3, -2])
def test_L_action_matches_independent_straightener(cprime):
    V = build_M(Integers(), cprime, 8)
    for lam in V.all_labels(6):
        for j in range(-3, 8):
            try:
                got = V.apply_L(j, {lam: 1})
            except TruncationEscape:
                continue
            assert got == straighten(j, lam, cprime), (j, lam)


def test_omega_modes_are_L_modes(M6):
    for lam in M6.all_labels(4):
        for n in range(-1, 6):
            assert M6.nth_product({OMEGA: 1}, n, {lam: 1}) == straighten(n - 1, lam, 1)


def test_omega_products(M10):
    w = {OMEGA: 1}
    assert M10.nth_product(w, 3, w) == {VACUUM: 1}
    assert M10.nth_product(w, 1, w) == {OMEGA: 2}
    assert M10.nth_product(w, 2, w) == {}
    assert M10.nth_product(w, 0, w) == {(3,): 1}
    assert M10.D(1, w) == {(3,): 1}


def test_omega3_omega_scales_with_cprime():
    for c in (0, 1, 5, -7):
        V = build_M(Integers(), c, 6)
        want = {VACUUM: c} if c else {}
        assert V.nth_product({OMEGA: 1}, 3, {OMEGA: 1}) == want


def test_truncation_order_of_omega(M10):
    assert check_truncation_axiom(M10, {OMEGA: 1}, {OMEGA: 1}) == 4
    V0 = build_M(Integers(), 0, 8)
    assert check_truncation_axiom(V0, {OMEGA: 1}, {OMEGA: 1}) == 2


def test_bracket():
    a, k = vir_bracket(2, -2, 1)
    assert (a, k) == (4, 1)
    assert vir_bracket(1, -1, 5) == (2, 0)


def test_l0_and_dm_checks(M10):
    for rep in (check_l0_grading(M10), check_dm_power(M10, 6), check_dm_canonical(M10)):
        assert rep.ok and rep.passed > 0


def test_dm_power_against_repeated_L_minus_one(M10):
    for lam in M10.all_labels(4):
        x = {lam: 1}
        for m in range(1, 6):
            x = straighten_state(-1, x, 1)
            assert {k: v // factorial(m) for k, v in x.items()} == M10.D(m, {lam: 1})


def straighten_state(j, state, cprime):
    out = {}
    for lab, c in state.items():
        for k, v in straighten(j, lab, cprime).items():
            out[k] = out.get(k, 0) + c * v
    return {k: v for k, v in out.items() if v}


def test_omega_locality_is_four(M10):
    t, witness = locality_order(M10, {OMEGA: 1}, {OMEGA: 1}, 8, max_weight=4)
    assert t == 4
    assert witness is not None and witness["t"] == 3
    assert check_omega_locality4(M10, max_weight=4, expect=4).ok


def test_base_change_native_matches_reduction():
    VZ = build_M(Integers(), 1, 6)
    for V6 in (build_M(ModN(6), 1, 6), build_M(ModN(6), 1, 6, native=True)):
        rep = check_base_change(VZ, V6, 6)
        assert rep.ok and rep.passed > 0


def test_base_change_detects_wrong_charge():
    VZ = build_M(Integers(), 1, 5)
    V6 = build_M(ModN(6), 2, 5, native=True)
    assert not check_base_change(VZ, V6, 5).ok


def test_lift_is_recorded_in_spec():
    V = build_M(ModN(6), 1, 4, lift=7)
    assert V.spec == "virasoro:zmod:6:1:lift=7"
    with pytest.raises(ValueError):
        build_M(ModN(6), 1, 4, lift=2)


def test_voa_axioms(M6):
    assert check_voa_axioms(M6).ok
    assert check_voa_axioms(inst("virasoro:zmod:6:1", 6)).ok


def test_virasoro_vector_and_initial_morphism(M6):
    assert check_virasoro_vector(M6, {OMEGA: 1}, 1, max_weight=4).ok
    assert not check_virasoro_vector(M6, {OMEGA: 1}, 2, max_weight=4).ok
    table, rep = initial_morphism(M6, {OMEGA: 1}, 1, max_weight=5)
    assert rep.ok
    assert all(table[lam] == {lam: 1} for lam in table)


def test_initial_morphism_rejects_bad_candidate(M6):
    with pytest.raises(NotAVirasoroVector):
        initial_morphism(M6, {OMEGA: 2}, 1, max_weight=4)


def test_verma_field_property():
    assert check_verma_field_property(VermaModule(Integers(), 1, 5)).ok


def test_top_weight_escapes(M6):
    with pytest.raises(TruncationEscape):
        M6.nth_product({OMEGA: 1}, -3, {(2, 2): 1})


@settings(max_examples=40, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-5, 5))
def test_bracket_relation_on_vacuum_descendants(m, n, cprime):
    V = build_M(Integers(), cprime, 10)
    for lam in V.all_labels(4):
        x = {lam: 1}
        try:
            lhs = straighten_state(m, V.apply_L(n, x), cprime)
            lhs2 = straighten_state(n, V.apply_L(m, x), cprime)
            a, k = vir_bracket(m, n, cprime)
            rhs = V.apply_L(m + n, x)
        except TruncationEscape:
            continue
        diff = {key: lhs.get(key, 0) - lhs2.get(key, 0) for key in set(lhs) | set(lhs2)}
        want = {key: a * c for key, c in rhs.items()}
        if k:
            want[lam] = want.get(lam, 0) + k
        assert {key: c for key, c in diff.items() if c} == {key: c for key, c in want.items() if c}
