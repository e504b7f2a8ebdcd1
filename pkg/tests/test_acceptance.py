"""Acceptance criteria, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line; the lines are repeated in the
pytest terminal summary.  Running this file directly prints the lines only.
"""

import json
import sys
import time
from contextlib import redirect_stdout
from io import StringIO

import pytest

from vrx.basering import Integers, ModN
from vrx.cli import build_instance, main
from vrx.exactnum import check_binomial_identities
from vrx.fields import reconstruct_from_generators, taylor_suite
from vrx.pierce import (boolean_ring, build_pierce_bundle, check_global_sections_iso,
                        check_vnr_simple_stalks, is_vnr, stone_space)
from vrx.structure import (center_truncated, check_tensor_hs, check_unit, find_idempotents,
                           find_unit_inverse, tensor_product)
from vrx.vertexcore import SUITES, jacobi_suite, locality_order, _samples
from vrx.virasoro import (OMEGA, build_M, check_base_change, check_dm_canonical, check_dm_power,
                          check_l0_grading, check_virasoro_vector, graded_dimensions)

LINES = []


def count_partitions(w, least=2):
    table = [1] + [0] * w
    for part in range(least, w + 1):
        for k in range(part, w + 1):
            table[k] += table[k - part]
    return table[w]


def report(num, title, ok, elapsed, budget=None, detail=""):
    within = budget is None or elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    timing = f"{elapsed:.2f}s" + (f" (budget {budget}s)" if budget else "")
    line = f"{status} criterion {num:>2}: {title} [{timing}]" + (f" {detail}" if detail else "")
    LINES.append(line)
    print(line)
    return ok and within


def test_c01_binomial_identities():
    t = time.perf_counter()
    reps = check_binomial_identities(20, 20, 20)
    ok = all(r.passed for r in reps)
    detail = " ".join(f"{r.identity}={r.checked}" for r in reps)
    assert report(1, "binomial identities exhaustive", ok, time.perf_counter() - t, 5, detail)


def test_c02_virasoro_dimensions():
    t = time.perf_counter()
    V = build_M(Integers(), 1, 10)
    dims = graded_dimensions(V)
    ok = dims == [count_partitions(w) for w in range(11)] == [1, 0, 1, 1, 2, 2, 4, 4, 7, 8, 12]
    ok = ok and check_l0_grading(V).ok
    assert report(2, "Virasoro N=10 dimensions and L(0) grading", ok, time.perf_counter() - t, 30,
                  f"dims={dims}")


def test_c03_omega_locality():
    t = time.perf_counter()
    V = build_M(Integers(), 1, 10)
    order, witness = locality_order(V, {OMEGA: 1}, {OMEGA: 1}, 8)
    ok = order == 4 and witness is not None and witness["t"] == 3
    assert report(3, "omega local of order 4, violated at t=3", ok, time.perf_counter() - t, 60,
                  f"order={order}")


def test_c04_jacobi():
    t = time.perf_counter()
    M = build_M(Integers(), 1, 10)
    Zx = build_instance("commhs:poly:z:x:deg=12")
    Z30 = build_instance("comm:zmod:30")
    reps = [jacobi_suite(M, 6, 4),
            jacobi_suite(Zx, 0, 4, samples=_samples(Zx, 0, -6)),
            jacobi_suite(Z30, 0, 4)]
    ok = all(r.ok and r.passed > 0 for r in reps)
    detail = " ".join(f"{r.instance}:{r.passed}/{r.grid_size}" for r in reps)
    assert report(4, "Jacobi residual zero on admissible grid", ok, time.perf_counter() - t, 300, detail)


def test_c05_dm_power_and_recursion():
    t = time.perf_counter()
    M = build_M(Integers(), 1, 10)
    a, b = check_dm_power(M, 6), check_dm_canonical(M)
    assert report(5, "m! D_m = L(-1)^m and D_m recursion", a.ok and b.ok and a.passed and b.passed,
                  time.perf_counter() - t, None, f"power={a.passed} recursion={b.passed}")


DEFAULT_GRID = ["virasoro:z:1", "virasoro:zmod:6:1", "commhs:poly:z:x:deg=12", "comm:zmod:30",
                "dsum(comm:zmod:3,virasoro:zmod:3:1)", "tensor(virasoro:z:1,virasoro:z:1)"]
IDENTITY_SUITES = ["vacuum", "skew", "commutator", "associator", "modeshift", "tc"]


def test_c06_identity_suites_everywhere():
    t = time.perf_counter()
    ok, passed, skipped = True, 0, 0
    for spec in DEFAULT_GRID:
        V = build_instance(spec, 6)
        mw = 4
        reps = [SUITES[name](V, mw, 3) for name in IDENTITY_SUITES] + [taylor_suite(V, mw, 3)]
        for r in reps:
            ok = ok and r.ok and r.passed + r.skipped + r.failed == r.grid_size
            passed += r.passed
            skipped += r.skipped
    assert report(6, "vacuum, skew, commutator, associator, mode shift, tc, Taylor", ok,
                  time.perf_counter() - t, None, f"passed={passed} skipped={skipped}")


def test_c07_reconstruction():
    t = time.perf_counter()
    M = build_M(Integers(), 1, 10)
    fields, rep = reconstruct_from_generators(M, [{OMEGA: 1}], 6, 6)
    ok = rep.ok and rep.details["unreached"] == [] and len(fields) == len(M.all_labels(6))
    assert report(7, "reconstruction from omega agrees mode by mode", ok, time.perf_counter() - t, 120,
                  f"comparisons={rep.passed}")


def test_c08_base_change():
    t = time.perf_counter()
    VZ = build_M(Integers(), 1, 8)
    native = check_base_change(VZ, build_M(ModN(6), 1, 8, native=True), 8)
    lifted = check_base_change(VZ, build_M(ModN(6), 1, 8), 8)
    ok = native.ok and lifted.ok and native.passed > 0
    assert report(8, "structure constants over Z/6 equal reductions", ok, time.perf_counter() - t, None,
                  f"triples={native.passed}")


def test_c09_pierce():
    t = time.perf_counter()
    Z30, Z60 = build_instance("comm:zmod:30"), build_instance("comm:zmod:60")
    D = build_instance("dsum(comm:zmod:3,virasoro:zmod:3:1)", 6)
    checks = []
    checks.append(len(find_idempotents(Z30)) == 8)
    checks.append(len(stone_space(boolean_ring(Z30))) == 3)
    checks.append(sorted(s.descriptor for s in build_pierce_bundle(Z60).stalks)
                  == ["zmod:3", "zmod:4", "zmod:5"])
    checks.append(check_global_sections_iso(Z30).ok)
    checks.append(check_global_sections_iso(D).ok)
    checks.append(is_vnr(Z30)[0] is True)
    vnr60, witness, _ = is_vnr(Z60)
    checks.append(vnr60 is False and witness == {0: 2})
    checks.append(check_vnr_simple_stalks(Z30).ok and check_vnr_simple_stalks(Z60).ok)
    assert report(9, "Pierce suite", all(checks), time.perf_counter() - t, 60,
                  f"checks={sum(checks)}/{len(checks)}")


def test_c10_tensor_product():
    t = time.perf_counter()
    U = build_M(Integers(), 1, 6)
    T = tensor_product(U, U)
    hs = check_tensor_hs(T, 4)
    nu = {**T.pure(U.vacuum, {OMEGA: 1}), **T.pure({OMEGA: 1}, U.vacuum)}
    vv = check_virasoro_vector(T, nu, 2, max_weight=4, box=3)
    assert report(10, "tensor HS and omega(x)1 + 1(x)omega with c'=2", hs.ok and vv.ok,
                  time.perf_counter() - t, None, f"hs={hs.passed} vir={vv.passed}")


def test_c11_center():
    t = time.perf_counter()
    checks = []
    Z30 = build_instance("comm:zmod:30")
    c30 = center_truncated(Z30)
    checks.append(c30.is_everything())
    Zx = build_instance("commhs:poly:z:x:deg=12")
    checks.append(center_truncated(Zx).generators() == [{0: 1}])
    for spec in ["comm:zmod:30", "comm:zmod:60", "dsum(comm:zmod:3,virasoro:zmod:3:1)"]:
        V = build_instance(spec, 6)
        c = center_truncated(V)
        checks.extend(c.contains(e) for e in find_idempotents(V, center=c))
    for a in range(1, 30):
        b = find_unit_inverse(Z30, a, c30)
        if b is not None:
            rep = check_unit(Z30, a, b, c30)
            checks.append(rep.ok and rep.passed == 3)
    assert report(11, "center, idempotents and units", all(checks), time.perf_counter() - t, None,
                  f"checks={sum(checks)}/{len(checks)}")


FULL_RUN = [
    ["verify", "--instance", "virasoro:z:1", "--max-weight", "4", "--json"],
    ["verify", "--instance", "commhs:poly:z:x:deg=12", "--max-weight", "0", "--json"],
    ["verify", "--instance", "comm:zmod:30", "--json"],
    ["pierce", "--instance", "comm:zmod:60", "--json"],
    ["structure", "--instance", "comm:zmod:30", "--op", "center", "--json"],
]


def _full_run():
    buf = StringIO()
    with redirect_stdout(buf):
        codes = [main(list(argv)) for argv in FULL_RUN]
    return codes, buf.getvalue()


def test_c12_determinism():
    t = time.perf_counter()
    codes_a, out_a = _full_run()
    codes_b, out_b = _full_run()
    ok = out_a == out_b and codes_a == codes_b == [0] * len(FULL_RUN)
    ok = ok and all("schemaVersion" in json.loads(chunk) for chunk in _split_json(out_a))
    assert report(12, "byte-identical JSON across two runs", ok, time.perf_counter() - t, None,
                  f"bytes={len(out_a)}")


def _split_json(text):
    dec, pos, out = json.JSONDecoder(), 0, []
    text = text.strip()
    while pos < len(text):
        obj, end = dec.raw_decode(text, pos)
        out.append(json.dumps(obj))
        pos = end
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_c") and callable(fn):
            with redirect_stdout(StringIO()):
                try:
                    fn()
                except AssertionError:
                    failed += 1
    print("\n".join(LINES))
    sys.exit(1 if failed else 0)
