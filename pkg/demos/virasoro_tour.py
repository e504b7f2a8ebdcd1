"""A short walk through the integral Virasoro vertex ring M_Z(1, 0).

Run with ``python3 demos/virasoro_tour.py``.
"""

from vrx.basering import Integers, ModN
from vrx.vertexcore import locality_order
from vrx.virasoro import OMEGA, build_M, check_base_change, check_dm_power, graded_dimensions


def brief(rep):
    return f"{'ok' if rep.ok else 'FAILED'} ({rep.passed} passed, {rep.skipped} skipped)"

V = build_M(Integers(), 1, 8)
print("graded dimensions up to weight 8:", graded_dimensions(V))

# omega(n) omega for the modes that survive
omega = {OMEGA: 1}
for n in range(-1, 5):
    print(f"omega({n}) omega =", V.show(V.nth_product(omega, n, omega)))

order, witness = locality_order(V, omega, omega, 8)
print("omega is local with itself of order", order, "first failure", witness)

print("m! D_m = L(-1)^m:", brief(check_dm_power(V, 5)))

W = build_M(ModN(6), 1, 8, native=True)
print("reduction mod 6 agrees:", brief(check_base_change(V, W, 8)))
