"""Polynomials with divided-power derivations as a commutative vertex ring.

Run with ``python3 demos/hs_polynomials.py``.
"""

from vrx.cli import build_instance
from vrx.structure import center_truncated
from vrx.vertexcore import SUITES


def brief(rep):
    return f"{'ok' if rep.ok else 'FAILED'} ({rep.passed} passed, {rep.skipped} skipped)"

V = build_instance("commhs:poly:z:x:deg=8")
x = {1: 1}
for n in (-1, -2, -3):
    print(f"x({n}) x =", V.show(V.nth_product(x, n, x)))

for name in ("vacuum", "skew", "commutator", "associator"):
    print(name, brief(SUITES[name](V, 0, 3)))

print("center generators:", center_truncated(V).generators())
