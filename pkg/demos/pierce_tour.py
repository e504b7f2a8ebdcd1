"""Idempotents, the Stone space and the Pierce bundle of small finite examples.

Run with ``python3 demos/pierce_tour.py``.
"""

from vrx.cli import build_instance
from vrx.pierce import boolean_ring, build_pierce_bundle, check_global_sections_iso, is_vnr, stone_space
from vrx.structure import find_idempotents

for spec in ["comm:zmod:30", "comm:zmod:60", "dsum(comm:zmod:3,virasoro:zmod:3:1)"]:
    V = build_instance(spec, 6)
    ids = find_idempotents(V)
    points = stone_space(boolean_ring(V))
    bundle = build_pierce_bundle(V)
    vnr, witness, _ = is_vnr(V)
    print(spec)
    print("  idempotents:", len(ids), " stone points:", len(points))
    print("  stalks:", [s.descriptor for s in bundle.stalks])
    print("  global sections iso:", check_global_sections_iso(V).ok)
    print("  von Neumann regular:", vnr, "" if vnr else f"(witness {witness})")
