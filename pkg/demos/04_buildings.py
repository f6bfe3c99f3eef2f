"""Vertices near x0: subspaces for split p, self-dual lattices for inert p.

    python demos/04_buildings.py          # quick counts
    python demos/04_buildings.py --full   # full p = 3 partition (under a minute)
"""

import sys

from ramanujan5 import building, gates, modn

p = 11
lines = sum(1 for _ in building.split_labels(p, dims=[1]))
print(f"p = {p}: {lines} lines, {building.split_label_count(p)} labels in all, "
      f"formula {gates.gate_count_formula(p)}")
print("split valencies:", building.valency_table(p, "split"))

q = 3
model = building.InertModel(q, modn.build_Bn(q * q).hermitian())
L, P = model.isotropic_subspaces(1), model.isotropic_subspaces(2)
print(f"p = {q}: {len(L)} isotropic lines, {len(P)} isotropic planes")
print(f"labels over a line: {len(model.labels_over(L[0]))}, over a plane: {len(model.labels_over(P[0]))}")
print(f"distinct labels {gates.inert_label_count(q)}, closed form {gates.gate_count_formula(q)}")

if "--full" in sys.argv:
    part = model.partition()
    total = sum(len(v) for v in part.values())
    print("enumerated:", total, "fibre sizes:", sorted({len(v) for v in part.values()}))
    print("fibres as the closed form counts them:",
          sorted({len(building.paper_fibers(model, W, part)) for W in (L[0], P[0])}))
