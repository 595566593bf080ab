"""Walkthrough: from a Galois-field multiplication table to a nested
space-filling design.

Builds the D(8,4,8) difference matrix whose 4-row child collapses onto
GF(4), crosses it with the trivial OA(8,1,8) to get an OA(64,4,8) nested
orthogonal array, and turns that into a 64-point design containing a
32-point subset.  Every object is re-verified along the way.

Run:  python demos/equal_level_designs.py
"""

import numpy as np

from nestfill import (
    GaloisGroup,
    check_dm,
    check_nested,
    field_make,
    mult_table,
    ndm_theorem1,
    nested_design,
    noa_theorem4,
    relabel,
    strat_counts,
    trivial_oa,
)

gf8 = field_make(2, 3)

print("== GF(8) multiplication table, a D(8,8,8) ==")
table = mult_table(gf8)
print(check_dm(table).describe())
for labels, row in zip(table.label_texts(), table.texts()):
    print(f"{labels:>8} | " + " ".join(f"{t:>8}" for t in row))

print("\n== nested difference matrix: columns 0,1,x,x+1; child rows 0,1,x^2+x,x^2+x+1 ==")
ndm = ndm_theorem1(2)
print(check_nested(ndm, "ndm").describe())
print("collapsed child over GF(4):")
for row in ndm.collapsed_child().texts():
    print("   " + " ".join(f"{t:>5}" for t in row))

print("\n== crossing with OA(8,1,8): an OA(64,4,8) containing an OA(32,4,4) ==")
pair = noa_theorem4(trivial_oa(GaloisGroup(gf8)), ndm)
print(check_nested(pair, "noa").describe())
print("level relabeling (first runs):")
print(relabel(pair).labels[:8])

print("\n== the nested design: 64 points over 32 points ==")
nd = nested_design(pair, seed=2024)
print("full design:", nd.full.points.shape, " subset:", nd.child_points.shape)
for j, k in [(0, 1), (1, 3)]:
    full = strat_counts(nd.full.points, (j, k), (8, 8))
    sub = strat_counts(nd.child_points, (j, k), (4, 4))
    print(
        f"columns ({j+1},{k+1}): every 8x8 cell holds {full.min()}..{full.max()} "
        f"full points, every 4x4 cell holds {sub.min()}..{sub.max()} subset points"
    )
print("first four points:")
print(np.round(nd.full.points[:4], 4))
