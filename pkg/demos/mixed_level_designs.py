"""Walkthrough: mixed-level nested arrays by block juxtaposition and by
paired-level difference matrices.

First route: cross the 24-run full factorial of a 6-level and a 4-level
factor with one difference matrix per factor, giving an OA(288, 6^6 4^12)
whose 72-run child collapses to an OA(72, 3^6 2^12).  Second route: pair a
D(4,4,4) with a D(3,3,3) into a 12-level matrix and expand it into an
OA(144, 12^2 4^2 3^1) containing an OA(72, 6^2 2^2 3^1).

Run:  python demos/mixed_level_designs.py
"""

from collections import Counter

from nestfill import (
    GaloisGroup,
    catalog_derive,
    catalog_get,
    check_nested,
    field_make,
    identity_projection,
    mixed_dm_lemma7,
    mult_table,
    nested_design,
    noa_theorem9,
    strat_counts,
    truncation,
    ww_from_noas,
)


def level_profile(groups):
    counts = Counter(g.order for g in groups)
    return " ".join(f"{s}^{c}" for s, c in sorted(counts.items(), reverse=True))


print("== block juxtaposition ==")
noa = catalog_get("ex12_noa").payload
blocks = [
    ((0,), catalog_derive("d_12_6_6")),
    ((1,), catalog_get("seberry_12_12_4").payload),
]
pair = ww_from_noas(noa, blocks)
print(f"parent: {pair.parent.n_rows} runs, levels {level_profile(pair.parent.groups)}")
child = pair.collapsed_child()
print(f"child : {child.n_rows} runs, levels {level_profile(child.groups)}")
print(check_nested(pair, "noa").describe())

print("\n== paired-level route ==")
gf4, gf3 = field_make(2, 2), field_make(3, 1)
d = mixed_dm_lemma7(mult_table(gf4), mult_table(gf3), 2)
print("paired difference matrix:")
for row in d.texts():
    print("   " + " ".join(f"{t:>7}" for t in row))
t9 = noa_theorem9(d, truncation(gf4, field_make(2, 1)), identity_projection(GaloisGroup(gf3)))
print(f"parent: {t9.parent.n_rows} runs, levels {level_profile(t9.parent.groups)}")
child9 = t9.collapsed_child()
print(f"child : {child9.n_rows} runs, levels {level_profile(child9.groups)}")
print(check_nested(t9, "noa").describe())

print("\n== mixed-level design stratification ==")
nd = nested_design(t9, midpoint=True)
for j, k in [(0, 2), (0, 4), (2, 4)]:
    gl = (t9.projections[j].source.order, t9.projections[k].source.order)
    gh = (t9.projections[j].target.order, t9.projections[k].target.order)
    full = strat_counts(nd.full.points, (j, k), gl)
    sub = strat_counts(nd.child_points, (j, k), gh)
    print(
        f"columns ({j+1},{k+1}): full uniform on {gl[0]}x{gl[1]} "
        f"({full.min()} per cell), subset uniform on {gh[0]}x{gh[1]} ({sub.min()} per cell)"
    )
