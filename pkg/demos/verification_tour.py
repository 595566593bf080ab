"""Walkthrough: the brute-force verifiers and what their witnesses say.

Everything this package constructs is gated on definition-level counting:
orthogonal arrays by ordered-pair counts over every column pair, difference
matrices by difference counts over every ordered column pair.  This script
shows passing verdicts on the built-in matrices, then corrupts one cell and
prints the resulting witness.

Run:  python demos/verification_tour.py
"""

from nestfill import (
    LevelArray,
    catalog_get,
    catalog_names,
    check_dm,
    check_oa,
    field_make,
    qtw_noa,
    search_nested_rows,
    truncation,
)

print("== catalog entries re-verified ==")
for name in catalog_names():
    payload = catalog_get(name).payload
    print(f"  {name:>18}: validated at load")

print("\n== a passing verdict ==")
seberry = catalog_get("seberry_12_12_4").payload
print("seberry_12_12_4:", check_dm(seberry).describe())

print("\n== one corrupted cell ==")
data = seberry.data.copy()
data[5, 7] = (data[5, 7] + 1) % 4
broken = LevelArray(seberry.groups, data)
print("after flipping row 6, column 8:", check_dm(broken).describe())

print("\n== the same idea for orthogonal arrays ==")
pair = qtw_noa(field_make(2, 3), field_make(2, 2), 2)
print("parent of the modulus-family array:", check_oa(pair.parent).describe())
data = pair.parent.data.copy()
data[0, 0] = (data[0, 0] + 1) % 8
print("after one flip:", check_oa(LevelArray(pair.parent.groups, data)).describe())

print("\n== searching for nested row subsets ==")
from nestfill import ndm_theorem1

gf8, gf4 = field_make(2, 3), field_make(2, 2)
d1 = ndm_theorem1(2).parent
found = search_nested_rows(d1, 4, truncation(gf8, gf4), budget=70)
print("first 4-row subset whose collapse verifies:", found)
print("rows:", [d1.label_texts()[i] for i in found])
