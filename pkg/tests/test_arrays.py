"""Checkers, structural operations, and the CSV/JSON formats."""

import itertools

import numpy as np
import pytest

from conftest import naive_is_dm, naive_is_oa, randomize_array

from nestfill.algebra import (
    GaloisGroup,
    ProductGroup,
    ResidueGroup,
    component,
    field_make,
    identity_projection,
    modulus,
    residue,
    truncation,
)
from nestfill.arrays import (
    LevelArray,
    NestedPair,
    cast_group,
    check_dm,
    check_nested,
    check_oa,
    collapse,
    hstack,
    kronecker_add,
    load_bundle,
    normalize_dm,
    save_bundle,
    subcols,
    subrows,
)
from nestfill.catalog import catalog_derive, catalog_get
from nestfill.constructions import (
    full_factorial,
    mult_table,
    ndm_theorem1,
    rao_hamming_oa,
    trivial_oa,
    zero_sum_noa,
)


Z2 = ResidueGroup(2)


def test_full_factorial_is_oa():
    arr = full_factorial((Z2, Z2))
    assert check_oa(arr)


def test_repeated_row_fails_with_witness():
    arr = LevelArray((Z2, Z2), np.array([[0, 0], [0, 1], [1, 0], [0, 0]]))
    v = check_oa(arr)
    assert not v
    assert v.witness["columns"] == (0, 1)
    assert v.witness["count"] != v.witness["expected"]


def test_rao_hamming_9_4_3_passes():
    assert check_oa(rao_hamming_oa(field_make(3, 1), 2))


def test_check_oa_divisibility_is_a_fail_verdict():
    z3 = ResidueGroup(3)
    arr = LevelArray((Z2, z3), np.array([[0, 0], [1, 1], [0, 2], [1, 0]]))
    v = check_oa(arr)
    assert not v and "divisible" in v.reason


def test_check_oa_against_naive_recount_on_random_arrays():
    # fifty randomized arrays, mixing passing and corrupted ones
    rng = np.random.default_rng(20240917)
    bases = [
        full_factorial((Z2, Z2, Z2)),
        rao_hamming_oa(field_make(2, 2), 2),
        zero_sum_noa(6, 3).parent,
    ]
    for trial in range(50):
        arr = randomize_array(bases[trial % len(bases)], rng)
        if trial % 2:
            data = arr.data.copy()
            r = rng.integers(0, arr.n_rows)
            c = rng.integers(0, arr.n_cols)
            data[r, c] = (data[r, c] + 1) % arr.groups[c].order
            arr = LevelArray(arr.groups, data)
        assert bool(check_oa(arr)) == naive_is_oa(arr)


def test_mult_table_is_dm(gf4):
    assert check_dm(mult_table(gf4))


def test_two_by_two_dm(gf2):
    arr = LevelArray.from_text(GaloisGroup(gf2), "0 0\n0 1")
    assert check_dm(arr)


def test_single_column_dm_passes(gf4):
    assert check_dm(subcols(mult_table(gf4), [1]))


def test_check_dm_mixed_alphabets_is_an_error(gf4):
    arr = LevelArray((GaloisGroup(gf4), Z2), np.array([[0, 0], [1, 1]]))
    with pytest.raises(ValueError, match="single alphabet"):
        check_dm(arr)


def test_check_dm_against_naive(gf4, gf8):
    rng = np.random.default_rng(7)
    for base in [mult_table(gf4), mult_table(gf8), catalog_derive("d_12_6_6")]:
        arr = randomize_array(base, rng)
        assert bool(check_dm(arr)) == naive_is_dm(arr)
        data = arr.data.copy()
        data[0, 1] = (data[0, 1] + 1) % arr.groups[0].order
        bad = LevelArray(arr.groups, data)
        assert bool(check_dm(bad)) == naive_is_dm(bad) == False


# ---------------------------------------------------------------------------
# collapse
# ---------------------------------------------------------------------------


def test_collapse_identity_is_noop(gf8):
    arr = mult_table(gf8)
    out = collapse(arr, identity_projection(GaloisGroup(gf8)))
    assert np.array_equal(out.data, arr.data)


def test_collapse_preserves_dm_verdict(gf8, gf4):
    # a passing difference matrix stays passing after a balanced collapse
    out = collapse(mult_table(gf8), truncation(gf8, gf4))
    assert check_dm(out)


def test_collapse_any_balanced_projection_keeps_oa(gf4, gf8):
    cases = [
        (rao_hamming_oa(gf8, 2), truncation(gf8, gf4)),
        (rao_hamming_oa(gf8, 2), modulus(gf8, field_make(2, 1))),
        (zero_sum_noa(6, 3).parent, residue(6, 2)),
    ]
    for arr, proj in cases:
        assert check_oa(collapse(arr, proj))


def test_collapse_source_mismatch(gf4, gf8):
    with pytest.raises(ValueError, match="does not match"):
        collapse(mult_table(gf4), truncation(gf8, gf4))


# ---------------------------------------------------------------------------
# kronecker_add
# ---------------------------------------------------------------------------


def test_kronecker_oa_times_dm_is_oa(gf2):
    a = cast_group(rao_hamming_oa(gf2, 2), GaloisGroup(gf2))
    d = LevelArray.from_text(GaloisGroup(gf2), "0 0\n0 1")
    h = kronecker_add(a, d)
    assert h.shape == (8, 6)
    assert check_oa(h)


def test_kronecker_zero_column_replicates(gf8):
    a = mult_table(gf8)
    zero = LevelArray((GaloisGroup(gf8),), np.zeros((1, 1), dtype=int))
    h = kronecker_add(a, zero)
    assert np.array_equal(h.data, a.data)


def test_kronecker_row_column_ordering(gf2):
    g = GaloisGroup(gf2)
    a = LevelArray.from_text(g, "0 1\n1 0")
    d = LevelArray.from_text(g, "0 0\n0 1")
    h = kronecker_add(a, d)
    # row i*2 + r, column j*2 + k
    assert h.texts() == [
        ["0", "0", "1", "1"],
        ["0", "1", "1", "0"],
        ["1", "1", "0", "0"],
        ["1", "0", "0", "1"],
    ]


def test_kronecker_alphabet_mismatch(gf2, gf4):
    with pytest.raises(ValueError, match="mismatch"):
        kronecker_add(mult_table(gf2), mult_table(gf4))


def test_kronecker_gf8_pair_is_oa(gf8):
    h = kronecker_add(rao_hamming_oa(gf8, 2), mult_table(gf8))
    assert h.shape == (512, 72)
    assert check_oa(h)


@pytest.mark.parametrize(
    "make_pair",
    [
        lambda: (field_make(2, 3), field_make(2, 2), "truncation"),
        lambda: (field_make(2, 3), field_make(2, 1), "truncation"),
    ],
)
def test_collapse_commutes_with_kronecker(make_pair):
    f1, f2, _ = make_pair()
    proj = truncation(f1, f2)
    a = rao_hamming_oa(f1, 2)
    d = mult_table(f1)
    lhs = collapse(kronecker_add(a, d), proj)
    rhs = kronecker_add(collapse(a, proj), collapse(d, proj))
    assert np.array_equal(lhs.data, rhs.data)


def test_collapse_commutes_with_kronecker_residue():
    proj = residue(6, 3)
    pair = zero_sum_noa(6, 3)
    d = catalog_derive("d_12_6_6")
    lhs = collapse(kronecker_add(pair.parent, d), proj)
    rhs = kronecker_add(collapse(pair.parent, proj), collapse(d, proj))
    assert np.array_equal(lhs.data, rhs.data)


# ---------------------------------------------------------------------------
# normalize_dm
# ---------------------------------------------------------------------------


def test_normalize_already_normal(gf4):
    d = mult_table(gf4)
    out = normalize_dm(d)
    assert np.array_equal(out.data, d.data)


def test_normalize_seberry():
    d = catalog_get("seberry_12_12_4").payload
    out = normalize_dm(d)
    assert np.all(out.data[:, 0] == 0)
    assert check_dm(out)
    for j in range(1, out.n_cols):
        counts = np.bincount(out.data[:, j], minlength=4)
        assert counts.min() == counts.max()


def test_normalize_preserves_difference_multisets(gf8):
    from nestfill.algebra import sub_table

    d = mult_table(gf8)
    out = normalize_dm(d)
    sub = sub_table(GaloisGroup(gf8))
    for i, j in itertools.combinations(range(d.n_cols), 2):
        before = sorted(sub[d.data[:, i], d.data[:, j]].tolist())
        after = sorted(sub[out.data[:, i], out.data[:, j]].tolist())
        assert before == after


def test_normalize_rejects_non_dm(gf2):
    bad = LevelArray((GaloisGroup(gf2),) * 2, np.array([[0, 0], [0, 0]]))
    with pytest.raises(ValueError, match="not a difference matrix"):
        normalize_dm(bad)


# ---------------------------------------------------------------------------
# subrows / subcols / labels
# ---------------------------------------------------------------------------


def test_subrows_all_is_identity(gf4):
    d = mult_table(gf4)
    assert np.array_equal(subrows(d, range(4)).data, d.data)


def test_subrows_by_labels_reproduces_published_child(gf8, gf4):
    pair = ndm_theorem1(2)
    d2 = subrows(pair.parent, pair.child_rows)
    assert d2.label_texts() == ["0", "1", "x^2+x", "x^2+x+1"]
    phi_d2 = collapse(d2, truncation(gf8, gf4))
    assert phi_d2.texts() == catalog_get("ex3_phi_d2").payload.texts()


def test_subcols_of_seberry_matches_derived_entry():
    d = catalog_get("seberry_12_12_4").payload
    assert np.array_equal(subcols(d, (0, 2, 3, 4)).data, catalog_derive("d_12_4_4").data)


def test_subrows_rejects_duplicates(gf4):
    with pytest.raises(ValueError, match="duplicate"):
        subrows(mult_table(gf4), (0, 0))


def test_subcols_rejects_out_of_range(gf4):
    with pytest.raises(ValueError, match="out of range"):
        subcols(mult_table(gf4), (5,))


# ---------------------------------------------------------------------------
# nested pairs
# ---------------------------------------------------------------------------


def test_self_nesting_passes(gf4):
    arr = full_factorial((GaloisGroup(gf4),) * 2)
    ident = identity_projection(GaloisGroup(gf4))
    pair = NestedPair(arr, tuple(range(16)), (ident, ident))
    assert check_nested(pair, "noa")


def test_theorem1_nested_pass():
    assert check_nested(ndm_theorem1(2), "ndm")


def test_zero_sum_nested_pass():
    assert check_nested(zero_sum_noa(4, 2), "noa")


def test_nested_projection_source_mismatch(gf4, gf8):
    arr = mult_table(gf4)
    with pytest.raises(ValueError, match="source"):
        NestedPair(arr, (0, 1), (truncation(gf8, gf4),) * 4)


def test_nested_child_rows_validated(gf4):
    arr = mult_table(gf4)
    ident = identity_projection(GaloisGroup(gf4))
    with pytest.raises(ValueError, match="distinct"):
        NestedPair(arr, (0, 0), (ident,) * 4)
    with pytest.raises(ValueError, match="range"):
        NestedPair(arr, (0, 9), (ident,) * 4)


def test_check_nested_reports_failing_side(gf4):
    # corrupt the child rows so only the collapsed child fails
    pair = zero_sum_noa(4, 2)
    broken = NestedPair(pair.parent, (0, 1, 2, 3), pair.projections)
    v = check_nested(broken, "noa")
    assert not v and "child" in v.reason


# ---------------------------------------------------------------------------
# cast and io
# ---------------------------------------------------------------------------


def test_cast_gf4_to_z2_square(gf4):
    d = mult_table(gf4)
    z2sq = ProductGroup((Z2, Z2))
    out = cast_group(d, z2sq)
    assert check_dm(out)
    assert out.texts()[1] == ["00", "01", "10", "11"]


def test_cast_incompatible_rejected(gf4):
    with pytest.raises(ValueError, match="addition tables"):
        cast_group(mult_table(gf4), ResidueGroup(4))


def test_bundle_round_trip(tmp_path, gf8, gf4):
    pair = ndm_theorem1(2)
    prefix = str(tmp_path / "thm1")
    save_bundle(prefix, pair, "ndm")
    loaded, kind = load_bundle(prefix)
    assert kind == "ndm"
    assert isinstance(loaded, NestedPair)
    assert np.array_equal(loaded.parent.data, pair.parent.data)
    assert loaded.child_rows == pair.child_rows
    assert loaded.projections == pair.projections
    assert loaded.parent.row_labels == pair.parent.row_labels


def test_bundle_round_trip_mixed(tmp_path):
    entry = catalog_get("ex13_d")
    prefix = str(tmp_path / "mixed")
    save_bundle(prefix, entry.payload, None)
    loaded, _ = load_bundle(prefix)
    assert loaded.groups == entry.payload.groups
    assert np.array_equal(loaded.data, entry.payload.data)


def test_hstack_requires_equal_rows(gf4):
    with pytest.raises(ValueError, match="row counts"):
        hstack([mult_table(gf4), trivial_oa(ResidueGroup(3))])
