"""Relabeling, Latin hypercube expansion, and nested design extraction."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nestfill.algebra import GaloisGroup, field_make, identity_projection
from nestfill.arrays import NestedPair
from nestfill.catalog import catalog_get
from nestfill.constructions import (
    full_factorial,
    ndm_theorem1,
    noa_theorem4,
    trivial_oa,
    zero_sum_noa,
)
from nestfill.nsfd import (
    extract_nested,
    is_uniform,
    nested_design,
    oa_lhd,
    relabel,
    strat_counts,
    to_design,
)


@pytest.fixture(scope="module")
def ex8_pair():
    gf8 = field_make(2, 3)
    return noa_theorem4(trivial_oa(GaloisGroup(gf8)), ndm_theorem1(2))


# ---------------------------------------------------------------------------
# relabel
# ---------------------------------------------------------------------------


def test_relabel_fiber_labels(ex8_pair):
    r = relabel(ex8_pair)
    proj = ex8_pair.projections[0]
    table = proj.np_table()
    label_of = {}
    col = ex8_pair.parent.data[:, 0]
    for idx, lab in zip(col, r.labels[:, 0]):
        label_of[proj.source.text_at(int(idx))] = int(lab)
    assert label_of == {
        "0": 1, "x^2": 2, "1": 3, "x^2+1": 4, "x": 5, "x^2+x": 6, "x+1": 7, "x^2+x+1": 8,
    }
    assert r.group_sizes == (2, 2, 2, 2)


def test_relabel_matches_published_table(ex8_pair):
    r = relabel(ex8_pair)
    table4 = catalog_get("ex14_table4").payload.data + 1
    assert np.array_equal(r.labels, table4)


def test_relabel_identity_projection_gives_lex_labels():
    pair = zero_sum_noa(4, 4)
    r = relabel(pair)
    assert np.array_equal(r.labels, pair.parent.data + 1)


def test_relabel_group_consecutive_consistency(ex8_pair):
    # ceil(label / e) - 1 equals the collapsed level's index, entrywise
    r = relabel(ex8_pair)
    for j, proj in enumerate(ex8_pair.projections):
        e = r.group_sizes[j]
        collapsed = proj.np_table()[ex8_pair.parent.data[:, j]]
        assert np.array_equal((r.labels[:, j] - 1) // e, collapsed)


def test_relabel_rejects_failing_pair():
    pair = zero_sum_noa(6, 3)
    broken = NestedPair(pair.parent, tuple(range(9)), pair.projections)
    with pytest.raises(ValueError, match="does not verify"):
        relabel(broken)


# ---------------------------------------------------------------------------
# rank expansion
# ---------------------------------------------------------------------------


def test_ranks_equal_labels_when_q_is_one():
    # single column listing each level once: n = s, so ranks equal labels
    pair = NestedPair(
        trivial_oa(GaloisGroup(field_make(2, 2))),
        (0, 1, 2, 3),
        (identity_projection(GaloisGroup(field_make(2, 2))),),
    )
    r = relabel(pair)
    assert np.array_equal(oa_lhd(r), r.labels)


def test_deterministic_ranks_in_row_order():
    pair = zero_sum_noa(2, 2)
    r = relabel(pair)
    ranks = oa_lhd(r)
    # column 0 labels are (1,1,2,2): row-order ranking gives (1,2,3,4)
    assert r.labels[:, 0].tolist() == [1, 1, 2, 2]
    assert ranks[:, 0].tolist() == [1, 2, 3, 4]


@pytest.mark.parametrize("seed", range(100))
def test_seeded_ranks_stay_within_level_blocks(seed, ex8_pair):
    r = relabel(ex8_pair)
    ranks = oa_lhd(r, seed=seed)
    n = r.n_rows
    for j in range(r.n_cols):
        s = r.level_counts[j]
        q = n // s
        assert np.array_equal(np.sort(ranks[:, j]), np.arange(1, n + 1))
        blocks = (ranks[:, j] - 1) // q
        assert np.array_equal(blocks, r.labels[:, j] - 1)


# ---------------------------------------------------------------------------
# designs
# ---------------------------------------------------------------------------


def test_midpoint_values():
    ranks = np.arange(1, 9)[:, None]
    d = to_design(ranks, midpoint=True)
    assert d.points[2, 0] == pytest.approx(0.3125)
    one = to_design(np.array([[1]]), midpoint=True)
    assert one.points[0, 0] == pytest.approx(0.5)


def test_design_rejects_non_permutation():
    with pytest.raises(ValueError, match="permutation"):
        to_design(np.array([[1], [1]]), midpoint=True)


def test_design_needs_seed_or_midpoint():
    ranks = np.arange(1, 5)[:, None]
    with pytest.raises(ValueError, match="seed"):
        to_design(ranks)
    with pytest.raises(ValueError, match="no seed"):
        to_design(ranks, seed=3, midpoint=True)


@given(st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_jittered_points_stay_in_rank_cells(seed):
    ranks = np.arange(1, 9)[:, None]
    d = to_design(ranks, seed=seed)
    assert np.all(d.points >= (ranks - 1) / 8)
    assert np.all(d.points < ranks / 8)


def test_extract_nested_rows(ex8_pair):
    nd = nested_design(ex8_pair, midpoint=True)
    assert nd.child_points.shape == (32, 4)
    assert np.array_equal(nd.child_points, nd.full.points[list(ex8_pair.child_rows)])


def test_extract_nested_child_all_rows():
    pair = zero_sum_noa(4, 4)
    nd = nested_design(pair, midpoint=True)
    assert np.array_equal(nd.child_points, nd.full.points)


def test_extract_requires_matching_pair(ex8_pair):
    nd = nested_design(ex8_pair, midpoint=True)
    other = zero_sum_noa(4, 2)
    with pytest.raises(ValueError, match="not generated"):
        extract_nested(nd.full, other)


def test_floor_invariance_across_seeds(ex8_pair):
    base = nested_design(ex8_pair, midpoint=True)
    n = base.full.n_rows
    for seed in (1, 2, 3):
        d = nested_design(ex8_pair, seed=seed)
        assert np.array_equal(
            np.floor(d.full.points * n), np.floor(base.full.points * n)
        )
        assert np.array_equal(d.full.ranks, base.full.ranks)


def test_seed_reproducibility(ex8_pair):
    a = nested_design(ex8_pair, seed=99)
    b = nested_design(ex8_pair, seed=99)
    assert np.array_equal(a.full.points, b.full.points)
    c = nested_design(ex8_pair, seed=100)
    assert not np.array_equal(c.full.points, a.full.points)


# ---------------------------------------------------------------------------
# stratification
# ---------------------------------------------------------------------------


def test_strat_counts_single_cell(ex8_pair):
    nd = nested_design(ex8_pair, midpoint=True)
    counts = strat_counts(nd.full.points, (0, 1), (1, 1))
    assert counts[0, 0] == 64


def test_strat_counts_published_grids(ex8_pair):
    nd = nested_design(ex8_pair, seed=4)
    for j in range(4):
        for k in range(j + 1, 4):
            assert is_uniform(strat_counts(nd.full.points, (j, k), (8, 8)))
            assert is_uniform(strat_counts(nd.child_points, (j, k), (4, 4)))


def test_strat_counts_empty_design_rejected():
    with pytest.raises(ValueError, match="empty"):
        strat_counts(np.empty((0, 2)), (0, 1), (2, 2))


def test_one_dimensional_balance(ex8_pair):
    nd = nested_design(ex8_pair, seed=8)
    n = nd.full.n_rows
    for j in range(nd.full.n_cols):
        cells = np.floor(nd.full.points[:, j] * n).astype(int)
        assert np.array_equal(np.sort(cells), np.arange(n))
