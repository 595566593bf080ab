"""Shared test helpers: independent oracles and randomized inputs.

The oracles here deliberately avoid the library's checker code paths: pair
counting is redone with plain dictionaries, and uniformity is judged by
sorting multisets.  Tests that compare library verdicts against these keep
the two routes honest.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from nestfill.algebra import add_table, field_make, neg_table
from nestfill.arrays import LevelArray


def naive_pair_counts(data, i, j):
    """Definition-level recount of ordered level pairs in columns (i, j)."""
    counts = {}
    for row in data:
        key = (int(row[i]), int(row[j]))
        counts[key] = counts.get(key, 0) + 1
    return counts


def naive_is_oa(arr: LevelArray) -> bool:
    n, m = arr.shape
    for i in range(m):
        for j in range(i + 1, m):
            si, sj = arr.groups[i].order, arr.groups[j].order
            if n % (si * sj):
                return False
            counts = naive_pair_counts(arr.data, i, j)
            want = n // (si * sj)
            for a in range(si):
                for b in range(sj):
                    if counts.get((a, b), 0) != want:
                        return False
    return True


def naive_is_dm(arr: LevelArray) -> bool:
    g = arr.groups[0]
    add, neg = add_table(g), neg_table(g)
    b, m = arr.shape
    if b % g.order:
        return False
    expected = sorted(list(range(g.order)) * (b // g.order))
    for i, j in itertools.permutations(range(m), 2):
        diffs = sorted(
            int(add[arr.data[r, i], neg[arr.data[r, j]]]) for r in range(b)
        )
        if diffs != expected:
            return False
    return True


def randomize_array(arr: LevelArray, rng: np.random.Generator) -> LevelArray:
    """Row/column permutations plus a random constant per column; all three
    moves preserve both the orthogonal-array and difference-matrix
    properties."""
    tab = add_table(arr.groups[0])
    data = arr.data[rng.permutation(arr.n_rows), :]
    data = data[:, rng.permutation(arr.n_cols)]
    shifts = rng.integers(0, arr.groups[0].order, size=arr.n_cols)
    data = tab[data, shifts[None, :]]
    return LevelArray(arr.groups, data)


@pytest.fixture(scope="session")
def gf2():
    return field_make(2, 1)


@pytest.fixture(scope="session")
def gf4():
    return field_make(2, 2)


@pytest.fixture(scope="session")
def gf8():
    return field_make(2, 3)


@pytest.fixture(scope="session")
def gf9():
    return field_make(3, 2)
