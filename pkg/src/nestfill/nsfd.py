"""From nested orthogonal arrays to nested space-filling point sets.

The pipeline: relabel the levels of a verified nested pair with
group-consecutive integers, expand each level into a block of Latin
hypercube ranks, jitter the ranks into the unit cube, and read off the
child design as the rows belonging to the nested subarray.  Bivariate
stratification of the results can be measured with :func:`strat_counts`.

Labeling is canonical: within each column the level groups (the fibers of
that column's projection) are ordered by the target element's lexicographic
index, sources within a group by their own index, and group ``i`` receives
labels ``(i-1)e + 1 .. ie``.  This makes the relabeled array reproducible
cell for cell.

Randomness contract: one 64-bit seed drives everything through
``numpy.random.SeedSequence`` spawn keys, so results are bit-reproducible
and independent of evaluation order.  The design pipeline in
:func:`nested_design` assigns ranks deterministically (occurrences take
ranks in row order) and spends the seed on the jitter only; consequently
designs from different seeds floor back to the identical rank matrix.
Seeded within-level rank permutation is available separately through
``oa_lhd``.

"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import NestedPair, check_nested

__all__ = [
    "RelabeledArray",
    "Design",
    "NestedDesign",
    "relabel",
    "oa_lhd",
    "to_design",
    "extract_nested",
    "nested_design",
    "strat_counts",
    "is_uniform",
]

_PERM_KEY = 1  # spawn-key namespaces under the master seed
_JITTER_KEY = 2


@dataclass(frozen=True)
class RelabeledArray:
    """Integer-relabeled parent array of a nested pair.

    ``labels`` holds values ``1..s_j`` per column; ``group_sizes[j]`` is the
    fiber size ``e_j = s_j1 / s_j2`` of column j's projection.
    """

    labels: np.ndarray
    level_counts: tuple[int, ...]
    group_sizes: tuple[int, ...]
    pair: NestedPair

    def __post_init__(self) -> None:
        lab = np.asarray(self.labels, dtype=np.int64)
        lab.setflags(write=False)
        object.__setattr__(self, "labels", lab)

    @property
    def n_rows(self) -> int:
        return int(self.labels.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.labels.shape[1])


def relabel(p: NestedPair) -> RelabeledArray:
    """Relabel parent levels 1..s_j so that each projection fiber occupies a
    consecutive label block.

    Levels collapsing to the same child level form one group; groups are
    ordered by collapsed-level index, levels inside a group by their own
    index, and group i takes labels ``(i-1)e_j + 1 .. i e_j``.
    """
    verdict = check_nested(p, "noa")
    if not verdict:
        raise ValueError(f"input does not verify as nested: {verdict.describe()}")
    n, m = p.parent.shape
    cols, sizes, counts = [], [], []
    for j, proj in enumerate(p.projections):
        s1, s2 = proj.source.order, proj.target.order
        e = s1 // s2
        table = proj.np_table()
        label_of = np.empty(s1, dtype=np.int64)
        for t in range(s2):
            fiber = np.flatnonzero(table == t)  # ascending == lexicographic
            label_of[fiber] = t * e + 1 + np.arange(e)
        col = label_of[p.parent.data[:, j]]
        if np.bincount(col, minlength=s1 + 1)[1:].min() != n // s1:
            raise ValueError(f"column {j} of the parent is not level-balanced")
        cols.append(col)
        sizes.append(e)
        counts.append(s1)
    return RelabeledArray(np.column_stack(cols), tuple(counts), tuple(sizes), p)


def oa_lhd(r: RelabeledArray, seed: int | None = None) -> np.ndarray:
    """Expand labels into Latin hypercube ranks, one permutation of 1..n per
    column.

    The ``q = n / s_j`` occurrences of level ``l`` receive the ranks
    ``(l-1)q + 1 .. lq``: in row order when ``seed`` is None, otherwise in
    an order drawn from the per-(column, level) stream of the seed.
    """
    n, m = r.labels.shape
    ranks = np.empty((n, m), dtype=np.int64)
    for j in range(m):
        s = r.level_counts[j]
        q = n // s
        col = r.labels[:, j]
        for level in range(1, s + 1):
            rows = np.flatnonzero(col == level)
            if seed is None:
                order = np.arange(q)
            else:
                ss = np.random.SeedSequence(seed, spawn_key=(_PERM_KEY, j, level))
                order = np.random.default_rng(ss).permutation(q)
            ranks[rows, j] = (level - 1) * q + 1 + order
    return ranks


@dataclass(frozen=True)
class Design:
    """Points in the unit cube obtained from a rank matrix.

    ``points[i, j]`` lies in ``[(ranks[i,j]-1)/n, ranks[i,j]/n)``, so the
    one-dimensional Latin hypercube property holds by construction.
    """

    points: np.ndarray
    ranks: np.ndarray
    seed: int | None
    midpoint: bool
    relabeled: RelabeledArray | None = None

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        rk = np.asarray(self.ranks, dtype=np.int64)
        rk.setflags(write=False)
        object.__setattr__(self, "ranks", rk)

    @property
    def n_rows(self) -> int:
        return int(self.points.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.points.shape[1])


@dataclass(frozen=True)
class NestedDesign:
    """A full design together with the nested child point set."""

    full: Design
    child_points: np.ndarray
    child_rows: tuple[int, ...]

    def __post_init__(self) -> None:
        pts = np.asarray(self.child_points, dtype=np.float64)
        pts.setflags(write=False)
        object.__setattr__(self, "child_points", pts)


def to_design(
    ranks: np.ndarray,
    *,
    seed: int | None = None,
    midpoint: bool = False,
    relabeled: RelabeledArray | None = None,
) -> Design:
    """Map ranks to points via ``x = (rank - u) / n``.

    ``midpoint`` uses u = 1/2; otherwise ``u`` is drawn uniformly from (0, 1]
    using the seed's jitter stream, keeping every point inside its own rank
    cell and hence inside [0, 1).
    """
    ranks = np.asarray(ranks, dtype=np.int64)
    n, m = ranks.shape
    for j in range(m):
        if not np.array_equal(np.sort(ranks[:, j]), np.arange(1, n + 1)):
            raise ValueError(f"column {j} is not a permutation of 1..{n}")
    if midpoint:
        if seed is not None:
            raise ValueError("midpoint designs take no seed")
        u = 0.5
    else:
        if seed is None:
            raise ValueError("jittered designs need a seed (or pass midpoint=True)")
        ss = np.random.SeedSequence(seed, spawn_key=(_JITTER_KEY,))
        u = 1.0 - np.random.default_rng(ss).random((n, m))  # in (0, 1]
    points = (ranks - u) / n
    return Design(points, ranks, seed, midpoint, relabeled)


def extract_nested(d: Design, p: NestedPair) -> NestedDesign:
    """Child point set: the rows of the design at the pair's child rows."""
    if d.relabeled is None or d.relabeled.pair is not p and d.relabeled.pair != p:
        raise ValueError("design was not generated from this nested pair")
    rows = list(p.child_rows)
    return NestedDesign(d, d.points[rows, :], p.child_rows)


def nested_design(
    p: NestedPair, *, seed: int | None = None, midpoint: bool = False
) -> NestedDesign:
    """Full pipeline: relabel, rank deterministically, jitter, extract.

    Ranks are assigned in row order regardless of the seed (the seed feeds
    only the jitter), so designs from different seeds occupy the same rank
    cells and differ only within them.
    """
    r = relabel(p)
    ranks = oa_lhd(r)
    d = to_design(ranks, seed=seed, midpoint=midpoint, relabeled=r)
    return extract_nested(d, p)


def strat_counts(
    points: np.ndarray, cols: tuple[int, int], grid: tuple[int, int]
) -> np.ndarray:
    """Occupancy counts of the bivariate projection on a g1 x g2 grid."""
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        raise ValueError("empty design")
    g1, g2 = grid
    if g1 < 1 or g2 < 1:
        raise ValueError("grid dimensions must be at least 1")
    j, k = cols
    a = np.minimum((points[:, j] * g1).astype(np.int64), g1 - 1)
    b = np.minimum((points[:, k] * g2).astype(np.int64), g2 - 1)
    counts = np.zeros((g1, g2), dtype=np.int64)
    np.add.at(counts, (a, b), 1)
    return counts


def is_uniform(counts: np.ndarray) -> bool:
    return int(counts.min()) == int(counts.max())
