"""Array types over group alphabets, and the brute-force verifiers.

The two central types are :class:`LevelArray` (an n x m matrix whose column
``j`` takes values in its own alphabet) and :class:`NestedPair` (a parent
array, an ordered list of child row indices, and one level-collapsing
projection per column).  Orthogonal arrays and difference matrices are
LevelArrays in particular roles; nested orthogonal arrays and nested
difference matrices are NestedPairs.

Verification is deliberately definition-level counting: ``check_oa`` counts
every ordered level pair in every column pair, ``check_dm`` counts every
group element in every ordered column difference.  The constructions
elsewhere in the package are gated on these checkers, never the other way
round.

Entries are stored as integer element indices (see ``algebra``); the element
objects and their text forms are recovered through the column alphabets.
Arrays are immutable (read-only numpy buffers inside frozen dataclasses) and
every function here is pure, so concurrent use needs no coordination.
Checkers report the first violation in lexicographic column-pair order, so
verdicts are deterministic.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .algebra import (
    Group,
    Projection,
    add_table,
    group_from_dict,
    group_to_dict,
    projection_from_dict,
    projection_to_dict,
    sub_table,
)

__all__ = [
    "Verdict",
    "LevelArray",
    "NestedPair",
    "check_oa",
    "check_dm",
    "check_nested",
    "collapse",
    "kronecker_add",
    "normalize_dm",
    "subrows",
    "subcols",
    "hstack",
    "cast_group",
    "write_array_csv",
    "read_array_csv",
    "save_bundle",
    "load_bundle",
]


@dataclass(frozen=True)
class Verdict:
    """Outcome of a verification, with a witness when it fails.

    ``witness`` carries enough structure for a command line tool to explain
    the first violation: typically the offending column pair, the level
    combination or difference, and the observed versus expected count.
    """

    ok: bool
    kind: str
    reason: str = ""
    witness: dict | None = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        head = f"{self.kind.upper()}: {'PASS' if self.ok else 'FAIL'}"
        if self.ok:
            return head
        parts = [head]
        if self.reason:
            parts.append(self.reason)
        if self.witness:
            parts.append(", ".join(f"{k}={v}" for k, v in self.witness.items()))
        return " - ".join(parts)


def _ro(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class LevelArray:
    """An n x m matrix of group elements with a per-column alphabet.

    ``data`` holds element indices.  ``row_labels`` (indices into
    ``label_group``) record provenance such as the field elements labelling
    the rows of a multiplication table; they ride along through row and
    column selection.
    """

    groups: tuple[Group, ...]
    data: np.ndarray
    row_labels: tuple[int, ...] | None = None
    label_group: Group | None = None

    def __post_init__(self) -> None:
        data = _ro(np.atleast_2d(self.data))
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "groups", tuple(self.groups))
        if data.ndim != 2 or data.shape[1] != len(self.groups):
            raise ValueError(
                f"data shape {data.shape} does not match {len(self.groups)} column alphabets"
            )
        for j, g in enumerate(self.groups):
            col = data[:, j]
            if col.size and (col.min() < 0 or col.max() >= g.order):
                bad = int(np.argmax((col < 0) | (col >= g.order)))
                raise ValueError(
                    f"entry at row {bad}, column {j} is outside its alphabet {g.describe()}"
                )
        if self.row_labels is not None:
            labels = tuple(int(v) for v in self.row_labels)
            object.__setattr__(self, "row_labels", labels)
            if len(labels) != data.shape[0]:
                raise ValueError("row_labels length does not match the row count")
            if len(set(labels)) != len(labels):
                raise ValueError("row_labels must be distinct")
            if self.label_group is None:
                raise ValueError("row_labels given without a label_group")

    @property
    def n_rows(self) -> int:
        return int(self.data.shape[0])

    @property
    def n_cols(self) -> int:
        return int(self.data.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def entry(self, i: int, j: int):
        return self.groups[j].element(int(self.data[i, j]))

    def entry_text(self, i: int, j: int) -> str:
        return self.groups[j].text_at(int(self.data[i, j]))

    def row_texts(self, i: int) -> list[str]:
        return [self.entry_text(i, j) for j in range(self.n_cols)]

    def texts(self) -> list[list[str]]:
        return [self.row_texts(i) for i in range(self.n_rows)]

    def uniform_group(self) -> Group:
        """The single shared alphabet, or raise if columns differ."""
        g = self.groups[0]
        if any(h != g for h in self.groups):
            raise ValueError(
                "columns do not share a single alphabet; this operation needs one"
            )
        return g

    def label_texts(self) -> list[str] | None:
        if self.row_labels is None:
            return None
        return [self.label_group.text_at(i) for i in self.row_labels]

    @classmethod
    def from_rows(
        cls,
        groups: Sequence[Group] | Group,
        rows: Iterable[Sequence],
        *,
        n_cols: int | None = None,
    ) -> "LevelArray":
        """Build from element objects (one shared alphabet or one per column)."""
        rows = [list(r) for r in rows]
        if isinstance(groups, Group):
            width = n_cols if n_cols is not None else (len(rows[0]) if rows else 0)
            groups = (groups,) * width
        data = [[g.index(e) for g, e in zip(groups, row)] for row in rows]
        return cls(tuple(groups), np.asarray(data, dtype=np.int64).reshape(len(rows), len(groups)))

    @classmethod
    def from_text(cls, groups: Sequence[Group] | Group, text: str) -> "LevelArray":
        """Parse a whitespace grid of canonical element texts."""
        lines = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        if isinstance(groups, Group):
            groups = (groups,) * len(lines[0])
        rows = [[g.parse(t) for g, t in zip(groups, ln)] for ln in lines]
        return cls.from_rows(groups, rows)


@dataclass(frozen=True)
class NestedPair:
    """A parent array plus the data singling out its nested child.

    ``child_rows`` are ordered, distinct indices into the parent; the child
    preserves parent row order.  ``projections[j]`` collapses the levels of
    parent column ``j``; its source alphabet must equal that column's.
    """

    parent: LevelArray
    child_rows: tuple[int, ...]
    projections: tuple[Projection, ...]

    def __post_init__(self) -> None:
        rows = tuple(int(r) for r in self.child_rows)
        object.__setattr__(self, "child_rows", rows)
        object.__setattr__(self, "projections", tuple(self.projections))
        n = self.parent.n_rows
        if any(not 0 <= r < n for r in rows):
            raise ValueError("child row index out of range")
        if len(set(rows)) != len(rows):
            raise ValueError("child rows must be distinct")
        if len(self.projections) != self.parent.n_cols:
            raise ValueError("need exactly one projection per parent column")
        for j, (proj, g) in enumerate(zip(self.projections, self.parent.groups)):
            if proj.source != g:
                raise ValueError(
                    f"projection for column {j} has source {proj.source.describe()}, "
                    f"column alphabet is {g.describe()}"
                )

    @property
    def child_size(self) -> int:
        return len(self.child_rows)

    def child(self) -> LevelArray:
        return subrows(self.parent, self.child_rows)

    def collapsed_child(self) -> LevelArray:
        return collapse(self.child(), self.projections)


# ---------------------------------------------------------------------------
# Verifiers.
# ---------------------------------------------------------------------------


def check_oa(a: LevelArray) -> Verdict:
    """Strength-two verdict by exhaustive pair counting.

    PASS iff for every unordered column pair every ordered level combination
    occurs exactly ``n / (s_i * s_j)`` times.  A single-column array is
    checked for level balance instead.  The first violation, in lexicographic
    (i, j) then combination order, is returned as the witness.
    """
    n, m = a.shape
    if m == 1:
        s = a.groups[0].order
        if n % s:
            return Verdict(False, "oa", f"{n} rows not divisible by {s} levels")
        counts = np.bincount(a.data[:, 0], minlength=s)
        if counts.min() != counts.max():
            lvl = int(np.argmin(counts))
            return Verdict(
                False,
                "oa",
                "single column is not level-balanced",
                {"level": a.groups[0].text_at(lvl), "count": int(counts[lvl]), "expected": n // s},
            )
        return Verdict(True, "oa")
    for i in range(m):
        si = a.groups[i].order
        for j in range(i + 1, m):
            sj = a.groups[j].order
            if n % (si * sj):
                return Verdict(
                    False,
                    "oa",
                    f"{n} rows not divisible by {si}*{sj} level combinations",
                    {"columns": (i, j)},
                )
            want = n // (si * sj)
            codes = a.data[:, i] * sj + a.data[:, j]
            counts = np.bincount(codes, minlength=si * sj)
            bad = np.flatnonzero(counts != want)
            if bad.size:
                code = int(bad[0])
                return Verdict(
                    False,
                    "oa",
                    "unbalanced level pair",
                    {
                        "columns": (i, j),
                        "levels": (a.groups[i].text_at(code // sj), a.groups[j].text_at(code % sj)),
                        "count": int(counts[code]),
                        "expected": want,
                    },
                )
    return Verdict(True, "oa")


def check_dm(d: LevelArray) -> Verdict:
    """Difference-matrix verdict by exhaustive difference counting.

    All columns must share one alphabet (mixed alphabets raise, they are a
    usage error rather than a verification failure).  PASS iff for every
    ordered column pair the elementwise difference contains each group
    element exactly ``b / g`` times.  Both orderings of each pair are
    counted.
    """
    g = d.uniform_group()
    b, m = d.shape
    order = g.order
    if b % order:
        return Verdict(False, "dm", f"{b} rows not divisible by group order {order}")
    want = b // order
    sub = sub_table(g)
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            diffs = sub[d.data[:, i], d.data[:, j]]
            counts = np.bincount(diffs, minlength=order)
            bad = np.flatnonzero(counts != want)
            if bad.size:
                e = int(bad[0])
                return Verdict(
                    False,
                    "dm",
                    "unbalanced column difference",
                    {
                        "columns": (i, j),
                        "element": g.text_at(e),
                        "count": int(counts[e]),
                        "expected": want,
                    },
                )
    return Verdict(True, "dm")


def check_nested(p: NestedPair, kind: str) -> Verdict:
    """Verify a nested pair: the parent and the collapsed child must both pass.

    ``kind`` is ``"noa"`` (orthogonal-array mode) or ``"ndm"`` (difference
    matrix mode).  The verdict carries the failing side's witness.
    """
    if kind not in ("noa", "ndm"):
        raise ValueError(f"kind must be 'noa' or 'ndm', got {kind!r}")
    inner = check_oa if kind == "noa" else check_dm
    parent = inner(p.parent)
    if not parent:
        return Verdict(False, kind, f"parent fails: {parent.reason}", parent.witness)
    child = inner(p.collapsed_child())
    if not child:
        return Verdict(False, kind, f"collapsed child fails: {child.reason}", child.witness)
    return Verdict(True, kind)


# ---------------------------------------------------------------------------
# Structural operations.
# ---------------------------------------------------------------------------


def collapse(a: LevelArray, projections: Sequence[Projection] | Projection) -> LevelArray:
    """Apply one projection per column; shape is preserved, alphabets change."""
    if isinstance(projections, Projection):
        projections = (projections,) * a.n_cols
    projections = tuple(projections)
    if len(projections) != a.n_cols:
        raise ValueError("need exactly one projection per column")
    cols = []
    for j, proj in enumerate(projections):
        if proj.source != a.groups[j]:
            raise ValueError(
                f"projection source {proj.source.describe()} does not match "
                f"column {j} alphabet {a.groups[j].describe()}"
            )
        cols.append(proj.np_table()[a.data[:, j]])
    return LevelArray(
        tuple(p.target for p in projections),
        np.column_stack(cols),
        row_labels=a.row_labels,
        label_group=a.label_group,
    )


def kronecker_add(a: LevelArray, d: LevelArray) -> LevelArray:
    """Additive Kronecker product: block (i, j) is ``a[i, j] + d``.

    Both arrays must share a single common alphabet.  Output row
    ``i * d.n_rows + r`` pairs row ``i`` of ``a`` with row ``r`` of ``d``,
    and output column ``j * d.n_cols + k`` pairs the respective columns.
    """
    ga, gd = a.uniform_group(), d.uniform_group()
    if ga != gd:
        raise ValueError(
            f"alphabet mismatch: {ga.describe()} versus {gd.describe()}"
        )
    tab = add_table(ga)
    na, ma = a.shape
    nd, md = d.shape
    out = tab[a.data[:, None, :, None], d.data[None, :, None, :]]
    return LevelArray((ga,) * (ma * md), out.reshape(na * nd, ma * md))


def normalize_dm(d: LevelArray) -> LevelArray:
    """Subtract column one from every column, giving the [0 | uniform] form."""
    verdict = check_dm(d)
    if not verdict:
        raise ValueError(f"input is not a difference matrix: {verdict.describe()}")
    g = d.uniform_group()
    sub = sub_table(g)
    data = sub[d.data, d.data[:, [0]]]
    return LevelArray(d.groups, data, row_labels=d.row_labels, label_group=d.label_group)


def _check_indices(idx: Sequence[int], bound: int, what: str) -> tuple[int, ...]:
    idx = tuple(int(i) for i in idx)
    if any(not 0 <= i < bound for i in idx):
        raise ValueError(f"{what} index out of range")
    if len(set(idx)) != len(idx):
        raise ValueError(f"duplicate {what} index")
    return idx


def subrows(a: LevelArray, rows: Sequence[int]) -> LevelArray:
    rows = _check_indices(rows, a.n_rows, "row")
    labels = None
    if a.row_labels is not None:
        labels = tuple(a.row_labels[i] for i in rows)
    return LevelArray(a.groups, a.data[list(rows), :], row_labels=labels, label_group=a.label_group)


def subcols(a: LevelArray, cols: Sequence[int]) -> LevelArray:
    cols = _check_indices(cols, a.n_cols, "column")
    return LevelArray(
        tuple(a.groups[j] for j in cols),
        a.data[:, list(cols)],
        row_labels=a.row_labels,
        label_group=a.label_group,
    )


def hstack(arrays: Sequence[LevelArray]) -> LevelArray:
    """Juxtapose arrays with equal row counts; labels are dropped."""
    n = arrays[0].n_rows
    if any(a.n_rows != n for a in arrays):
        raise ValueError("row counts differ")
    groups = tuple(g for a in arrays for g in a.groups)
    return LevelArray(groups, np.hstack([a.data for a in arrays]))


def cast_group(a: LevelArray, group: Group) -> LevelArray:
    """Reinterpret all columns over ``group``.

    Allowed only when the index-level addition tables agree, i.e. the two
    alphabets are the same abelian group under the canonical enumeration
    (for example GF(4) and Z_2 x Z_2).
    """
    old = a.uniform_group()
    if old.order != group.order or not np.array_equal(add_table(old), add_table(group)):
        raise ValueError(
            f"cannot cast {old.describe()} to {group.describe()}: addition tables differ"
        )
    return LevelArray((group,) * a.n_cols, a.data, row_labels=a.row_labels, label_group=a.label_group)


# ---------------------------------------------------------------------------
# CSV and JSON sidecar formats.
# ---------------------------------------------------------------------------


def _atomic_write(path: str, content: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(content)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_array_csv(path: str, a: LevelArray) -> None:
    """Write the run matrix: header ``c1,...,cm``, canonical element text."""
    lines = [",".join(f"c{j + 1}" for j in range(a.n_cols))]
    lines.extend(",".join(row) for row in a.texts())
    _atomic_write(path, "\n".join(lines) + "\n")


def read_array_csv(path: str, groups: Sequence[Group]) -> LevelArray:
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    header = lines[0].split(",")
    if len(header) != len(groups):
        raise ValueError(
            f"{path}: header has {len(header)} columns, expected {len(groups)}"
        )
    rows = []
    for ln in lines[1:]:
        cells = ln.split(",")
        if len(cells) != len(groups):
            raise ValueError(f"{path}: row with {len(cells)} cells, expected {len(groups)}")
        rows.append([g.parse(c) for g, c in zip(groups, cells)])
    return LevelArray.from_rows(tuple(groups), rows)


def _sidecar_dict(obj: LevelArray | NestedPair, kind: str | None) -> dict:
    arr = obj.parent if isinstance(obj, NestedPair) else obj
    d: dict = {
        "columns": [group_to_dict(g) for g in arr.groups],
        "row_labels": arr.label_texts(),
        "label_group": group_to_dict(arr.label_group) if arr.label_group else None,
        "kind": kind,
        "nested": None,
    }
    if isinstance(obj, NestedPair):
        d["nested"] = {
            "child_rows": list(obj.child_rows),
            "projections": [projection_to_dict(p) for p in obj.projections],
        }
    return d


def save_bundle(prefix: str, obj: LevelArray | NestedPair, kind: str | None = None) -> tuple[str, str]:
    """Write ``prefix.csv`` plus the ``prefix.json`` sidecar; returns the paths."""
    arr = obj.parent if isinstance(obj, NestedPair) else obj
    csv_path, json_path = prefix + ".csv", prefix + ".json"
    write_array_csv(csv_path, arr)
    _atomic_write(json_path, json.dumps(_sidecar_dict(obj, kind), indent=1) + "\n")
    return csv_path, json_path


def load_bundle(prefix: str) -> tuple[LevelArray | NestedPair, str | None]:
    """Inverse of :func:`save_bundle`."""
    with open(prefix + ".json") as fh:
        meta = json.load(fh)
    groups = [group_from_dict(g) for g in meta["columns"]]
    arr = read_array_csv(prefix + ".csv", groups)
    if meta.get("label_group"):
        label_group = group_from_dict(meta["label_group"])
        labels = tuple(label_group.parse_index(t) for t in meta["row_labels"])
        arr = LevelArray(arr.groups, arr.data, row_labels=labels, label_group=label_group)
    nested = meta.get("nested")
    if nested:
        projections = [projection_from_dict(p) for p in nested["projections"]]
        return NestedPair(arr, tuple(nested["child_rows"]), tuple(projections)), meta.get("kind")
    return arr, meta.get("kind")
