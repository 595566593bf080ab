"""Construction families for nested difference matrices and nested
orthogonal arrays with equal levels.

The families implemented here follow Qian, Ai and Wu (2009), Ann. Statist.
37(6A) 3616-3643: multiplication-table difference matrices over Galois
fields with nested row subsets, Kronecker-product compositions with
orthogonal arrays, the zero-sum family over residue rings, the Rao-Hamming
orthogonal arrays, and the modulus-projection family of Qian, Tang and Wu
(2009).  Every constructor verifies its own output with the definition-level
checkers from ``arrays`` before returning; a failure raises
:class:`ConstructionError`, so no unverified object ever escapes.

Two conventions are fixed so results are reproducible cell for cell:

* Multiplication-table rows selected by label keep the listed label order;
  the theorem constructors arrange parent rows in the cluster order used in
  the source article, and child rows are positions within that arrangement.
* All constructions are deterministic; only ``search_nested_rows`` accepts a
  seed, for its randomized search mode.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .algebra import (
    Field,
    GaloisGroup,
    GfElem,
    Group,
    Projection,
    ResidueGroup,
    field_make,
    modulus,
    residue,
    truncation,
)
from .arrays import (
    LevelArray,
    NestedPair,
    check_dm,
    check_nested,
    check_oa,
    collapse,
    kronecker_add,
    subcols,
    subrows,
)

__all__ = [
    "ConstructionError",
    "label_sequence",
    "mult_table",
    "trivial_oa",
    "full_factorial",
    "ndm_theorem1",
    "ndm_theorem2",
    "ndm_theorem3",
    "ndm_sec34",
    "ndm_p3",
    "rao_hamming_oa",
    "qtw_noa",
    "noa_theorem4",
    "noa_theorem5",
    "zero_sum_noa",
    "validation_pair",
    "search_nested_rows",
]


class ConstructionError(RuntimeError):
    """A constructor's own verification gate failed; indicates a bug."""


def _gate(verdict, what: str) -> None:
    if not verdict:
        raise ConstructionError(f"{what}: {verdict.describe()}")


# ---------------------------------------------------------------------------
# Field element bookkeeping.
# ---------------------------------------------------------------------------


def label_sequence(f: Field, m: int) -> list[GfElem]:
    """All elements of ``f`` of polynomial degree at most ``m``, in
    lexicographic order: the sequence r_m, with p^(m+1) entries.  ``m = -1``
    gives just the zero element."""
    if m < -1 or m >= f.u:
        raise ValueError(f"degree bound {m} out of range for GF({f.order})")
    return [f.element(i) for i in range(f.p ** (m + 1))]


def _monomial(f: Field, k: int) -> GfElem:
    if not 0 <= k < f.u:
        raise ValueError(f"x^{k} is not a reduced element of GF({f.order})")
    return GfElem(tuple(1 if i == k else 0 for i in range(f.u)))


def _offsets_sum(f: Field, ks: Sequence[int]) -> GfElem:
    e = f.zero
    for k in ks:
        e = f.add(e, _monomial(f, k))
    return e


def _shift(f: Field, base: GfElem, seq: Sequence[GfElem]) -> list[GfElem]:
    return [f.add(base, e) for e in seq]


def mult_table(f: Field) -> LevelArray:
    """The s x s multiplication table of GF(s), rows and columns labelled by
    all field elements in lexicographic order.  It is a D(s, s, s)."""
    elems = f.elements()
    return _table_columns(f, elems, elems)


def _table_columns(f: Field, cols: Sequence[GfElem], rows: Sequence[GfElem]) -> LevelArray:
    """Selected columns of the multiplication table, rows in the given order."""
    g = GaloisGroup(f)
    data = [[f.index(f.mul(r, c)) for c in cols] for r in rows]
    return LevelArray(
        (g,) * len(cols),
        np.asarray(data, dtype=np.int64),
        row_labels=tuple(f.index(r) for r in rows),
        label_group=g,
    )


def trivial_oa(group: Group) -> LevelArray:
    """The single-column array listing every element of the alphabet once."""
    return LevelArray((group,), np.arange(group.order)[:, None])


def full_factorial(groups: Sequence[Group]) -> LevelArray:
    """All level combinations, first column varying slowest."""
    groups = tuple(groups)
    grids = np.meshgrid(*[np.arange(g.order) for g in groups], indexing="ij")
    data = np.column_stack([g.ravel() for g in grids])
    return LevelArray(groups, data)


# ---------------------------------------------------------------------------
# Multiplication-table nested difference matrices (characteristic 2).
# ---------------------------------------------------------------------------


def _ndm_from_labels(
    f: Field,
    target: Field,
    col_elems: Sequence[GfElem],
    row_order: Sequence[GfElem],
    child_elems: Sequence[GfElem],
    what: str,
) -> NestedPair:
    d1 = _table_columns(f, col_elems, row_order)
    pos = {lbl: i for i, lbl in enumerate(d1.row_labels)}
    child_rows = tuple(pos[f.index(e)] for e in child_elems)
    proj = truncation(f, target)
    pair = NestedPair(d1, child_rows, (proj,) * len(col_elems))
    _gate(check_nested(pair, "ndm"), what)
    return pair


def ndm_theorem1(m: int, field: Field | None = None) -> NestedPair:
    """A D(2^(m+1), 2^2, 2^(m+1)) containing a D(2^m, 2^2, 2^m), m >= 2.

    Columns r_1 of the GF(2^(m+1)) multiplication table; parent rows in the
    two-cluster arrangement; child rows are those labelled r_(m-2) and
    x^m + x^(m-1) + r_(m-2); the collapse is truncation onto GF(2^m).
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    f = field if field is not None else field_make(2, m + 1)
    if (f.p, f.u) != (2, m + 1):
        raise ValueError(f"field must be GF(2^{m + 1})")
    g = field_make(2, m)
    r = label_sequence(f, m - 2)
    offs = [
        f.zero,
        _offsets_sum(f, [m]),
        _offsets_sum(f, [m - 1]),
        _offsets_sum(f, [m, m - 1]),
    ]
    row_order = [e for o in offs for e in _shift(f, o, r)]
    child = _shift(f, offs[0], r) + _shift(f, offs[3], r)
    return _ndm_from_labels(f, g, label_sequence(f, 1), row_order, child, f"ndm_theorem1(m={m})")


_EIGHT_CLUSTERS = (
    (),
    ("m",),
    ("m-1",),
    ("m", "m-1"),
    ("m+1",),
    ("m+1", "m"),
    ("m+1", "m-1"),
    ("m+1", "m", "m-1"),
)


def _cluster_offsets(f: Field, m: int) -> list[GfElem]:
    degree = {"m": m, "m-1": m - 1, "m+1": m + 1}
    return [_offsets_sum(f, [degree[t] for t in spec]) for spec in _EIGHT_CLUSTERS]


def ndm_theorem2(m: int, field: Field | None = None) -> NestedPair:
    """A D(2^(m+2), 2^2, 2^(m+2)) containing a D(2^m, 2^2, 2^m), m >= 2.

    Columns r_1 over GF(2^(m+2)), rows in the four-cluster arrangement;
    child rows carry labels r_(m-2) and x^(m+1) + x^m + x^(m-1) + r_(m-2).
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    f = field if field is not None else field_make(2, m + 2)
    if (f.p, f.u) != (2, m + 2):
        raise ValueError(f"field must be GF(2^{m + 2})")
    g = field_make(2, m)
    r = label_sequence(f, m - 2)
    offs = _cluster_offsets(f, m)
    row_order = [e for o in offs for e in _shift(f, o, r)]
    child = _shift(f, offs[0], r) + _shift(f, offs[7], r)
    return _ndm_from_labels(f, g, label_sequence(f, 1), row_order, child, f"ndm_theorem2(m={m})")


#: Defining polynomials for the eight-column family where the catalog
#: default makes the listed child rows collapse unevenly.  Which irreducible
#: is in force changes the reduced products in the wide columns, so the
#: family is polynomial-sensitive; these choices pass the verification gate.
THEOREM3_POLYS = {3: "x^5+x^4+x^3+x^2+1", 4: "x^6+x^3+1"}


def ndm_theorem3(m: int, field: Field | None = None) -> NestedPair:
    """A D(2^(m+2), 2^3, 2^(m+2)) containing a D(2^(m+1), 2^3, 2^m), m >= 2.

    Columns r_2 over GF(2^(m+2)); child rows carry labels r_(m-2),
    x^m + x^(m-1) + r_(m-2), x^(m+1) + r_(m-2) and
    x^(m+1) + x^m + x^(m-1) + r_(m-2).
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    if field is None:
        field = field_make(2, m + 2, THEOREM3_POLYS.get(m))
    f = field
    if (f.p, f.u) != (2, m + 2):
        raise ValueError(f"field must be GF(2^{m + 2})")
    g = field_make(2, m)
    r = label_sequence(f, m - 2)
    offs = _cluster_offsets(f, m)
    row_order = [e for o in offs for e in _shift(f, o, r)]
    child = [e for idx in (0, 3, 4, 7) for e in _shift(f, offs[idx], r)]
    return _ndm_from_labels(f, g, label_sequence(f, 2), row_order, child, f"ndm_theorem3(m={m})")


#: GF(32) polynomial used by the wide nested families below.  The defining
#: polynomial matters here: with several of the irreducible quintics the row
#: subsets listed for these families stop being uniform after collapse, so
#: the choice is pinned to the one quintic that works for both variants.
SEC34_GF32_POLY = "x^5+x^4+x^3+x^2+1"


def ndm_sec34(variant: str, field: Field | None = None) -> NestedPair:
    """The two wide GF(32) families at their published size.

    ``variant="a8cols"`` builds a D(2^5, 2^3, 2^5) whose 8-row child
    collapses onto GF(4); ``variant="b16cols"`` builds a D(2^5, 2^4, 2^5)
    with a 16-row child, also collapsing onto GF(4).
    """
    if variant not in ("a8cols", "b16cols"):
        raise ValueError(f"unknown variant {variant!r}; use 'a8cols' or 'b16cols'")
    f = field if field is not None else field_make(2, 5, SEC34_GF32_POLY)
    if (f.p, f.u) != (2, 5):
        raise ValueError("field must be GF(2^5)")
    g = field_make(2, 2)
    r0 = label_sequence(f, 0)
    g1_offsets = [
        _offsets_sum(f, ks)
        for ks in [(), (1,), (3,), (3, 1), (4,), (4, 1), (4, 3), (4, 3, 1)]
    ]
    x2 = _monomial(f, 2)
    g1_rows = [e for o in g1_offsets for e in _shift(f, o, r0)]
    row_order = g1_rows + [f.add(x2, e) for e in g1_rows]
    if variant == "a8cols":
        cols = label_sequence(f, 2)
        child_offs = [(), (3, 1), (4,), (4, 3, 1)]
        child = [e for ks in child_offs for e in _shift(f, _offsets_sum(f, ks), r0)]
    else:
        cols = label_sequence(f, 3)
        shifted = [(1,), (3,), (4,), (4, 3, 1)]
        child = []
        for ks in [(), (1,), (3,), (3, 1), (4,), (4, 1), (4, 3), (4, 3, 1)]:
            base = _offsets_sum(f, ks)
            if ks in shifted:
                base = f.add(base, x2)
            child.extend(_shift(f, base, r0))
    return _ndm_from_labels(f, g, cols, row_order, child, f"ndm_sec34({variant})")


def ndm_p3(instance: str) -> NestedPair:
    """The characteristic-3 families: a D(3^(m+1), 3^2, 3^(m+1)) containing
    a D(3^m, 3^2, 3^m), at the two published instances.

    ``"gf27_to_gf9"`` uses GF(27) with x^3+2x+1 and child rows r_0,
    2x^2+x+r_0, x^2+2x+r_0; ``"gf81_to_gf27"`` uses GF(81) with x^4+x+2 and
    child rows r_1, 2x^3+x^2+r_1, x^3+2x^2+r_1.  Rows stay in lexicographic
    order (the three-cluster arrangement coincides with it).
    """
    if instance == "gf27_to_gf9":
        f, g = field_make(3, 3), field_make(3, 2)
        r = label_sequence(f, 0)
        shifts = ["0", "2x^2+x", "x^2+2x"]
    elif instance == "gf81_to_gf27":
        f, g = field_make(3, 4), field_make(3, 3)
        r = label_sequence(f, 1)
        shifts = ["0", "2x^3+x^2", "x^3+2x^2"]
    else:
        raise ValueError(f"unknown instance {instance!r}")
    child = [e for s in shifts for e in _shift(f, f.parse(s), r)]
    return _ndm_from_labels(
        f, g, label_sequence(f, 1), f.elements(), child, f"ndm_p3({instance})"
    )


# ---------------------------------------------------------------------------
# Rao-Hamming orthogonal arrays and the modulus-projection nested family.
# ---------------------------------------------------------------------------


def _vector(index: int, size: int, k: int) -> tuple[int, ...]:
    """Coordinates of enumeration position ``index`` over a size-``size``
    alphabet; the first coordinate varies fastest."""
    out = []
    for _ in range(k):
        out.append(index % size)
        index //= size
    return tuple(out)


def _canonical_directions(size: int, k: int) -> list[tuple[int, ...]]:
    """Vectors whose last nonzero coordinate is the element of index 1,
    enumerated first-coordinate-fastest.  There are (size^k - 1)/(size - 1)."""
    dirs = []
    for v in range(size**k):
        coords = _vector(v, size, k)
        last = next((c for c in reversed(coords) if c != 0), None)
        if last == 1:
            dirs.append(coords)
    return dirs


def _linear_entries(f: Field, rows: Sequence[tuple[int, ...]], dirs: Sequence[tuple[int, ...]]) -> LevelArray:
    g = GaloisGroup(f)
    elems = f.elements()
    data = np.empty((len(rows), len(dirs)), dtype=np.int64)
    for a, coords in enumerate(rows):
        for b, c in enumerate(dirs):
            acc = f.zero
            for ci, xi in zip(c, coords):
                if ci and xi:
                    acc = f.add(acc, f.mul(elems[ci], elems[xi]))
            data[a, b] = f.index(acc)
    return LevelArray((g,) * len(dirs), data)


def rao_hamming_oa(f: Field, k: int) -> LevelArray:
    """The linear OA(s^k, (s^k - 1)/(s - 1), s) over GF(s).

    Rows are all vectors of GF(s)^k, columns are the canonical direction
    vectors (last nonzero coordinate equal to one), and each entry is the
    linear form ``sum c_i x_i``.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    s = f.order
    rows = [_vector(v, s, k) for v in range(s**k)]
    out = _linear_entries(f, rows, _canonical_directions(s, k))
    _gate(check_oa(out), f"rao_hamming_oa(GF({s}), k={k})")
    return out


def qtw_noa(f1: Field, f2: Field, k: int) -> NestedPair:
    """Nested orthogonal array with the modulus collapse, after Qian, Tang
    and Wu (2009).

    The parent is the linear array over GF(s1) restricted to direction
    vectors whose coordinates all have polynomial degree below u2; the child
    rows are those indexed by vectors with every coordinate of degree below
    u2.  Requires matching characteristic and ``2 u2 <= u1 + 1``, which keeps
    the child's products free of reduction so the modulus map acts
    multiplicatively there.
    """
    if f1.p != f2.p:
        raise ValueError("fields must share one characteristic")
    if f2.u >= f1.u:
        raise ValueError("target field must be strictly smaller")
    if 2 * f2.u > f1.u + 1:
        raise ValueError(
            f"family requires 2*u2 <= u1 + 1; got u1={f1.u}, u2={f2.u}"
        )
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    s1, s2 = f1.order, f2.order
    dirs = [
        tuple(c) for c in _canonical_directions(s2, k)
    ]  # coordinates < s2 are exactly the degree-<u2 elements of f1
    rows = [_vector(v, s1, k) for v in range(s1**k)]
    parent = _linear_entries(f1, rows, dirs)
    child_rows = tuple(
        v for v in range(s1**k) if all(c < s2 for c in _vector(v, s1, k))
    )
    proj = modulus(f1, f2)
    pair = NestedPair(parent, child_rows, (proj,) * len(dirs))
    _gate(check_nested(pair, "noa"), f"qtw_noa(GF({s1}), GF({s2}), k={k})")
    return pair


# ---------------------------------------------------------------------------
# Kronecker compositions.
# ---------------------------------------------------------------------------


def noa_theorem4(a: LevelArray, ndm: NestedPair) -> NestedPair:
    """Nested orthogonal array from an orthogonal array and a nested
    difference matrix: parent ``A (+) D1``, child rows the D-child rows
    inside every block, collapse inherited from the difference matrix."""
    _gate(check_oa(a), "noa_theorem4: input array")
    _gate(check_nested(ndm, "ndm"), "noa_theorem4: input nested pair")
    parent = kronecker_add(a, ndm.parent)
    b = ndm.parent.n_rows
    child_rows = tuple(
        i * b + r for i in range(a.n_rows) for r in ndm.child_rows
    )
    projections = tuple(
        ndm.projections[kk] for _ in range(a.n_cols) for kk in range(ndm.parent.n_cols)
    )
    pair = NestedPair(parent, child_rows, projections)
    _gate(check_nested(pair, "noa"), "noa_theorem4")
    return pair


def noa_theorem5(noa: NestedPair, d: LevelArray) -> NestedPair:
    """New nested orthogonal array from an existing one and a difference
    matrix: parent ``A1 (+) D``, child rows all Kronecker rows spawned by the
    existing child rows, collapse inherited from the orthogonal array."""
    _gate(check_nested(noa, "noa"), "noa_theorem5: input nested pair")
    _gate(check_dm(d), "noa_theorem5: input difference matrix")
    parent = kronecker_add(noa.parent, d)
    b = d.n_rows
    child_rows = tuple(i * b + r for i in noa.child_rows for r in range(b))
    projections = tuple(
        noa.projections[j] for j in range(noa.parent.n_cols) for _ in range(d.n_cols)
    )
    pair = NestedPair(parent, child_rows, projections)
    _gate(check_nested(pair, "noa"), "noa_theorem5")
    return pair


def zero_sum_noa(s1: int, s2: int) -> NestedPair:
    """The zero-sum nested family over residue rings, for s2 dividing s1.

    Parent rows are (i, j, -(i+j) mod s1) over Z_s1; the child keeps rows
    with both i and j below s2, and all three columns collapse by the
    residue map onto Z_s2.
    """
    if s1 < 2:
        raise ValueError(f"s1 must be >= 2, got {s1}")
    if s2 < 1 or s1 % s2:
        raise ValueError(f"s2 must divide s1; got s1={s1}, s2={s2}")
    g = ResidueGroup(s1)
    data = [
        (i, j, (-(i + j)) % s1) for i in range(s1) for j in range(s1)
    ]
    parent = LevelArray((g,) * 3, np.asarray(data, dtype=np.int64))
    child_rows = tuple(i * s1 + j for i in range(s2) for j in range(s2))
    proj = residue(g, s2)
    pair = NestedPair(parent, child_rows, (proj,) * 3)
    _gate(check_nested(pair, "noa"), f"zero_sum_noa({s1}, {s2})")
    return pair


def validation_pair(
    m: int, a: LevelArray
) -> tuple[LevelArray, NestedPair, tuple[int, ...]]:
    """Nested pair for computer-model validation: the calibration design
    keeps every multiplication-table column, the field design lives on the
    shared r_1 columns.

    Returns ``(full_parent, shared_pair, shared_columns)`` where
    ``full_parent = A (+) D0`` is an OA(n 2^(m+1), 2^(m+1) c, 2^(m+1)),
    ``shared_columns`` are the Kronecker columns spawned by columns r_1, and
    ``shared_pair`` restricts the parent to those columns with the usual
    truncation-collapsed child.
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    group = a.uniform_group()
    if not isinstance(group, GaloisGroup) or (group.field.p, group.field.u) != (2, m + 1):
        raise ValueError(f"array must be over GF(2^{m + 1})")
    _gate(check_oa(a), "validation_pair: input array")
    f = group.field
    g = field_make(2, m)
    d0 = mult_table(f)
    s1 = f.order
    full = kronecker_add(a, d0)
    _gate(check_oa(full), "validation_pair: full parent")
    shared = tuple(j * s1 + t for j in range(a.n_cols) for t in range(4))
    r = label_sequence(f, m - 2)
    child_labels = r + _shift(f, _offsets_sum(f, [m, m - 1]), r)
    label_pos = {f.index(e) for e in child_labels}
    d2_rows = [i for i in range(s1) if i in label_pos]
    child_rows = tuple(
        i * s1 + rr for i in range(a.n_rows) for rr in d2_rows
    )
    proj = truncation(f, g)
    pair = NestedPair(subcols(full, shared), child_rows, (proj,) * len(shared))
    _gate(check_nested(pair, "noa"), f"validation_pair(m={m})")
    return full, pair, shared


# ---------------------------------------------------------------------------
# Budgeted search for nested row subsets.
# ---------------------------------------------------------------------------


def search_nested_rows(
    d: LevelArray,
    child_size: int,
    projection: Projection,
    budget: int,
    seed: int | None = None,
) -> tuple[int, ...] | None:
    """Look for a row subset of a difference matrix whose collapse is again
    a difference matrix.

    Subsets are tried in lexicographic order (or uniformly at random when a
    seed is given), at most ``budget`` of them.  Returns the first subset
    that passes ``check_dm`` after collapsing, or None.
    """
    if budget <= 0:
        raise ValueError(f"budget must be positive, got {budget}")
    verdict = check_dm(d)
    if not verdict:
        raise ValueError(f"input is not a difference matrix: {verdict.describe()}")
    if projection.source != d.uniform_group():
        raise ValueError("projection source does not match the array alphabet")
    if child_size < 1 or child_size > d.n_rows:
        return None
    if child_size % projection.target.order:
        return None  # child rows must split evenly over the target alphabet
    b = d.n_rows
    if seed is None:
        candidates = itertools.combinations(range(b), child_size)
    else:
        rng = np.random.default_rng(seed)

        def _random_subsets():
            while True:
                yield tuple(sorted(rng.choice(b, size=child_size, replace=False).tolist()))

        candidates = _random_subsets()
    for count, subset in enumerate(candidates):
        if count >= budget:
            break
        child = collapse(subrows(d, subset), (projection,) * d.n_cols)
        if check_dm(child):
            return tuple(subset)
    return None
