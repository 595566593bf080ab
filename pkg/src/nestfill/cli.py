"""Command line front end.

Verbs: construct, verify, lhd, export, catalog, info.  Exit codes are part
of the contract: 0 success, 2 usage or parameter errors, 3 verification
failure, 4 I/O or file-format errors.  Every construct invocation verifies
its output before anything reaches disk, and jitter randomness only ever
comes from an explicit ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog as cat
from .algebra import (
    GaloisGroup,
    ResidueGroup,
    field_make,
    identity_projection,
)
from .arrays import (
    LevelArray,
    NestedPair,
    check_dm,
    check_nested,
    check_oa,
    load_bundle,
    save_bundle,
    subcols,
    _atomic_write,
)
from .constructions import (
    ConstructionError,
    full_factorial,
    mult_table,
    ndm_p3,
    ndm_sec34,
    ndm_theorem1,
    ndm_theorem2,
    ndm_theorem3,
    noa_theorem4,
    noa_theorem5,
    qtw_noa,
    rao_hamming_oa,
    trivial_oa,
    validation_pair,
    zero_sum_noa,
)
from .mixed import mixed_dm_lemma7, noa_theorem9, ww_from_ndms, ww_from_noas
from .nsfd import is_uniform, nested_design, strat_counts
from .algebra import truncation


class UsageError(Exception):
    pass


class VerifyFailed(Exception):
    pass


class IoFailed(Exception):
    pass


def _field_for_order(s: int):
    p = 2
    n = s
    while p * p <= n:
        if n % p == 0:
            break
        p += 1
    else:
        p = n
    u = 0
    while n > 1 and n % p == 0:
        n //= p
        u += 1
    if n != 1:
        raise UsageError(f"{s} is not a prime power")
    return field_make(p, u)


def _int(params: dict, key: str, default=None) -> int:
    if key not in params:
        if default is None:
            raise UsageError(f"missing parameter {key}=")
        return default
    try:
        return int(params[key])
    except ValueError:
        raise UsageError(f"parameter {key}= wants an integer, got {params[key]!r}") from None


def _resolve_ref(text: str):
    """A catalog entry name, or an inline construction call like
    ``theorem1:m=2`` or ``multtable:s=8``."""
    if ":" in text:
        name, _, argstr = text.partition(":")
        params = {}
        for piece in argstr.split(","):
            if piece:
                k, _, v = piece.partition("=")
                params[k] = v
        obj, _kind = _construct(name, params)
        return obj
    try:
        return cat.catalog_get(text).payload
    except KeyError as e:
        raise UsageError(str(e)) from None


def _default_thm8_blocks():
    g2 = GaloisGroup(field_make(2, 1))
    stacked = LevelArray((g2,) * 2, np.tile(np.array([[0, 0], [0, 1]]), (6, 1)))
    ndm_z2 = NestedPair(stacked, tuple(range(6)), (identity_projection(g2),) * 2)
    ndm_z6 = cat.catalog_get("ex11_ndm").payload
    a = full_factorial((ResidueGroup(6), g2))
    return a, [((0,), ndm_z6), ((1,), ndm_z2)]


def _load_plan(path: str):
    try:
        with open(path) as fh:
            plan = json.load(fh)
    except OSError as e:
        raise IoFailed(f"cannot read plan file: {e}") from None
    except json.JSONDecodeError as e:
        raise IoFailed(f"plan file is not valid JSON: {e}") from None
    parent = _resolve_ref(plan["parent"])
    blocks = [(tuple(b["cols"]), _resolve_ref(b["ref"])) for b in plan["blocks"]]
    return parent, blocks, bool(plan.get("b", False))


def _construct(name: str, params: dict):
    """Dispatch a construction name; returns (object, kind)."""
    if name in ("theorem1", "theorem2", "theorem3"):
        m = _int(params, "m")
        fn = {"theorem1": ndm_theorem1, "theorem2": ndm_theorem2, "theorem3": ndm_theorem3}[name]
        return fn(m), "ndm"
    if name == "sec34":
        variant = params.get("variant", "a8cols")
        return ndm_sec34(variant), "ndm"
    if name == "p3":
        return ndm_p3(params.get("instance", "gf27_to_gf9")), "ndm"
    if name == "raohamming":
        f = _field_for_order(_int(params, "s"))
        return rao_hamming_oa(f, _int(params, "k")), "oa"
    if name == "qtw":
        f1 = _field_for_order(_int(params, "s1"))
        f2 = _field_for_order(_int(params, "s2"))
        return qtw_noa(f1, f2, _int(params, "k", 2)), "noa"
    if name == "zerosum":
        return zero_sum_noa(_int(params, "s1"), _int(params, "s2")), "noa"
    if name == "trivial":
        return trivial_oa(GaloisGroup(_field_for_order(_int(params, "s")))), "oa"
    if name == "multtable":
        return mult_table(_field_for_order(_int(params, "s"))), "dm"
    if name == "theorem4":
        a = _resolve_ref(params.get("a", "trivial:s=8"))
        ndm = _resolve_ref(params.get("ndm", "theorem1:m=2"))
        return noa_theorem4(a, ndm), "noa"
    if name == "theorem5":
        noa = _resolve_ref(params.get("noa", "qtw:s1=8,s2=4,k=2"))
        dm = _resolve_ref(params.get("dm", "multtable:s=8"))
        return noa_theorem5(noa, dm), "noa"
    if name == "validation":
        m = _int(params, "m", 2)
        a = _resolve_ref(params.get("a", f"trivial:s={2 ** (m + 1)}"))
        full, pair, shared = validation_pair(m, a)
        return (full, pair, shared), "validation"
    if name == "thm7":
        if "plan" in params:
            parent, blocks, use_b = _load_plan(params["plan"])
        else:
            parent = cat.catalog_get("ex12_noa").payload
            blocks = [
                ((0,), cat.catalog_derive("d_12_6_6")),
                ((1,), cat.catalog_get("seberry_12_12_4").payload),
            ]
            use_b = False
        use_b = bool(_int(params, "b", int(use_b)))
        return ww_from_noas(parent, blocks, include_b=use_b), "noa"
    if name == "thm8":
        if "plan" in params:
            a, blocks, use_b = _load_plan(params["plan"])
        else:
            a, blocks = _default_thm8_blocks()
            use_b = False
        use_b = bool(_int(params, "b", int(use_b)))
        return ww_from_ndms(a, blocks, include_b=use_b), "noa"
    if name == "lemma7":
        d1 = _resolve_ref(params.get("d1", "multtable:s=4"))
        d2 = _resolve_ref(params.get("d2", "multtable:s=3"))
        return mixed_dm_lemma7(d1, d2, _int(params, "c0", 2)), "mixed-dm"
    if name == "thm9":
        d1 = _resolve_ref(params.get("d1", "multtable:s=4"))
        d2 = _resolve_ref(params.get("d2", "multtable:s=3"))
        d = mixed_dm_lemma7(d1, d2, _int(params, "c0", 2))
        g1, g2 = d.groups[0].components
        delta1 = truncation(g1.field, field_make(g1.field.p, max(1, g1.field.u - 1)))
        delta2 = identity_projection(g2)
        return noa_theorem9(d, delta1, delta2), "noa"
    raise UsageError(f"unknown construction {name!r}")


CONSTRUCTION_NAMES = (
    "theorem1 theorem2 theorem3 sec34 p3 raohamming qtw zerosum trivial "
    "multtable theorem4 theorem5 validation thm7 thm8 lemma7 thm9"
).split()


def _self_verify(obj, kind: str) -> str:
    if kind == "oa":
        v = check_oa(obj)
    elif kind == "dm":
        v = check_dm(obj)
    elif kind in ("noa", "ndm"):
        v = check_nested(obj, kind)
    elif kind == "mixed-dm":
        # the construction gates its own sub-matrices; re-check the blocks
        v = check_dm(subcols(obj, [j for j, g in enumerate(obj.groups) if g == obj.groups[0]]))
    elif kind == "validation":
        v = check_nested(obj[1], "noa")
    else:  # pragma: no cover
        raise UsageError(f"unknown kind {kind!r}")
    if not v:
        raise VerifyFailed(v.describe())
    return v.describe()


def cmd_construct(args) -> int:
    params = {}
    for piece in args.params:
        k, sep, v = piece.partition("=")
        if not sep:
            raise UsageError(f"parameters look like key=value, got {piece!r}")
        params[k] = v
    obj, kind = _construct(args.name, params)
    msg = _self_verify(obj, kind)
    if kind == "validation":
        full, pair, shared = obj
        save_bundle(args.out + "_full", full, "oa")
        save_bundle(args.out, pair, "noa")
        print(f"{args.name}: full array {full.shape}, shared columns {list(shared)}")
        print(msg)
        return 0
    save_bundle(args.out, obj, kind)
    arr = obj.parent if isinstance(obj, NestedPair) else obj
    print(f"{args.name}: {arr.n_rows} runs x {arr.n_cols} columns -> {args.out}.csv")
    if isinstance(obj, NestedPair):
        print(f"child rows: {len(obj.child_rows)}")
    print(msg)
    return 0


def cmd_verify(args) -> int:
    obj = _load(args.prefix)
    kind = args.kind
    if kind in ("noa", "ndm"):
        if not isinstance(obj, NestedPair):
            raise UsageError(f"{args.prefix} carries no nesting metadata")
        v = check_nested(obj, kind)
    else:
        arr = obj.parent if isinstance(obj, NestedPair) else obj
        v = check_oa(arr) if kind == "oa" else check_dm(arr)
    print(v.describe())
    if not v:
        return 3
    return 0


def _load(prefix: str):
    try:
        obj, _kind = load_bundle(prefix)
    except OSError as e:
        raise IoFailed(f"cannot read {prefix}.csv/.json: {e}") from None
    except (ValueError, KeyError, json.JSONDecodeError) as e:
        raise IoFailed(f"malformed bundle {prefix}: {e}") from None
    return obj


def _write_design_csv(path: str, points) -> None:
    lines = [",".join(f"x{j + 1}" for j in range(points.shape[1]))]
    lines.extend(",".join(f"{v:.12g}" for v in row) for row in points)
    _atomic_write(path, "\n".join(lines) + "\n")


def cmd_lhd(args) -> int:
    if args.midpoint == (args.seed is not None):
        raise UsageError("pass exactly one of --seed N or --midpoint")
    obj = _load(args.prefix)
    if not isinstance(obj, NestedPair):
        raise UsageError(f"{args.prefix} carries no nesting metadata")
    nd = nested_design(obj, seed=args.seed, midpoint=args.midpoint)
    _write_design_csv(args.out + "_dl.csv", nd.full.points)
    _write_design_csv(args.out + "_dh.csv", nd.child_points)
    meta = {
        "seed": args.seed,
        "midpoint": args.midpoint,
        "source": args.prefix,
        "child_rows": list(obj.child_rows),
        "runs": nd.full.n_rows,
        "columns": nd.full.n_cols,
    }
    _atomic_write(args.out + "_meta.json", json.dumps(meta, indent=1) + "\n")
    print(f"wrote {nd.full.n_rows}-point design and {len(obj.child_rows)}-point subset")
    ok = True
    for j in range(nd.full.n_cols):
        for k in range(j + 1, nd.full.n_cols):
            gl = (obj.projections[j].source.order, obj.projections[k].source.order)
            gh = (obj.projections[j].target.order, obj.projections[k].target.order)
            ul = is_uniform(strat_counts(nd.full.points, (j, k), gl))
            uh = is_uniform(strat_counts(nd.child_points, (j, k), gh))
            ok = ok and ul and uh
            print(
                f"columns ({j + 1},{k + 1}): full {gl[0]}x{gl[1]} "
                f"{'uniform' if ul else 'NOT uniform'}; "
                f"subset {gh[0]}x{gh[1]} {'uniform' if uh else 'NOT uniform'}"
            )
    if not ok:
        raise VerifyFailed("stratification check failed")
    return 0


def cmd_export(args) -> int:
    try:
        entry = cat.catalog_get(args.name)
    except KeyError as e:
        raise UsageError(str(e)) from None
    kind = "noa" if isinstance(entry.payload, NestedPair) else None
    save_bundle(args.out, entry.payload, kind)
    print(f"{args.name} -> {args.out}.csv ({entry.provenance})")
    return 0


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name in cat.catalog_names():
            print(name)
        return 0
    try:
        entry = cat.catalog_get(args.name)
    except KeyError as e:
        raise UsageError(str(e)) from None
    payload = entry.payload
    arr = payload.parent if isinstance(payload, NestedPair) else payload
    print(f"{entry.name}: {arr.n_rows} x {arr.n_cols} ({entry.provenance})")
    print("alphabets:", ", ".join(g.describe() for g in arr.groups))
    if isinstance(payload, NestedPair):
        print("child rows:", list(payload.child_rows))
    for row in arr.texts():
        print(" ".join(f"{t:>8}" for t in row))
    return 0


def cmd_info(args) -> int:
    obj = _load(args.prefix)
    arr = obj.parent if isinstance(obj, NestedPair) else obj
    print(f"{args.prefix}: {arr.n_rows} runs x {arr.n_cols} columns")
    print("alphabets:", ", ".join(g.describe() for g in arr.groups))
    if isinstance(obj, NestedPair):
        print(f"child rows ({len(obj.child_rows)}):", list(obj.child_rows))
        print("projections:", ", ".join(p.describe() for p in obj.projections))
    uniform = len(set(arr.groups)) == 1
    if uniform:
        print("as difference matrix:", check_dm(arr).describe())
    print("as orthogonal array:", check_oa(arr).describe())
    return 0


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nestfill",
        description="Construct and verify nested orthogonal arrays, nested "
        "difference matrices and nested space-filling designs.",
    )
    sub = ap.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("construct", help="run a named construction and write CSV + JSON")
    c.add_argument("name", choices=CONSTRUCTION_NAMES)
    c.add_argument("params", nargs="*", help="key=value construction parameters")
    c.add_argument("--out", required=True, help="output path prefix")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="verify a written bundle")
    v.add_argument("kind", choices=["oa", "dm", "noa", "ndm"])
    v.add_argument("prefix", help="path prefix of the .csv/.json bundle")
    v.set_defaults(func=cmd_verify)

    l = sub.add_parser("lhd", help="generate the nested space-filling design")
    l.add_argument("prefix", help="construct output to read")
    l.add_argument("--seed", type=int, default=None)
    l.add_argument("--midpoint", action="store_true")
    l.add_argument("--out", required=True)
    l.set_defaults(func=cmd_lhd)

    e = sub.add_parser("export", help="write a catalog entry as CSV + JSON")
    e.add_argument("name")
    e.add_argument("--out", required=True)
    e.set_defaults(func=cmd_export)

    g = sub.add_parser("catalog", help="list or show built-in entries")
    g.add_argument("action", choices=["list", "show"])
    g.add_argument("name", nargs="?")
    g.set_defaults(func=cmd_catalog)

    i = sub.add_parser("info", help="describe a written bundle")
    i.add_argument("prefix")
    i.set_defaults(func=cmd_info)
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.verb == "catalog" and args.action == "show" and not args.name:
        print("catalog show needs an entry name", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (ConstructionError, VerifyFailed) as e:
        print(f"verification failed: {e}", file=sys.stderr)
        return 3
    except IoFailed as e:
        print(f"error: {e}", file=sys.stderr)
        return 4
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
