"""Command-line interface.

Group files are JSON documents::

    {"kind": "SL", "n": 3,
     "generators": [[["1", "1", "0"], ["0", "1", "0"], ["0", "0", "1"]], ...],
     "transvection": [1, -2, 1],      # optional: word or matrix
     "pcs_level": "45",               # optional
     "name": "example"}               # optional

Integers may be JSON numbers or decimal strings; output always uses strings.
Exit codes: 0 success, 1 bad input, 2 not dense, 3 outside the envelope.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from math import gcd
from pathlib import Path

from .config import Config
from .density import NOT_FOUND, algebra_basis, check_density_scope, find_transvection
from .errors import (EnvelopeError, NoTransvectionFound, NotDense, ParseError, PcsError)
from .families import (TABLE1, TABLE2, TABLE3, assembled_groups, beta_family, fz, hatG_index,
                       humphries_family, hypergeometric_family, level45_group, rho_family)
from .gammas import SL, Sp, AmbientKind, GroupSpec, ambient_contains
from .intmat import IntMatrix
from .level import analyze, factored, is_member
from .modgroup import DeltaCache
from .primeset import pi_tilde

EXIT_OK, EXIT_PARSE, EXIT_NOT_DENSE, EXIT_ENVELOPE = 0, 1, 2, 3

# rows tried by default in `reproduce`; others need --all
ENVELOPE_PRIME = 31


# ---------------------------------------------------------------------------
# group files

def _int(x, where: str) -> int:
    if isinstance(x, bool):
        raise ParseError(f"{where}: expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise ParseError(f"{where}: expected an integer, got {x!r}")


def _matrix(obj, n: int, where: str) -> IntMatrix:
    if not isinstance(obj, list) or len(obj) != n:
        raise ParseError(f"{where}: expected {n} rows")
    rows = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{where}: row {i + 1} must have {n} entries")
        rows.append([_int(x, f"{where}, row {i + 1}") for x in row])
    return IntMatrix.from_rows(rows)


def parse_group(doc) -> GroupSpec:
    """Validate a group-file document and build the GroupSpec."""
    if not isinstance(doc, dict):
        raise ParseError("group file must be a JSON object")
    kind = doc.get("kind")
    if kind not in (SL, Sp):
        raise ParseError(f"kind must be 'SL' or 'Sp', got {kind!r}")
    n = _int(doc.get("n"), "n")
    try:
        amb = AmbientKind(kind, n)
    except PcsError as exc:
        raise ParseError(str(exc)) from exc
    raw = doc.get("generators")
    if not isinstance(raw, list) or not raw:
        raise ParseError("generators must be a non-empty list")
    gens = []
    for idx, g in enumerate(raw, 1):
        m = _matrix(g, n, f"generator {idx}")
        if not ambient_contains(amb, m):
            what = f"determinant {m.det()}" if kind == SL else "does not preserve the form J"
            raise ParseError(f"generator {idx}: {what}, not in {amb}")
        gens.append(m)
    t = doc.get("transvection")
    if t is not None:
        if t and isinstance(t[0], list):
            t = _matrix(t, n, "transvection")
        else:
            t = tuple(_int(x, "transvection word") for x in t)
            if not t or any(x == 0 or abs(x) > len(gens) for x in t):
                raise ParseError(f"transvection word uses indices outside 1..{len(gens)}")
    r = doc.get("pcs_level")
    if r is not None:
        r = _int(r, "pcs_level")
        if r < 1:
            raise ParseError("pcs_level must be positive")
    return GroupSpec(amb, gens, transvection=t, pcs_level=r, name=str(doc.get("name", "")))


def load_group(path) -> GroupSpec:
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_group(doc)


def _rows_str(m: IntMatrix) -> list:
    return [[str(x) for x in r] for r in m.rows()]


def dump_group(spec: GroupSpec) -> dict:
    doc = {"kind": spec.ambient.kind, "n": spec.n, "name": spec.name,
           "generators": [_rows_str(g) for g in spec.generators]}
    t = spec.transvection
    if isinstance(t, IntMatrix):
        doc["transvection"] = _rows_str(t)
    elif t is not None:
        doc["transvection"] = list(t)
    if spec.pcs_level:
        doc["pcs_level"] = str(spec.pcs_level)
    return doc


def family_spec(name: str, params: list[str], with_z: bool = False) -> GroupSpec:
    ints = [int(p) for p in params]
    if name == "beta":
        return beta_family(ints[0], with_z)
    if name == "rho":
        return rho_family(ints[0], with_z)
    if name == "hypergeometric":
        return hypergeometric_family(ints[0], ints[1])
    if name == "humphries":
        return humphries_family(ints[0])
    if name == "level45":
        return level45_group()
    if name.upper() in ("G3", "G7", "G8", "G9"):
        return assembled_groups(name, *ints)
    raise ParseError(f"unknown family {name!r}")


# ---------------------------------------------------------------------------
# commands

def _config(args) -> Config:
    return Config(orbit_budget=args.orbit_budget, seed=args.seed)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2, sort_keys=True))
    else:
        print(text)


def _fmt_factored(x: int) -> str:
    if x == 1:
        return "1"
    return " * ".join(f"{p}^{e}" if e > 1 else str(p) for p, e in factored(x))


def cmd_analyze(args) -> int:
    spec = load_group(args.group)
    t0 = time.perf_counter()
    try:
        rep = analyze(spec, _config(args), search_depth=args.find_transvection)
    except NotDense as exc:
        _emit(args, {"dense": False, "error": str(exc)}, f"dense: false ({exc})")
        return EXIT_NOT_DENSE
    data = rep.as_dict()
    if args.timings:
        data["timings"] = {k: round(v, 3) for k, v in rep.timings.items()}
        data["timings"]["total"] = round(time.perf_counter() - t0, 3)
    pr = rep.prime_report
    lines = [
        f"group: {spec.name or args.group}",
        "dense: true",
        f"candidate primes: {pr.candidates}",
        f"Pi: {pr.exceptional}",
        f"Pi~: {pr.pi_tilde}",
        f"undecided: {pr.undecided}",
        f"level M: {rep.level} = {_fmt_factored(rep.level)}",
        f"index: {rep.index} = {_fmt_factored(rep.index)}",
        f"interpretation: {rep.interpretation}",
    ]
    _emit(args, data, "\n".join(lines))
    return EXIT_OK


def cmd_isdense(args) -> int:
    spec = load_group(args.group)
    check_density_scope(spec.ambient)
    t = spec.transvection
    if t is None:
        w = find_transvection(spec.generators, args.find_transvection) \
            if args.find_transvection else NOT_FOUND
        if w is NOT_FOUND:
            raise NoTransvectionFound("no transvection supplied and none found")
        t = w
    basis = algebra_basis(spec.generators, t)
    dense = basis.is_full()
    data = {"dense": dense, "algebra_rank": basis.rank,
            "transvection": list(t) if isinstance(t, tuple) else _rows_str(t)}
    _emit(args, data, f"dense: {str(dense).lower()} (algebra rank {basis.rank})")
    return EXIT_OK


def cmd_primes(args) -> int:
    spec = load_group(args.group)
    check_density_scope(spec.ambient)
    t = spec.transvection
    if t is None and args.find_transvection:
        t = find_transvection(spec.generators, args.find_transvection)
    if not t:
        raise NoTransvectionFound("no transvection supplied and none found")
    if not algebra_basis(spec.generators, t).is_full():
        _emit(args, {"dense": False}, "dense: false")
        return EXIT_NOT_DENSE
    pr = pi_tilde(spec, t, DeltaCache(spec, _config(args)), _config(args))
    text = "\n".join(f"{k}: {v}" for k, v in pr.as_dict().items())
    _emit(args, pr.as_dict(), text)
    return EXIT_OK


def cmd_member(args) -> int:
    spec = load_group(args.group)
    try:
        g = _matrix(json.loads(args.matrix), spec.n, "matrix")
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix is not valid JSON: {exc}") from exc
    cfg = _config(args)
    M = args.level
    if M is None:
        M = analyze(spec, cfg, search_depth=args.find_transvection).level
    ok = is_member(spec, M, g, config=cfg)
    _emit(args, {"member": ok, "level": M}, f"member: {str(ok).lower()} (level {M})")
    return EXIT_OK


def cmd_export(args) -> int:
    spec = family_spec(args.family, args.params, args.with_z)
    text = json.dumps(dump_group(spec), indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# reproduce

def _in_envelope(level: dict) -> bool:
    return max(level) <= ENVELOPE_PRIME


def _row_job(job):
    table, key, cfg = job
    try:
        if table == 1:
            rep = analyze(beta_family(key, with_z=True), cfg)
            cf = DeltaCache(beta_family(key), cfg)
            return {"level": rep.level, "index": rep.index, "index_F_at_M": cf(rep.level)}
        if table == 2:
            g = analyze(rho_family(key, with_z=True), cfg)
            f = analyze(rho_family(key), cfg)
            return {"level": g.level, "level_F": f.level, "index_G": g.index, "index_F": f.index}
        d, k = key
        rep = analyze(hypergeometric_family(d, k), cfg)
        return {"level": rep.level, "index": rep.index}
    except EnvelopeError as exc:
        return {"error": f"{type(exc).__name__}: {exc}"}


def _table_rows(table: int):
    if table == 1:
        return list(TABLE1)
    if table == 2:
        return list(TABLE2)
    return list(TABLE3)


def _parse_row(table: int, s: str):
    if table == 3:
        d, k = s.strip("()").split(",")
        return (int(d), int(k))
    return int(s)


def cmd_reproduce(args) -> int:
    table = args.table
    data = {1: TABLE1, 2: TABLE2, 3: TABLE3}[table]
    rows = [_parse_row(table, r) for r in args.rows] if args.rows else _table_rows(table)
    for r in rows:
        if r not in data:
            raise ParseError(f"table {table} has no row {r}")
    cfg = _config(args)
    explicit = bool(args.rows) and not args.strict_envelope
    todo = [r for r in rows if args.all or explicit or _in_envelope(data[r][0])]
    jobs = [(table, r, cfg) for r in todo]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = dict(zip(todo, ex.map(_row_job, jobs)))
    else:
        results = {r: _row_job(j) for r, j in zip(todo, jobs)}

    out, lines, failed = [], [], False
    for r in rows:
        pub = data[r]
        published = {"level": str(fz(pub[0]))}
        if table == 2:
            published.update(index_G=str(fz(pub[1])), index_F=str(fz(pub[2])))
        else:
            published["index"] = str(fz(pub[1]))
        entry = {"row": list(r) if isinstance(r, tuple) else r, "published": published,
                 "computed": {}}
        if table == 3:
            published["index_hatG"] = str(fz(pub[2]))
            hat = hatG_index(r[0], gcd(*r))
            entry["computed"]["index_hatG"] = str(hat)
            entry["hatG_status"] = "PASS" if hat == fz(pub[2]) else "FAIL"
            failed |= hat != fz(pub[2])
        res = results.get(r)
        if res is None or "error" in res:
            entry["status"] = "SKIPPED(envelope)"
            if res:
                entry["error"] = res["error"]
        else:
            entry["computed"].update({k: str(v) for k, v in res.items()})
            checks = [res["level"] == fz(pub[0])]
            if table == 2:
                checks += [res["level_F"] == fz(pub[0]), res["index_G"] == fz(pub[1]),
                           res["index_F"] == fz(pub[2])]
            else:
                checks.append(res["index"] == fz(pub[1]))
            entry["status"] = "PASS" if all(checks) else "FAIL"
            failed |= not all(checks)
        out.append(entry)
        lines.append(_row_line(entry))
    if table == 1:
        lines.append("note: computed indices are for <X_T, Y_T, Z_T>; "
                     "index_F_at_M is the index of <X_T, Y_T> modulo the same level")
    _emit(args, {"table": table, "rows": out}, "\n".join(lines))
    return EXIT_OK if not failed or not args.check else EXIT_ENVELOPE


def _row_line(e: dict) -> str:
    comp = e["computed"]
    parts = [f"{str(e['row']):>8}", f"{e['status']:<17}"]
    for k, v in sorted(e["published"].items()):
        parts.append(f"{k}: computed={comp.get(k, '-')} published={v}")
    if "index_F_at_M" in comp:
        parts.append(f"index_F_at_M={comp['index_F_at_M']}")
    if "hatG_status" in e:
        parts.append(f"hatG {e['hatG_status']}")
    if "error" in e:
        parts.append(e["error"])
    return "  ".join(parts)


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--orbit-budget", type=int, default=Config().orbit_budget)
    common.add_argument("--find-transvection", type=int, default=0, metavar="DEPTH",
                        help="search for a transvection when the file has none")

    p = argparse.ArgumentParser(prog="pcslevel",
                                description="Levels and indices of dense subgroups of SL(n,Z), Sp(n,Z)")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="density, primes, level and index")
    a.add_argument("group")
    a.add_argument("--timings", action="store_true")
    a.set_defaults(func=cmd_analyze)

    d = sub.add_parser("isdense", parents=[common], help="Zariski density test")
    d.add_argument("group")
    d.set_defaults(func=cmd_isdense)

    pr = sub.add_parser("primes", parents=[common], help="candidate, exceptional and level primes")
    pr.add_argument("group")
    pr.set_defaults(func=cmd_primes)

    m = sub.add_parser("member", parents=[common], help="membership test modulo the level")
    m.add_argument("group")
    m.add_argument("--matrix", required=True, help="JSON array of rows")
    m.add_argument("--level", type=int, default=None)
    m.set_defaults(func=cmd_member)

    r = sub.add_parser("reproduce", parents=[common], help="recompute the published tables")
    r.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    r.add_argument("--rows", nargs="*", default=None,
                   help="row keys, e.g. -2 1 for table 1 or 1,3 for table 3")
    r.add_argument("--all", action="store_true", help="also try rows outside the envelope")
    r.add_argument("--strict-envelope", action="store_true",
                   help="skip out-of-envelope rows even when listed in --rows")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--check", action="store_true", help="exit 3 if any row fails")
    r.set_defaults(func=cmd_reproduce)

    e = sub.add_parser("export", help="write a built-in group as a group file")
    e.add_argument("family", help="beta, rho, hypergeometric, humphries, level45, G3, G7, G8, G9")
    e.add_argument("params", nargs="*")
    e.add_argument("--with-z", action="store_true", help="include the third generator (beta, rho)")
    e.add_argument("-o", "--output")
    e.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except EnvelopeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ENVELOPE
    except NotDense as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_DENSE
    except PcsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
