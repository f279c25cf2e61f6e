"""Command line front end.

Subcommands: decide, term, check, trivial, antitrivial, free, relcheck,
report.  Matrix arguments are builtin names, bracket literals, or @file
references; --lhs takes a comma-separated list of them.  Exit codes: 0 for
a positive answer (holds / valid / trivial / closed), 1 for a negative
one, 2 for usage problems, 3 for parse failures, 4 for resource caps.
"""

from __future__ import annotations

import argparse
import json
import sys

from .errors import (MatrixSyntaxError, PointednessError, RelationSyntaxError,
                     ResourceLimitError, TermSyntaxError)
from .matrices import (ExtendedMatrix, MatrixSet, builtin_matrix, builtin_names,
                       format_matrix, matrix_set, parse_matrix)
from .algebras import Conflict, forced_instances
from .engine import (DEFAULT_MAX_CANDIDATES, Derived, OriginalLeft, decide,
                     is_trivial_matrix, is_trivial_set)
from .certificates import check_certificate, extract_term
from .matrices import entry_to_str, is_anti_trivial
from .relations import (FinitePointedSet, FiniteRelation, is_M_closed_relation,
                        is_strictly_M_closed_relation)
from .terms import format_term, format_term_shared, parse_term, tree_size
from . import report as report_mod


def _read_at(value: str) -> str:
    """Expand a leading @ into the named file's contents."""
    if value.startswith("@"):
        with open(value[1:]) as handle:
            return handle.read()
    return value


def _one_matrix(spec: str) -> ExtendedMatrix:
    spec = _read_at(spec).strip()
    if spec.startswith("["):
        return parse_matrix(spec)
    if spec in builtin_names():
        return builtin_matrix(spec)
    raise MatrixSyntaxError(f"not a builtin name or bracket literal: {spec!r}", 0)


def _matrix_list(value: str) -> list[ExtendedMatrix]:
    text = _read_at(value)
    specs = [part.strip() for chunk in text.split("\n") for part in chunk.split(",")]
    mats = [_one_matrix(s) for s in specs if s]
    if not mats:
        raise MatrixSyntaxError("empty matrix list", 0)
    return mats


def _forced_mode(args) -> bool | None:
    if getattr(args, "pointed", False):
        return True
    if getattr(args, "non_pointed", False):
        return False
    return None


def _resolve(args, need_rhs: bool = True):
    """Parse --lhs/--rhs and settle the common mode: forced by flags, else
    pointed iff any parsed matrix is."""
    lhs = _matrix_list(args.lhs)
    rhs = _one_matrix(args.rhs) if need_rhs else None
    forced = _forced_mode(args)
    everything = lhs + ([rhs] if rhs is not None else [])
    mode = any(m.pointed for m in everything) if forced is None else forced
    if not mode:
        for m in everything:
            if m.pointed:
                raise PointednessError(
                    "--non-pointed conflicts with a pointed matrix argument")
    mats = matrix_set(lhs, pointed=mode)
    if rhs is not None and mode:
        rhs = rhs.with_pointed()
    return mats, rhs


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _tableau_lines(report) -> list[str]:
    lines = []
    for pos, (column, prov) in enumerate(zip(report.tableau.columns,
                                             report.tableau.provenance)):
        entries = "(" + ", ".join(entry_to_str(e) for e in column) + ")"
        if isinstance(prov, OriginalLeft):
            how = f"left column {prov.j} of rhs"
        elif isinstance(prov, Derived):
            parents = ", ".join(f"c{p}" for p in prov.parents)
            how = f"derived via matrix {prov.matrix_index} from [{parents}]"
        else:
            how = "star column"
        lines.append(f"c{pos} = {entries}  {how}")
    return lines


def _cmd_decide(args) -> int:
    mats, rhs = _resolve(args)
    report = decide(mats, rhs, full_saturation=args.full_saturation,
                    max_candidates=args.max_candidates)
    text = "holds" if report.holds else "does not hold"
    if args.tableau and not args.json:
        text += "\n" + "\n".join(_tableau_lines(report))
    _emit(args, report.to_json_dict(include_tableau=args.tableau or args.json), text)
    return 0 if report.holds else 1


def _cmd_term(args) -> int:
    mats, rhs = _resolve(args)
    report = decide(mats, rhs, full_saturation=args.full_saturation,
                    max_candidates=args.max_candidates)
    payload = {"report": report.to_json_dict(include_tableau=args.tableau or args.json),
               "certificate": None}
    if not report.holds:
        _emit(args, payload, "does not hold; no certificate")
        return 1
    cert = extract_term(report.tableau, mats, rhs)
    shared = format_term_shared(cert.term)
    try:
        expanded = format_term(cert.term)
    except ValueError:
        expanded = None
    payload["certificate"] = {
        "term": expanded, "term_shared": shared, "source": cert.source,
        "tree_nodes": tree_size(cert.term)}
    lines = ["holds"]
    if expanded is not None:
        lines.append(f"certificate: {expanded}")
    lines.append(f"shared: {shared}")
    if args.tableau and not args.json:
        lines.extend(_tableau_lines(report))
    _emit(args, payload, "\n".join(lines))
    return 0


def _cmd_check(args) -> int:
    mats, rhs = _resolve(args)
    term = parse_term(_read_at(args.term).strip(), arities=[m.m for m in mats],
                      pointed=mats.pointed, max_var=rhs.m)
    outcome = check_certificate(mats, rhs, term)
    if outcome.valid:
        text = "valid (degenerate)" if outcome.degenerate else "valid"
    elif outcome.reason == "undefined":
        text = (f"invalid (row {outcome.row}): undefined at "
                f"{format_term_shared(outcome.subterm)}")
    else:
        text = (f"invalid (row {outcome.row}): got {outcome.got}, "
                f"expected {outcome.expected}")
    _emit(args, outcome.to_json_dict(), text)
    return 0 if outcome.valid else 1


def _cmd_trivial(args) -> int:
    mats, _ = _resolve(args, need_rhs=False)
    per = [is_trivial_matrix(m) for m in mats]
    set_trivial = is_trivial_set(mats)
    lines = [f"{format_matrix(m)}: {'trivial' if t else 'non-trivial'}"
             for m, t in zip(mats, per)]
    lines.append(f"list jointly: {'trivial' if set_trivial else 'non-trivial'}")
    _emit(args, {"set_trivial": set_trivial,
                 "matrices": [{"matrix": format_matrix(m), "trivial": t}
                              for m, t in zip(mats, per)]},
          "\n".join(lines))
    return 0 if set_trivial else 1


def _cmd_antitrivial(args) -> int:
    mats, _ = _resolve(args, need_rhs=False)
    per = [is_anti_trivial(m) for m in mats]
    lines = [f"{format_matrix(m)}: {'anti-trivial' if t else 'not anti-trivial'}"
             for m, t in zip(mats, per)]
    _emit(args, {"all_anti_trivial": all(per),
                 "matrices": [{"matrix": format_matrix(m), "anti_trivial": t}
                              for m, t in zip(mats, per)]},
          "\n".join(lines))
    return 0 if all(per) else 1


def _cmd_free(args) -> int:
    mats, _ = _resolve(args, need_rhs=False)
    if args.carrier < 0 or (mats.pointed and args.carrier < 1):
        raise PointednessError("--carrier must be >= 1 in pointed mode, >= 0 otherwise")
    result = forced_instances(mats, args.carrier)
    if isinstance(result, Conflict):
        payload = {"consistent": False, "op": result.op, "args": list(result.args),
                   "values": [result.value1, result.value2],
                   "first": {"matrix": result.first.matrix, "row": result.first.row,
                             "env": list(result.first.env)},
                   "second": {"matrix": result.second.matrix, "row": result.second.row,
                              "env": list(result.second.env)}}
        argtxt = ", ".join(str(a) for a in result.args)
        text = (f"demands clash: p{result.op}({argtxt}) forced to both "
                f"{result.value1} and {result.value2}; every model collapses "
                f"to one element")
        _emit(args, payload, text)
        return 1
    lines = [f"carrier size {args.carrier}"
             + (" (pointed, basepoint 0)" if mats.pointed else "")]
    tables_json = []
    for op, table in enumerate(result.tables):
        lines.append(f"p{op} (arity {mats[op].m}):")
        entries = []
        for key in sorted(table):
            argtxt = ", ".join(str(a) for a in key)
            lines.append(f"  p{op}({argtxt}) = {table[key]}")
            entries.append({"args": list(key), "value": table[key]})
        tables_json.append({"op": op, "arity": mats[op].m, "entries": entries})
    _emit(args, {"consistent": True, "carrier_size": args.carrier,
                 "pointed": mats.pointed, "tables": tables_json}, "\n".join(lines))
    return 0


def parse_relation_file(text: str) -> FiniteRelation:
    """First line: "carriers: c1 c2 ... cn [pointed]".  Each further
    non-empty line: one tuple of 0-based element indices."""
    lines = text.splitlines()
    header = None
    header_no = 0
    for no, line in enumerate(lines, start=1):
        if line.strip():
            header, header_no = line.strip(), no
            break
    if header is None or not header.startswith("carriers:"):
        raise RelationSyntaxError("first line must start with 'carriers:'", header_no or 1)
    fields = header[len("carriers:"):].split()
    pointed = fields and fields[-1] == "pointed"
    if pointed:
        fields = fields[:-1]
    try:
        sizes = [int(f) for f in fields]
    except ValueError:
        raise RelationSyntaxError("carrier sizes must be integers", header_no) from None
    if not sizes or any(s < 1 for s in sizes):
        raise RelationSyntaxError("need at least one carrier of size >= 1", header_no)
    components = tuple(FinitePointedSet(s, 0 if pointed else None) for s in sizes)
    tuples = set()
    for no, line in enumerate(lines, start=1):
        if no <= header_no or not line.strip():
            continue
        parts = line.split()
        try:
            values = tuple(int(p) for p in parts)
        except ValueError:
            raise RelationSyntaxError("tuple entries must be integers", no) from None
        if len(values) != len(sizes):
            raise RelationSyntaxError(
                f"expected {len(sizes)} entries, got {len(values)}", no)
        for v, s in zip(values, sizes):
            if not 0 <= v < s:
                raise RelationSyntaxError(f"entry {v} outside carrier 0..{s - 1}", no)
        tuples.add(values)
    return FiniteRelation(components, frozenset(tuples))


def _cmd_relcheck(args) -> int:
    matrix = _one_matrix(args.lhs)
    forced = _forced_mode(args)
    with open(args.relation) as handle:
        relation = parse_relation_file(handle.read())
    rel_pointed = relation.components[0].pointed
    if forced is True and not rel_pointed:
        raise PointednessError("--pointed but the relation file is not pointed")
    if forced is False and (rel_pointed or matrix.pointed):
        raise PointednessError("--non-pointed conflicts with pointed inputs")
    if matrix.pointed and not rel_pointed:
        raise PointednessError("pointed matrix needs a pointed relation file")
    if rel_pointed:
        matrix = matrix.with_pointed()
    if args.strict:
        closed = is_strictly_M_closed_relation(matrix, relation)
    else:
        sizes = {c.size for c in relation.components}
        if len(sizes) != 1:
            raise PointednessError(
                "plain closedness needs equal carriers; use --strict")
        closed = is_M_closed_relation(matrix, relation.components[0], relation)
    _emit(args, {"closed": closed, "strict": bool(args.strict)},
          "closed" if closed else "not closed")
    return 0 if closed else 1


def _cmd_report(args) -> int:
    specs = [s.strip() for s in _read_at(args.matrices).split(",") if s.strip()]
    named = []
    for spec in specs:
        mat = _one_matrix(spec)
        name = spec if not spec.startswith("[") and not spec.startswith("@") \
            else format_matrix(mat)
        named.append((name, mat))
    forced = _forced_mode(args)
    mode = any(m.pointed for _, m in named) if forced is None else forced
    if not mode and any(m.pointed for _, m in named):
        raise PointednessError("--non-pointed conflicts with a pointed matrix")
    if mode:
        named = [(name, m.with_pointed()) for name, m in named]
    summary = report_mod.write_report(named, args.out)
    text = "\n".join([f"wrote {summary['files']['csv']}",
                      f"wrote {summary['files']['figure']}"])
    _emit(args, summary, text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matprop",
        description="Decide implications between matrix properties, extract and "
                    "check partial-term certificates, inspect forced algebras "
                    "and relations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, rhs=True, saturation=False):
        p.add_argument("--lhs", required=True,
                       help="comma-separated matrices: builtin name, [..] literal, or @file")
        if rhs:
            p.add_argument("--rhs", required=True, help="target matrix")
        p.add_argument("--pointed", action="store_true", help="force pointed mode")
        p.add_argument("--non-pointed", action="store_true", help="force non-pointed mode")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        if saturation:
            p.add_argument("--tableau", action="store_true", help="show derived columns")
            p.add_argument("--full-saturation", action="store_true",
                           help="run to the fixpoint instead of stopping early")
            p.add_argument("--max-candidates", type=int, default=DEFAULT_MAX_CANDIDATES,
                           help="cap on candidate row stacks (default 10^7)")

    p = sub.add_parser("decide", help="does every lhs-closed relation satisfy rhs?")
    common(p, saturation=True)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("term", help="decide and print a certificate term")
    common(p, saturation=True)
    p.set_defaults(func=_cmd_term)

    p = sub.add_parser("check", help="verify a certificate term")
    common(p)
    p.add_argument("--term", required=True, help="term or @file")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("trivial", help="is the (joint) property trivial?")
    common(p, rhs=False)
    p.set_defaults(func=_cmd_trivial)

    p = sub.add_parser("antitrivial", help="is every listed matrix anti-trivial?")
    common(p, rhs=False)
    p.set_defaults(func=_cmd_antitrivial)

    p = sub.add_parser("free", help="forced operation tables on a finite carrier")
    common(p, rhs=False)
    p.add_argument("--carrier", type=int, required=True, help="carrier size")
    p.set_defaults(func=_cmd_free)

    p = sub.add_parser("relcheck", help="is a finite relation closed under a matrix?")
    p.add_argument("--lhs", required=True, help="matrix: builtin, literal, or @file")
    p.add_argument("--relation", required=True, help="relation file")
    p.add_argument("--strict", action="store_true", help="per-row functions")
    p.add_argument("--pointed", action="store_true")
    p.add_argument("--non-pointed", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_relcheck)

    p = sub.add_parser("report", help="pairwise implication table and Hasse figure")
    p.add_argument("--matrices", default=",".join(builtin_names()),
                   help="comma-separated matrices (default: all builtins)")
    p.add_argument("--out", default="matprop-report", help="output directory")
    p.add_argument("--pointed", action="store_true")
    p.add_argument("--non-pointed", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_report)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if getattr(args, "pointed", False) and getattr(args, "non_pointed", False):
        print("error: --pointed and --non-pointed are mutually exclusive", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (MatrixSyntaxError, TermSyntaxError, RelationSyntaxError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (PointednessError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
