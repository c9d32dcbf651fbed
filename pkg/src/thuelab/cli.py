"""Command-line front end: run any operation, export tables, fit models.

Exit codes: 0 success, 1 check failure, 2 usage or input error, 3 cap
exhaustion. Every subcommand is deterministic given its flags; randomized
checks take --seed (default 42). Tables are emitted as text, CSV (with a
header row), or JSON lines, and the `fit` subcommand accepts the CSV and
JSON-lines tables that `complexity`, `gamma`, and `dehn` emit.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Optional

from . import fitting, lemmas, systems
from .core import (CapExceededError, ParseError, RewriteSystem, Role,
                   UnknownTokenError, Word, format_word, parse_system,
                   parse_word)
from .derivation import (INFINITE, DEFAULT_STATE_CAP, DerivationTrace,
                         derivational_complexity, derivational_depth,
                         derive_deterministic)
from .geodesic import (ComponentTooLargeError, DEFAULT_NODE_CAP,
                       DistanceStatus, component, dehn, diameter, distance,
                       dot_document, edge_lines, gamma_capital, gamma_exact)

EXIT_OK = 0
EXIT_CHECK_FAIL = 1
EXIT_USAGE = 2
EXIT_CAP = 3


def _load_system(name_or_path: str) -> RewriteSystem:
    try:
        return systems.builtin(name_or_path)
    except KeyError:
        pass
    path = Path(name_or_path)
    if not path.exists():
        raise ValueError(f"{name_or_path!r} is neither a builtin system nor a file")
    return parse_system(path.read_text(encoding="utf-8"))


def _word_arg(text: str, system: RewriteSystem) -> Word:
    return parse_word(text, system.alphabet)


def _open_out(args) -> io.TextIOBase:
    if getattr(args, "out", None):
        return open(args.out, "w", encoding="utf-8")
    return sys.stdout


def _close_out(stream):
    if stream is not sys.stdout:
        stream.close()


def _fmt_value(value) -> str:
    return "infinite" if value == INFINITE else str(value)


def _emit_rows(rows: list[dict], fieldnames: list[str], args, stream):
    fmt = args.format
    if fmt == "csv":
        writer = csv.DictWriter(stream, fieldnames=fieldnames)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    elif fmt == "json-lines":
        for row in rows:
            stream.write(json.dumps(row, sort_keys=True) + "\n")
    else:
        widths = {f: max(len(f), *(len(str(r.get(f, ""))) for r in rows))
                  for f in fieldnames} if rows else {f: len(f) for f in fieldnames}
        stream.write("  ".join(f.ljust(widths[f]) for f in fieldnames).rstrip() + "\n")
        for row in rows:
            stream.write("  ".join(
                str(row.get(f, "")).ljust(widths[f]) for f in fieldnames).rstrip() + "\n")


def _trace_rows(trace: DerivationTrace) -> list[dict]:
    rows = [{"index": 0, "word": format_word(trace.start),
             "rule_id": "", "position": "", "orientation": ""}]
    for i, (step, word) in enumerate(trace.steps, start=1):
        rows.append({"index": i, "word": format_word(word),
                     "rule_id": step.redex.rule_id,
                     "position": step.redex.position,
                     "orientation": step.redex.orientation.value})
    return rows


_TRACE_FIELDS = ["index", "word", "rule_id", "position", "orientation"]


def _cmd_parse(args) -> int:
    system = _load_system(args.system)
    al = system.alphabet
    stream = _open_out(args)
    try:
        if args.format == "json-lines":
            v = system.validation
            stream.write(json.dumps({
                "alphabet": list(al.symbols),
                "roles": {t: r.value for t, r in sorted(al.roles.items())},
                "marks": dict(sorted(al.mark_pairing.items())),
                "rules": [{"id": r.id, "lhs": format_word(r.lhs),
                           "rhs": format_word(r.rhs),
                           "orientation": r.orientation.value}
                          for r in system.rules],
                "validation": {
                    "length_preserving": v.length_preserving,
                    "unambiguous_left_sides": v.unambiguous_left_sides,
                    "single_head_rules": v.single_head_rules,
                    "walls_fixed": v.walls_fixed,
                },
            }, sort_keys=True) + "\n")
        else:
            stream.write(f"alphabet: {' '.join(al.symbols)}\n")
            for role in Role:
                toks = [t for t in al.symbols if al.roles.get(t) is role]
                if toks:
                    stream.write(f"{role.value}: {' '.join(toks)}\n")
            stream.write(f"rules: {len(system.rules)}\n")
            for r in system.rules:
                stream.write(f"  {r.id:3d}  {format_word(r.lhs)} -> {format_word(r.rhs)}"
                             f"  [{r.orientation.value}]\n")
            v = system.validation
            stream.write(f"length_preserving: {v.length_preserving}\n")
            stream.write(f"unambiguous_left_sides: {v.unambiguous_left_sides}\n")
            stream.write(f"single_head_rules: {v.single_head_rules}\n")
            stream.write(f"walls_fixed: {v.walls_fixed}\n")
    finally:
        _close_out(stream)
    return EXIT_OK


def _cmd_derive(args) -> int:
    system = _load_system(args.system)
    trace = derive_deterministic(system, _word_arg(args.word, system),
                                 max_steps=args.max_steps)
    stream = _open_out(args)
    try:
        _emit_rows(_trace_rows(trace), _TRACE_FIELDS, args, stream)
        if args.format == "text":
            stream.write(f"steps: {len(trace)}"
                         + (" (truncated)" if trace.truncated else "") + "\n")
    finally:
        _close_out(stream)
    return EXIT_OK


def _cmd_depth(args) -> int:
    system = _load_system(args.system)
    result = derivational_depth(system, _word_arg(args.word, system),
                                state_cap=args.state_cap)
    stream = _open_out(args)
    try:
        if args.format == "json-lines":
            stream.write(json.dumps(
                {"word": args.word, "value": _fmt_value(result.value)}) + "\n")
            if result.witness is not None:
                for row in _trace_rows(result.witness):
                    stream.write(json.dumps(row, sort_keys=True) + "\n")
        else:
            stream.write(f"depth: {_fmt_value(result.value)}\n")
            if result.witness is not None:
                _emit_rows(_trace_rows(result.witness), _TRACE_FIELDS, args, stream)
    finally:
        _close_out(stream)
    return EXIT_OK


def _cmd_complexity(args) -> int:
    system = _load_system(args.system)
    rows = []
    for n in args.n:
        row = derivational_complexity(system, n, state_cap=args.state_cap)
        rows.append({"n": row.n, "value": _fmt_value(row.value),
                     "witness_word": format_word(row.witness_word),
                     "words_scanned": row.words_scanned})
    stream = _open_out(args)
    try:
        _emit_rows(rows, ["n", "value", "witness_word", "words_scanned"],
                   args, stream)
    finally:
        _close_out(stream)
    return EXIT_OK


def _cmd_distance(args) -> int:
    system = _load_system(args.system)
    u = parse_word(getattr(args, "from"), system.alphabet)
    v = parse_word(args.to, system.alphabet)
    result = distance(system, u, v, state_cap=args.state_cap)
    stream = _open_out(args)
    try:
        if args.format == "json-lines":
            obj = {"status": result.status.value,
                   "distance": result.distance,
                   "states_explored": result.states_explored}
            if result.geodesic is not None:
                obj["geodesic"] = _trace_rows(result.geodesic)
            stream.write(json.dumps(obj, sort_keys=True) + "\n")
        else:
            stream.write(f"status: {result.status.value}\n")
            if result.distance is not None:
                stream.write(f"distance: {result.distance}\n")
            stream.write(f"states_explored: {result.states_explored}\n")
            if result.geodesic is not None:
                _emit_rows(_trace_rows(result.geodesic), _TRACE_FIELDS, args, stream)
    finally:
        _close_out(stream)
    return EXIT_CAP if result.status is DistanceStatus.CAP_EXCEEDED else EXIT_OK


def _cmd_component(args) -> int:
    system = _load_system(args.system)
    comp = component(system, _word_arg(args.word, system),
                     state_cap=args.state_cap)
    stream = _open_out(args)
    try:
        if args.format == "edges":
            for line in edge_lines(comp):
                stream.write(line + "\n")
        elif args.format == "dot":
            stream.write(dot_document(comp))
        elif args.format == "json-lines":
            for i, node in enumerate(comp.nodes):
                stream.write(json.dumps(
                    {"type": "node", "index": i, "word": format_word(node)}) + "\n")
            for ui, row in enumerate(comp.adjacency):
                for vi, step in row:
                    stream.write(json.dumps(
                        {"type": "edge", "from": ui, "to": vi,
                         "rule_id": step.redex.rule_id,
                         "position": step.redex.position,
                         "orientation": step.redex.orientation.value},
                        sort_keys=True) + "\n")
        else:
            edge_count = sum(len(row) for row in comp.adjacency)
            stream.write(f"nodes: {len(comp.nodes)}\n")
            stream.write(f"edges: {edge_count}\n")
            stream.write(f"complete: {str(comp.complete).lower()}\n")
            if comp.complete:
                d, (a, b) = diameter(comp)
                stream.write(f"diameter: {d} ({format_word(a)!r} ~ {format_word(b)!r})\n")
            for i, node in enumerate(comp.nodes):
                stream.write(f"  {i:4d}  {format_word(node)}\n")
    finally:
        _close_out(stream)
    return EXIT_OK if comp.complete else EXIT_CAP


def _cmd_gamma(args) -> int:
    system = _load_system(args.system)
    rows = []
    for n in args.n:
        row = gamma_capital(system, n, state_cap=args.state_cap, jobs=args.jobs)
        rows.append({"n": row.n, "value": row.gamma,
                     "witness_from": format_word(row.witness_pair[0]),
                     "witness_to": format_word(row.witness_pair[1]),
                     "components_scanned": row.components_scanned})
    stream = _open_out(args)
    try:
        _emit_rows(rows, ["n", "value", "witness_from", "witness_to",
                          "components_scanned"], args, stream)
    finally:
        _close_out(stream)
    return EXIT_OK


def _cmd_dehn(args) -> int:
    system = _load_system(args.system)
    rows = []
    for n in args.n:
        row = dehn(system, n, state_cap=args.state_cap, jobs=args.jobs)
        rows.append({"n": row.n, "value": row.value,
                     "witness_from": format_word(row.witness_pair[0])
                     if row.witness_pair else "",
                     "witness_to": format_word(row.witness_pair[1])
                     if row.witness_pair else ""})
    stream = _open_out(args)
    try:
        _emit_rows(rows, ["n", "value", "witness_from", "witness_to"], args, stream)
    finally:
        _close_out(stream)
    return EXIT_OK


def _cmd_gamma_exact(args) -> int:
    system = _load_system(args.system)
    value = gamma_exact(system, _word_arg(args.word, system),
                        node_cap=args.node_cap)
    stream = _open_out(args)
    try:
        if args.format == "json-lines":
            stream.write(json.dumps({"word": args.word, "gamma": value}) + "\n")
        else:
            stream.write(f"gamma: {value}\n")
    finally:
        _close_out(stream)
    return EXIT_OK


def _cmd_check(args) -> int:
    if not args.all and not args.only:
        raise ValueError("check needs --all or --only <name>")
    overrides = {}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.steps is not None:
        overrides["steps"] = args.steps
    if args.n is not None:
        overrides["n"] = args.n
    if args.k is not None:
        overrides["k"] = args.k
    reports = []
    for fn, kwargs in lemmas.default_checks(args.seed):
        if args.only and fn.__name__ not in args.only:
            continue
        kwargs = dict(kwargs)
        for key, value in overrides.items():
            if key in kwargs:
                kwargs[key] = value
            elif key == "n" and "n_max" in kwargs:
                kwargs["n_max"] = value
            elif key == "k" and "k_max" in kwargs:
                kwargs["k_max"] = value
        reports.append((fn, kwargs))
    if args.only:
        known = {fn.__name__ for fn, _ in lemmas.default_checks(args.seed)}
        unknown = [name for name in args.only if name not in known]
        if unknown:
            raise ValueError(f"unknown checks: {', '.join(unknown)}; choices: "
                             + ", ".join(sorted(known)))
    if args.jobs > 1 and len(reports) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(fn, **kwargs) for fn, kwargs in reports]
            results = [f.result() for f in futures]
    else:
        results = [fn(**kwargs) for fn, kwargs in reports]
    sys.stdout.write(lemmas.summarize_reports(results))
    if args.out:
        Path(args.out).write_text(lemmas.reports_to_json_lines(results),
                                  encoding="utf-8")
    verdicts = {r.verdict for r in results}
    if lemmas.Verdict.FAIL in verdicts:
        return EXIT_CHECK_FAIL
    if lemmas.Verdict.INCONCLUSIVE in verdicts:
        return EXIT_CAP
    return EXIT_OK


def _read_fit_table(text: str) -> list[tuple[int, float]]:
    rows = []
    stripped = text.strip()
    if not stripped:
        raise ValueError("empty fit input")
    if stripped.lstrip().startswith("{"):
        for line in stripped.splitlines():
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            value = obj.get("value", obj.get("gamma"))
            rows.append((int(obj["n"]), float(value)))
        return rows
    reader = csv.DictReader(io.StringIO(stripped))
    if reader.fieldnames is None or "n" not in reader.fieldnames:
        raise ValueError("fit input must be a CSV table with an 'n' column "
                         "or JSON lines with 'n' and 'value' fields")
    value_field = "value" if "value" in reader.fieldnames else None
    if value_field is None:
        raise ValueError("fit input needs a 'value' column")
    for record in reader:
        rows.append((int(record["n"]), float(record[value_field])))
    return rows


def _cmd_fit(args) -> int:
    if args.input == "-":
        text = sys.stdin.read()
    else:
        text = Path(args.input).read_text(encoding="utf-8")
    report = fitting.fit_models(_read_fit_table(text))
    stream = _open_out(args)
    try:
        if args.format == "json-lines":
            stream.write(json.dumps(report.to_json_dict(), sort_keys=True) + "\n")
        else:
            stream.write(f"{'model':<10}  {'a':>12}  {'b':>12}  {'rss':>14}\n")
            for name in fitting.MODEL_NAMES:
                m = report.models[name]
                stream.write(f"{name:<10}  {m.a:12.6f}  {m.b:12.6f}  {m.rss:14.6f}\n")
            stream.write(f"best: {report.best_model}\n")
            if report.few_points_caveat:
                stream.write("caveat: fewer than 4 data points\n")
    finally:
        _close_out(stream)
    return EXIT_OK


def _add_common(parser, *, word=False, from_to=False, n=False, state_cap=False,
                node_cap=False, jobs=False, fmt=("text", "csv", "json-lines")):
    parser.add_argument("--system", required=True,
                        help="builtin name (s0, e0, e0-reoriented) or path to a "
                             "system file")
    if word:
        parser.add_argument("--word", required=True,
                            help="space-separated tokens")
    if from_to:
        parser.add_argument("--from", required=True,
                            help="start word (space-separated tokens)")
        parser.add_argument("--to", required=True, help="target word")
    if n:
        parser.add_argument("--n", required=True, action="append", type=int,
                            help="word length (repeatable for a table)")
    if state_cap:
        parser.add_argument("--state-cap", type=int, default=DEFAULT_STATE_CAP)
    if node_cap:
        parser.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    if jobs:
        parser.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                            help="worker bound for scans")
    parser.add_argument("--format", choices=fmt, default=fmt[0])
    parser.add_argument("--out", help="write output to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="thuelab",
        description="Workbench for length-preserving string rewriting systems")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="parse and validate a system definition")
    _add_common(p, fmt=("text", "json-lines"))
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("derive", help="deterministic direct derivation")
    _add_common(p, word=True)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.set_defaults(fn=_cmd_derive)

    p = sub.add_parser("depth", help="longest directed derivation from a word")
    _add_common(p, word=True, state_cap=True)
    p.set_defaults(fn=_cmd_depth)

    p = sub.add_parser("complexity", help="max depth over all words of length n")
    _add_common(p, n=True, state_cap=True, jobs=True)
    p.set_defaults(fn=_cmd_complexity)

    p = sub.add_parser("distance", help="geodesic distance between two words")
    _add_common(p, from_to=True, state_cap=True, fmt=("text", "json-lines"))
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("component", help="equivalence class of a word as a graph")
    _add_common(p, word=True, state_cap=True,
                fmt=("text", "edges", "dot", "json-lines"))
    p.set_defaults(fn=_cmd_component)

    p = sub.add_parser("gamma", help="max distance over equivalent pairs of length n")
    _add_common(p, n=True, state_cap=True, jobs=True)
    p.set_defaults(fn=_cmd_gamma)

    p = sub.add_parser("dehn", help="Dehn function value at n")
    _add_common(p, n=True, state_cap=True, jobs=True)
    p.set_defaults(fn=_cmd_dehn)

    p = sub.add_parser("gamma-exact", help="exact longest distinct-word sequence")
    _add_common(p, word=True, node_cap=True, fmt=("text", "json-lines"))
    p.set_defaults(fn=_cmd_gamma_exact)

    p = sub.add_parser("check", help="run the lemma-check suite")
    p.add_argument("--all", action="store_true", help="run every check")
    p.add_argument("--only", action="append",
                   help="run one named check (repeatable)")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p.add_argument("--trials", type=int, help="override a check's trial count")
    p.add_argument("--steps", type=int, help="override a check's walk length")
    p.add_argument("--n", type=int, help="override a check's n / n_max")
    p.add_argument("--k", type=int, help="override a check's k_max")
    p.add_argument("--out", help="write the JSON-lines report here")
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("fit", help="fit growth models to a table")
    p.add_argument("--input", required=True,
                   help="CSV/JSON-lines table path, or - for stdin")
    p.add_argument("--format", choices=("text", "json-lines"), default="text")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_fit)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (CapExceededError, ComponentTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (ParseError, UnknownTokenError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
