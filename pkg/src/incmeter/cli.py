"""Command-line interface.

Exit codes: 0 success (``decide``: true), 1 ``decide`` false or a failed
check (postulate mismatch, oracle mismatch), 2 usage, input or validation
error. Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .errors import IncmeterError
from .files import load_manifest, write_bundle
from .dsl import pretty_print
from .generate import InstanceGen
from .measures import DECISIONS, Analysis, MeasureId, decide, measure_all, parse_measures
from .model import MeasureValue
from .transform import kb_dimacs_like, kb_to_json

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def dump_json(obj) -> str:
    """The one serializer: sorted keys, exact rationals, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False, default=_encode) + "\n"


def _encode(x):
    if isinstance(x, MeasureValue):
        return x.to_json()
    if isinstance(x, (set, frozenset)):
        return sorted(map(str, x))
    return str(x)


def _load(args):
    if not args.manifest:
        raise UsageError("--manifest is required for this command")
    _, db, cs = load_manifest(args.manifest)
    return db, cs


def _tuple_list(db, ids):
    return [{"id": str(t), "tuple": str(db[t])} for t in sorted(ids)]


# -- commands: each returns (payload, text for stdout or None, exit code) ------

def cmd_measure(args):
    db, cs = _load(args)
    which = parse_measures(args.which)
    report = measure_all(db, cs, which)
    payload = {"measures": {str(m): v for m, v in report.values.items()}}
    if args.witness:
        ev = report.evidence
        witness = {}
        if "eta_witness" in ev:
            witness["db:Ieta"] = [{"tuples": sorted(map(str, col)), "p": MeasureValue(p)}
                                  for col, p in sorted(ev["eta_witness"].items(), key=lambda x: sorted(x[0]))]
        if "kb_eta_witness" in ev:
            witness["prop:Ieta"] = [{"items": sorted(map(str, col)), "p": MeasureValue(p)}
                                    for col, p in sorted(ev["kb_eta_witness"].items(),
                                                         key=lambda x: sorted(map(str, x[0])))]
        for key, name in (("hitting_set", "db:IH"), ("conflict_base", "db:IC"),
                          ("kb_hitting_set", "prop:IH"), ("kb_conflict_base", "prop:IC")):
            if ev.get(key) is not None:
                witness[name] = sorted(map(str, ev[key]))
        if ev.get("interpretation_cover"):
            witness["db:Ihs"] = [sorted(map(str, s)) for s in ev["interpretation_cover"]]
        payload["witness"] = witness
    text = None
    if not args.json:
        text = "".join(f"{m}\t{v}\n" for m, v in payload["measures"].items())
    return payload, text, EXIT_OK


def cmd_decide(args):
    try:
        m = MeasureId.parse(args.measure)
        threshold = MeasureValue.parse(args.threshold)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.op not in DECISIONS:
        raise UsageError(f"unknown decision {args.op!r}")
    if args.op == "lv" and threshold == 0:
        raise UsageError("lv needs a threshold greater than 0")
    db, cs = _load(args)
    value = measure_all(db, cs, [m]).values[m]
    verdict = decide(value, args.op, threshold)
    payload = {"measure": str(m), "op": args.op, "threshold": threshold, "value": value, "verdict": verdict}
    return payload, ("true\n" if verdict else "false\n"), EXIT_OK if verdict else EXIT_FALSE


def cmd_explain(args):
    db, cs = _load(args)
    a = Analysis(db, cs)
    h = a.hypergraph
    cl = a.classification
    payload = {
        "mi": [{"tuples": _tuple_list(db, e), "constraints": sorted(h.witnesses[e])} for e in h.edges],
        "mcs": [[str(t) for t in sorted(s)] for s in sorted(a.mcs, key=lambda s: (-len(s), sorted(s)))],
        "problematic": sorted(map(str, cl.problematic)),
        "free": sorted(map(str, cl.free)),
        "contradictory": sorted(map(str, cl.contradictory)),
        "consistent": not len(h),
    }
    if args.kb:
        kb = a.kb
        payload["kb"] = {"render": kb.render(),
                         "mi": sorted(sorted(kb.label(x) if x in db else x.name for x in s) for s in a.kb_mi)}
    text = None
    if not args.json:
        lines = [f"{len(h)} minimal inconsistent sets"]
        for e in payload["mi"]:
            lines.append("  {" + ", ".join(t["tuple"] for t in e["tuples"]) + "} via " + ", ".join(e["constraints"]))
        lines.append(f"{len(payload['mcs'])} maximal consistent subsets")
        for s in payload["mcs"]:
            lines.append("  {" + ", ".join(s) + "}")
        for key in ("problematic", "free", "contradictory"):
            lines.append(f"{key}: " + (", ".join(payload[key]) or "-"))
        if args.kb:
            lines.append("K_DB = " + payload["kb"]["render"])
        text = "\n".join(lines) + "\n"
    return payload, text, EXIT_OK


def cmd_transform(args):
    db, cs = _load(args)
    kb = Analysis(db, cs).kb
    content = kb_dimacs_like(kb) if args.dimacs_like else dump_json(kb_to_json(kb, db))
    if args.out and args.out != "-":
        Path(args.out).write_text(content, encoding="utf-8")
        return {"atoms": len(kb.atoms), "formulas": len(kb.formulas), "out": args.out}, None, EXIT_OK
    return None, content, EXIT_OK


def cmd_check_postulates(args):
    from .postulates import default_store, table_report
    families = ("prop", "db") if args.family == "both" else (args.family,)
    gen = InstanceGen(seed=args.seed)
    store = Path(args.store) if args.store else default_store()
    report, results = table_report(gen, args.trials, store, args.threads, families)
    if args.report:
        Path(args.report).write_text(report, encoding="utf-8")
    bad = [r for r in results if not r.matches]
    payload = {
        "seed": args.seed,
        "trials": args.trials,
        "cells": [{"measure": str(r.measure), "postulate": r.postulate,
                   "expected": "✓" if r.expected else "✗", "verdict": r.verdict,
                   "matches": r.matches} for r in results],
        "mismatches": len(bad),
    }
    return payload, None if args.json else report, EXIT_OK if not bad else EXIT_FALSE


def cmd_oracle_check(args):
    from .oracle import cross_check
    gen = InstanceGen(seed=args.seed, max_tuples=args.max_tuples)

    def one(trial):
        db, cs = gen.instance("oracle", trial)
        return trial, db, cs, cross_check(db, cs)

    if args.threads > 1:
        with ThreadPoolExecutor(args.threads) as pool:
            results = list(pool.map(one, range(args.trials)))
    else:
        results = [one(t) for t in range(args.trials)]
    failures = []
    for trial, db, cs, mismatches in results:
        if not mismatches:
            continue
        where = Path(args.repro_dir) / f"seed{args.seed}-trial{trial}"
        detail = [{"measure": m, "optimized": got, "oracle": want} for m, got, want in mismatches]
        write_bundle(where, db, pretty_print(cs), {"mismatch.json": dump_json(detail)})
        failures.append({"trial": trial, "bundle": str(where), "mismatches": detail})
    payload = {"seed": args.seed, "trials": args.trials, "failures": failures}
    text = None
    if not args.json:
        text = f"{args.trials} instances, {len(failures)} with mismatches\n"
        text += "".join(f"trial {f['trial']}: repro bundle in {f['bundle']}\n" for f in failures)
    return payload, text, EXIT_FALSE if failures else EXIT_OK


# -- parser ---------------------------------------------------------------------

def _global_options(parser, suppress):
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument("--manifest", default=d, help="manifest file naming schema, constraints and CSVs")
    parser.add_argument("--json", default=d, metavar="PATH|-", help="write the JSON result to PATH or stdout")
    parser.add_argument("--seed", type=int, default=argparse.SUPPRESS if suppress else 0)
    parser.add_argument("--threads", type=int, default=argparse.SUPPRESS if suppress else 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="incmeter", description=__doc__.splitlines()[0])
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help):
        p = sub.add_parser(name, help=help)
        _global_options(p, suppress=True)
        p.set_defaults(fn=fn)
        return p

    p = add("measure", cmd_measure, "compute inconsistency measures")
    p.add_argument("--which", default="all", help="comma list such as db:IM,prop:Isharp; or all, db, prop")
    p.add_argument("--witness", action="store_true", help="include hitting sets and eta distributions")

    p = add("decide", cmd_decide, "decide lv (>=), uv (<=) or ev (=) against a threshold")
    p.add_argument("measure", help="e.g. db:IH")
    p.add_argument("op", choices=DECISIONS)
    p.add_argument("threshold", help="p/q, integer, decimal or inf")

    p = add("explain", cmd_explain, "show minimal inconsistent sets, maximal consistent subsets, tuple classes")
    p.add_argument("--kb", action="store_true", help="also show K_DB and its minimal inconsistent sets")

    p = add("transform", cmd_transform, "export the propositional knowledge base")
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--dimacs-like", action="store_true", help="clause listing instead of JSON")

    p = add("check-postulates", cmd_check_postulates, "check the postulate tables")
    p.add_argument("--family", choices=("db", "prop", "both"), default="both")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--report", help="write the markdown table here")
    p.add_argument("--store", help="counterexample directory (default: the bundled one)")

    p = add("oracle-check", cmd_oracle_check, "compare every measure with brute-force oracles")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-tuples", type=int, default=6)
    p.add_argument("--repro-dir", default="oracle-repro", help="where mismatching instances are written")
    return parser


def _error(kind: str, exc: Exception, stderr) -> int:
    diag = {"error": kind, "message": str(exc)}
    for attr in ("line", "column", "relation", "row"):
        if getattr(exc, attr, None) is not None:
            diag[attr] = getattr(exc, attr)
    stderr.write(dump_json(diag))
    return EXIT_ERROR


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        payload, text, code = args.fn(args)
    except UsageError as exc:
        return _error("usage", exc, stderr)
    except IncmeterError as exc:
        return _error(type(exc).__name__, exc, stderr)
    except OSError as exc:
        return _error("io", exc, stderr)
    if args.json and payload is not None:
        if args.json == "-":
            stdout.write(dump_json(payload))
        else:
            Path(args.json).write_text(dump_json(payload), encoding="utf-8")
    if text is not None and (args.json != "-" or payload is None):
        stdout.write(text)
    elif text is None and payload is not None and not args.json:
        stdout.write(dump_json(payload))
    return code


if __name__ == "__main__":
    sys.exit(main())
