"""Acceptance criteria 1-10, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the
terminal output) or ``python tests/test_acceptance.py`` for a plain summary.
Criterion 7 runs the full 1000-trial postulate check and takes a few minutes.
"""

from __future__ import annotations

import io
import json
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from incmeter import (INF, MeasureId, MeasureValue, collapse_example, conflict_hypergraph, load_mealticket,
                      maximal_consistent_subsets, mealticket_manifest, measure_all, mi_of_kb,
                      parse_constraints, parse_schema, load_database, pretty_print, transform)
from incmeter.cli import main as cli_main
from incmeter.generate import ROUNDTRIP_SCHEMA, InstanceGen, random_constraint_set
from incmeter.measures import ALL_MEASURES, NAMES, Analysis
from incmeter.oracle import cross_check, oracle_kb_mc_count
from incmeter.transform import mi_of_db

DB_GOLDEN = (1, 3, 2, 4, 2, 2, 7, INF, 2, 1)
PROP_GOLDEN = (1, 4, Fraction(17, 12), 9, 14, 2, 9, 1, 2, Fraction(1, 2))
N_RANDOM = 500


def _emit(line: str, capsys=None) -> None:
    if capsys is None:
        print(line, flush=True)
        return
    with capsys.disabled():
        print("\n" + line, flush=True)


def _run(number: int, title: str, check, capsys=None) -> None:
    try:
        detail = check()
    except AssertionError as exc:
        _emit(f"CRITERION {number:>2} FAIL  {title}: {exc}", capsys)
        raise
    _emit(f"CRITERION {number:>2} PASS  {title}" + (f": {detail}" if detail else ""), capsys)


def _diff(names, got, want) -> str:
    return ", ".join(f"{n} got {g} want {w}" for n, g, w in zip(names, got, want) if g != w)


def _ids():
    db, cs = load_mealticket()
    ids = sorted(db.ids)
    return db, cs, {i: t for i, t in enumerate(ids, 1)}


_instances: list | None = None


def _random_instances():
    global _instances
    if _instances is None:
        gen = InstanceGen(seed=2024, max_tuples=6, max_constraints=3)
        _instances = [gen.instance("acceptance", i) for i in range(N_RANDOM)]
    return _instances


# -- criteria -------------------------------------------------------------------

def criterion_1():
    start = time.perf_counter()
    db, cs = load_mealticket()
    got = measure_all(db, cs, "db").as_tuple("db")
    elapsed = time.perf_counter() - start
    assert got == DB_GOLDEN, _diff(NAMES, got, DB_GOLDEN)
    assert elapsed < 1, f"took {elapsed:.2f}s"
    return f"{tuple(map(str, got))} in {elapsed:.3f}s"


def criterion_2():
    start = time.perf_counter()
    db, cs = load_mealticket()
    got = measure_all(db, cs, "prop").as_tuple("prop")
    elapsed = time.perf_counter() - start
    assert got == PROP_GOLDEN, _diff(NAMES, got, PROP_GOLDEN)
    assert elapsed < 1, f"took {elapsed:.2f}s"
    return f"{tuple(map(str, got))} in {elapsed:.3f}s"


def criterion_3():
    db, cs, t = _ids()
    problems = []
    mi = set(conflict_hypergraph(db, cs).edges)
    if mi != {frozenset([t[5]]), frozenset([t[1], t[3]]), frozenset([t[2], t[3]])}:
        problems.append(f"MI(D) = {mi}")
    mc = set(maximal_consistent_subsets(db.ids, mi))
    if mc != {frozenset([t[1], t[2], t[4], t[6], t[7]]), frozenset([t[3], t[4], t[6], t[7]])}:
        problems.append(f"MC(D) = {mc}")
    kb = transform(db, cs)
    n_mc, brute = len(Analysis(db, cs).kb_mcs), oracle_kb_mc_count(db, cs)
    if n_mc != 15 or brute != 15:
        problems.append(f"|MC(K_DB)| = {n_mc} (brute force {brute}), want 15")
    g = {f.sources[0]: f for f in kb.formulas}
    want = {frozenset([t[5], g["c1"]]), frozenset([t[1], t[3], g["c3"]]),
            frozenset([t[2], t[3], g["c3"]]), frozenset([t[5], t[6], t[7], g["c4"]])}
    if set(mi_of_kb(kb)) != want:
        problems.append("MI(K_DB) differs")
    db2, cs2 = collapse_example()
    kb2 = transform(db2, cs2)
    if kb2.render() != "{a1, ¬a1}" or len(mi_of_kb(kb2)) != 1:
        problems.append(f"collapse gives {kb2.render()} with {len(mi_of_kb(kb2))} MI sets")
    assert not problems, "; ".join(problems)
    return "MI(D), MC(D), MI(K_DB), collapse"


def criterion_4():
    start = time.perf_counter()
    bad = []
    for i, (db, cs) in enumerate(_random_instances()):
        for m, got, want in cross_check(db, cs):
            bad.append(f"instance {i} {m}: {got} vs oracle {want}")
    elapsed = time.perf_counter() - start
    assert not bad, f"{len(bad)} mismatches, first {bad[:3]}"
    assert elapsed < 120, f"took {elapsed:.1f}s"
    return f"{N_RANDOM} instances x 20 measures in {elapsed:.1f}s"


def criterion_5():
    bad = []
    for i, (db, cs) in enumerate(_random_instances()):
        r = measure_all(db, cs)
        if r["prop:Ihs"] != r["prop:IB"]:
            bad.append(f"{i}: Ihs {r['prop:Ihs']} != IB {r['prop:IB']}")
        if r["db:IC"] != r["db:IH"]:
            bad.append(f"{i}: IC {r['db:IC']} != IH {r['db:IH']}")
        if len(r.evidence["kb_mi"]) > len(mi_of_db(db, cs)):
            bad.append(f"{i}: |MI(K_DB)| > |MI(DB)|")
    assert not bad, "; ".join(bad[:5])
    return f"{N_RANDOM} instances"


def criterion_6():
    gen = InstanceGen(seed=2025, max_tuples=6, max_constraints=3)
    bad = []
    for i in range(N_RANDOM):
        db, cs = gen.instance("pair", i)
        rng = gen.rng("pair-subset", i)
        sub = db.subset([t for t in db.ids if rng.random() < 0.6])
        small, big = measure_all(sub, cs), measure_all(db, cs)
        d_consistent = len(conflict_hypergraph(sub, cs)) == 0
        for m in ALL_MEASURES:
            if (small.values[m] == 0) != d_consistent:
                bad.append(f"{i} {m}: consistency")
            if not small.values[m] <= big.values[m]:
                bad.append(f"{i} {m}: {small.values[m]} > {big.values[m]}")
    assert not bad, "; ".join(bad[:5])
    return f"{N_RANDOM} pairs x 20 measures"


def criterion_7(tmp_dir: Path):
    out = tmp_dir / "postulates.json"
    report = tmp_dir / "postulates.md"
    start = time.perf_counter()
    code = cli_main(["--json", str(out), "check-postulates", "--trials", "1000", "--seed", "42",
                     "--report", str(report)], stdout=io.StringIO(), stderr=io.StringIO())
    elapsed = time.perf_counter() - start
    data = json.loads(out.read_text())
    bad = [f"{c['measure']} {c['postulate']} expected {c['expected']} got {c['verdict']}"
           for c in data["cells"] if not c["matches"]]
    assert code == 0 and not bad, f"{len(bad)} of {len(data['cells'])} cells differ: " + "; ".join(bad)
    return f"{len(data['cells'])} cells in {elapsed:.0f}s"


def _tractability_instance(n, seed=0):
    rng = random.Random(seed)
    pairs = n * 5 // 100 // 2
    rows = [(k, v) for k in range(pairs) for v in (0, 1)]
    rows += [(k, rng.randrange(100)) for k in range(pairs, pairs + n - 2 * pairs)]
    schema = parse_schema("relation R(K: int, V: int)")
    return load_database(schema, {"R": rows}), parse_constraints("fd f: R: K -> V\n", schema)


def criterion_8():
    which = "db:IB,db:IM,db:Isharp,db:IP"
    times = {}
    for n in (10_000, 20_000):
        db, cs = _tractability_instance(n)
        best = None
        for _ in range(3):
            start = time.perf_counter()
            r = measure_all(db, cs, which)
            took = time.perf_counter() - start
            best = took if best is None else min(best, took)
        assert r["db:IM"] == n * 5 // 100 // 2
        times[n] = best
    ratio = times[20_000] / times[10_000]
    assert times[10_000] < 5, f"n=10000 took {times[10_000]:.2f}s"
    assert ratio < 4, f"doubling n multiplied runtime by {ratio:.2f}"
    return f"{times[10_000]:.2f}s at 10k, ratio {ratio:.2f}"


def criterion_9():
    rng = random.Random(9)
    for i in range(200):
        cs = random_constraint_set(rng, ROUNDTRIP_SCHEMA)
        text = pretty_print(cs)
        assert parse_constraints(text, ROUNDTRIP_SCHEMA) == cs, f"set {i}:\n{text}"
    return "200 sets"


def criterion_10():
    db, cs = load_mealticket()
    r = measure_all(db, cs)
    bad = []
    checks = 0
    for family, golden in (("db", DB_GOLDEN), ("prop", PROP_GOLDEN)):
        for name, v in zip(NAMES, golden):
            m = MeasureId(family, name)
            v = MeasureValue(v)
            verdicts = {}
            ops = [("lv", v), ("uv", v), ("ev", v)]
            if not v.is_infinite:
                ops.append(("ev+1", v + 1))
            for op, threshold in ops:
                if op == "lv" and threshold == 0:
                    continue  # lv needs v > 0
                code = cli_main(["--manifest", str(mealticket_manifest()), "decide", str(m), op[:2], str(threshold)],
                                stdout=io.StringIO(), stderr=io.StringIO())
                verdicts[op] = code
                checks += 1
            for op, code in verdicts.items():
                want = 1 if op == "ev+1" else 0
                if code != want:
                    bad.append(f"{m} {op} {v} (value {r[m]}) exit {code}")
    assert not bad, "; ".join(bad)
    return f"{checks} decisions"


# -- pytest entry points ---------------------------------------------------------

def test_criterion_1_database_goldens(capsys):
    _run(1, "database measures on the ticket fixture", criterion_1, capsys)


def test_criterion_2_propositional_goldens(capsys):
    _run(2, "propositional measures on the ticket fixture", criterion_2, capsys)


def test_criterion_3_structural_goldens(capsys):
    _run(3, "structural goldens", criterion_3, capsys)


def test_criterion_4_oracle_equivalence(capsys):
    _run(4, "optimized measures equal the oracles", criterion_4, capsys)


def test_criterion_5_identities(capsys):
    _run(5, "Ihs = IB, IC = IH, |MI(K_DB)| <= |MI(DB)|", criterion_5, capsys)


def test_criterion_6_consistency_and_monotony(capsys):
    _run(6, "consistency and monotony", criterion_6, capsys)


def test_criterion_7_postulate_tables(tmp_path, capsys):
    _run(7, "postulate tables, 1000 trials, seed 42", lambda: criterion_7(tmp_path), capsys)


def test_criterion_8_tractability(capsys):
    _run(8, "IB IM Isharp IP scale polynomially", criterion_8, capsys)


def test_criterion_9_parser_round_trip(capsys):
    _run(9, "parse(pretty_print(cs)) == cs", criterion_9, capsys)


def test_criterion_10_decisions(capsys):
    _run(10, "lv/uv/ev decisions on golden values", criterion_10, capsys)


if __name__ == "__main__":
    import tempfile
    failed = 0
    with tempfile.TemporaryDirectory() as d:
        for n, fn in enumerate([criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
                                lambda: criterion_7(Path(d)), criterion_8, criterion_9, criterion_10], 1):
            try:
                _run(n, fn.__name__ if n != 7 else "criterion_7", fn)
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
