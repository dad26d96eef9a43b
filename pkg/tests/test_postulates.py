from pathlib import Path

import pytest

from incmeter import MeasureId, collapse_example
from incmeter.generate import InstanceGen
from incmeter.measures import NAMES
from incmeter.postulates import (EXPECTED_TABLES, POSTULATES, Case, View, almost_consistency_case,
                                 antecedent_error, bundle_dir, check_family, default_store, expected,
                                 four_cycle_case, holds, load_case, random_cases, save_case, shared_tuple_case,
                                 table_report,
                                 verify_stored)

STORE = default_store()
STORED = sorted(p.parent for p in STORE.glob("*/*/case.json"))


def test_tables_have_one_mark_per_measure():
    for family, table in EXPECTED_TABLES.items():
        assert set(table) == set(POSTULATES)
        assert all(len(row) == len(NAMES) and set(row) <= {"✓", "✗"} for row in table.values())


@pytest.mark.parametrize("directory", STORED, ids=lambda p: f"{p.parent.name}-{p.name}")
def test_stored_counterexample_reverifies(directory):
    case, m = load_case(directory)
    assert not expected(m, case.postulate)
    assert antecedent_error(case) is None
    assert not holds(case, m)
    assert verify_stored(m, case.postulate, STORE).verdict == "counterexample-verified"


def test_every_violated_cell_has_a_bundle_except_eta_attenuation():
    missing = []
    for family in ("prop", "db"):
        for p in POSTULATES:
            for n in NAMES:
                m = MeasureId(family, n)
                if not expected(m, p) and not (bundle_dir(STORE, m, p) / "case.json").exists():
                    missing.append(f"{m} {p}")
    assert missing == ["db:Ieta Atten"]


def test_eta_attenuation_cannot_fail_for_databases():
    # a standalone MI set of size k >= 2 has eta value 1/k, a contradictory tuple 1
    gen = InstanceGen(seed=4)
    m = MeasureId("db", "eta")
    seen = 0
    for trial in range(80):
        for case in random_cases("Atten", "db", gen, trial):
            seen += 1
            assert holds(case, m)
    assert seen > 0


def _ticket_case(ticket, postulate, views):
    db, cs = ticket
    return Case(postulate, "db", db, cs, {k: View(frozenset(t), tuple(c)) for k, (t, c) in views.items()})


def test_antecedents_reject_wrong_cases(ticket, tid):
    db, cs = ticket
    all_ids = set(db.ids)
    names = cs.names
    free_removed = _ticket_case(ticket, "Penalty", {"base": (all_ids, names),
                                                    "reduced": (all_ids - {tid["t4"]}, names)})
    assert "not problematic" in antecedent_error(free_removed)
    ffi = _ticket_case(ticket, "FFI", {"base": (all_ids, names), "reduced": (all_ids - {tid["t4"]}, names)})
    assert antecedent_error(ffi) is None and all(holds(ffi, MeasureId("db", n)) for n in NAMES if n != "nc")
    overlap = _ticket_case(ticket, "SA", {"left": ({tid["t1"], tid["t3"]}, names),
                                          "right": ({tid["t3"]}, names),
                                          "union": ({tid["t1"], tid["t3"]}, names)})
    assert "disjoint" in antecedent_error(overlap)


def test_mi_views_must_be_minimal(ticket, tid):
    db, cs = ticket
    case = _ticket_case(ticket, "MINorm", {"source": (set(db.ids), cs.names),
                                           "mi": ({tid["t1"], tid["t2"], tid["t3"]}, cs.names)})
    assert antecedent_error(case) is not None
    case.views["mi"] = View(frozenset({tid["t1"], tid["t3"]}), cs.names)
    assert antecedent_error(case) is None
    assert holds(case, MeasureId("db", "M")) and not holds(case, MeasureId("db", "P"))


def test_collapse_breaks_propositional_penalty():
    # removing one of two constraints with the same formula leaves K_DB as it was
    db, cs = collapse_example()
    case = Case("Penalty", "prop", db, cs, {"base": View(db.ids, ("c1", "c2")),
                                            "reduced": View(db.ids, ("c2",))})
    assert antecedent_error(case) is None
    for n in ("M", "sharp", "P", "A", "nc"):
        assert not holds(case, MeasureId("prop", n))


def test_almost_consistency_family():
    for family in ("prop", "db"):
        case = almost_consistency_case(family)
        assert antecedent_error(case) is None
        assert holds(case, MeasureId(family, "sharp")) and holds(case, MeasureId(family, "eta"))
        assert not holds(case, MeasureId(family, "M"))


def test_shared_tuple_cases():
    for family in ("prop", "db"):
        case = shared_tuple_case(family)
        assert antecedent_error(case) is None
        assert holds(case, MeasureId(family, "M")) and not holds(case, MeasureId(family, "H"))


def test_save_and_load_round_trip(tmp_path):
    case = shared_tuple_case("db")
    m = MeasureId("db", "P")
    save_case(case, m, tmp_path / "cx")
    again, m2 = load_case(tmp_path / "cx")
    assert m2 == m and antecedent_error(again) is None and not holds(again, m)
    assert (tmp_path / "cx" / "R.csv").read_text().startswith("A,B,C")


def test_refuses_to_store_non_counterexample(tmp_path):
    from incmeter.postulates import PostulateError
    with pytest.raises(PostulateError):
        save_case(shared_tuple_case("db"), MeasureId("db", "M"), tmp_path / "cx")


def test_random_cases_satisfy_antecedents():
    gen = InstanceGen(seed=9)
    for p in POSTULATES[:-1]:
        for family in ("prop", "db"):
            for trial in range(5):
                for case in random_cases(p, family, gen, trial):
                    assert antecedent_error(case) is None


def test_small_family_check_and_report():
    gen = InstanceGen(seed=1)
    results = check_family("db", gen, trials=3)
    assert len(results) == len(POSTULATES) * len(NAMES)
    dominance = [r for r in results if r.postulate == "Dominance"]
    assert all(r.verdict == "satisfied-by-definition" for r in dominance)
    report, _ = table_report(gen, 2, families=("db",))
    assert report.startswith("## Database measures")
    assert "| Penalty |" in report


def test_missing_store_entry_is_a_mismatch(tmp_path):
    r = verify_stored(MeasureId("db", "B"), "Penalty", tmp_path)
    assert r.verdict == "no-counterexample" and not r.matches and r.mark == "?"


def test_four_cycle_breaks_database_super_additivity_for_ia():
    case = four_cycle_case()
    assert antecedent_error(case) is None
    m = MeasureId("db", "A")
    assert case.values(m) == {"left": 1, "right": 1, "union": 1}
    assert not holds(case, m)
    assert holds(case, MeasureId("db", "M"))


def test_structured_cases_feed_the_expected_holds_cells():
    res = check_family("db", InstanceGen(seed=2), 1, postulates=["SA"])
    ia = next(r for r in res if r.measure == MeasureId("db", "A"))
    assert ia.expected and ia.verdict == "violated" and ia.counterexample is not None
