from fractions import Fraction

import pytest

from incmeter import INF, MeasureId, collapse_example, db_measure, measure_all, prop_measure
from incmeter.generate import InstanceGen
from incmeter.measures import decide, parse_measures
from incmeter.transform import kb_set_for, mi_of_db

DB_GOLDEN = (1, 3, 2, 4, 2, 2, 7, INF, 2, 1)
# brute force over all 2^10 item subsets finds 12 maximal consistent subsets of K_DB
PROP_COMPUTED = (1, 4, Fraction(17, 12), 9, 11, 2, 9, 1, 2, Fraction(1, 2))


def test_database_measures_on_tickets(ticket):
    db, cs = ticket
    assert measure_all(db, cs, "db").as_tuple("db") == DB_GOLDEN


def test_propositional_measures_on_tickets(ticket):
    db, cs = ticket
    assert measure_all(db, cs, "prop").as_tuple("prop") == PROP_COMPUTED


def test_single_measure_helpers(ticket):
    db, cs = ticket
    assert db_measure("IH", db, cs) == 2
    assert prop_measure("prop:Isharp", db, cs) == Fraction(17, 12)
    with pytest.raises(ValueError):
        db_measure("prop:IH", db, cs)


def test_collapse_example_values():
    db, cs = collapse_example()
    r = measure_all(db, cs)
    assert r["prop:IM"] == 1 and r["db:IM"] == 1
    assert r["db:IA"] == 1  # one empty maximal consistent subset plus one contradictory tuple, minus one


def test_empty_database_is_all_zero(ticket):
    db, cs = ticket
    r = measure_all(db.subset([]), cs)
    assert all(v == 0 for v in r.values.values())


def test_lazy_intermediates(ticket):
    db, cs = ticket
    r = measure_all(db, cs, "db:IB")
    assert "mc" not in r.computed and "kb" not in r.computed


def test_parse_measures():
    assert parse_measures("db:IM,prop:Isharp,db:IM") == [MeasureId("db", "M"), MeasureId("prop", "sharp")]
    assert len(parse_measures("all")) == 20
    with pytest.raises(ValueError):
        parse_measures("db:Inope")


@pytest.mark.parametrize("op,v,want", [("lv", "2", True), ("uv", "1", False), ("ev", "2", True),
                                       ("ev", "inf", False), ("uv", "inf", True), ("lv", "inf", False)])
def test_decide(op, v, want):
    from incmeter import MeasureValue
    assert decide(MeasureValue(2), op, MeasureValue.parse(v)) is want
    assert decide(INF, "lv", MeasureValue.parse(v)) is True or op != "lv"


def test_decide_lv_zero_rejected():
    from incmeter import MeasureValue
    with pytest.raises(ValueError):
        decide(MeasureValue(1), "lv", MeasureValue(0))


def _random_pairs(n, seed):
    gen = InstanceGen(seed=seed, max_tuples=6)
    for trial in range(n):
        db, cs = gen.instance("pairs", trial)
        rng = gen.rng("subset", trial)
        sub = db.subset([t for t in db.ids if rng.random() < 0.6])
        yield sub, db, cs


def test_ordering_facts():
    for _, db, cs in _random_pairs(120, 11):
        r = measure_all(db, cs, "db")
        v = lambda n: r[MeasureId("db", n)]  # noqa: E731
        assert v("B") <= v("M") and v("sharp") <= v("M") and v("H") <= v("M") and v("H") <= v("P")
        assert v("P") <= len(db)
        assert 0 <= v("eta") <= 1


def test_consistency_and_monotony():
    for sub, db, cs in _random_pairs(120, 12):
        small, big = measure_all(sub, cs), measure_all(db, cs)
        for m in small.values:
            assert (small.values[m] == 0) == (len(small.evidence.get("mi", [])) == 0 if m.family == "db"
                                              else small.evidence["kb"].is_consistent())
            assert small.values[m] <= big.values[m], m


def test_identities():
    gen = InstanceGen(seed=13, max_tuples=6)
    for trial in range(120):
        db, cs = gen.instance("ident", trial)
        r = measure_all(db, cs)
        assert r["prop:Ihs"] == r["prop:IB"]
        assert r["db:IC"] == r["db:IH"]
        formula_level = mi_of_db(db, cs)
        assert {kb_set_for(r.evidence["kb"], s, c) for s, c in formula_level} == set(r.evidence["kb_mi"])
        assert len(r.evidence["kb_mi"]) <= len(formula_level)
