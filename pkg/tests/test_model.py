import datetime
from fractions import Fraction

import pytest

from incmeter import INF, DataError, MeasureValue, TupleId, compare, make_value, parse_schema, load_database


def test_measure_value_exact_and_ordered():
    assert MeasureValue(Fraction(2, 4)) == Fraction(1, 2)
    assert MeasureValue(3) < INF
    assert not INF < INF
    assert INF == INF
    assert sorted([INF, MeasureValue(2), MeasureValue(0)]) == [0, 2, INF]
    assert MeasureValue(1) + INF == INF
    assert INF - 1 == INF


def test_measure_value_rejects_inexact_and_negative():
    with pytest.raises(TypeError):
        MeasureValue(0.5)
    with pytest.raises(ValueError):
        MeasureValue(-1)
    with pytest.raises(ValueError):
        MeasureValue(1) - INF


@pytest.mark.parametrize("text,value", [("17/12", Fraction(17, 12)), ("0.5", Fraction(1, 2)),
                                        ("3", 3), ("inf", None)])
def test_measure_value_parse_and_json(text, value):
    v = MeasureValue.parse(text)
    assert v == (INF if value is None else MeasureValue(value))
    assert MeasureValue.from_json(v.to_json()) == v


def test_json_form():
    assert MeasureValue(Fraction(17, 12)).to_json() == {"num": 17, "den": 12}
    assert INF.to_json() == "inf"


def test_values_and_comparisons():
    d = make_value("date", "2018-12-13")
    assert d.v == datetime.date(2018, 12, 13)
    assert compare(make_value("rational", "3"), make_value("rational", "7/2"), "<")
    # across kinds equality is simply false, ordering is an error
    assert not compare(make_value("int", "3"), make_value("rational", "3"), "=")
    with pytest.raises(TypeError):
        compare(make_value("int", "3"), make_value("rational", "7/2"), "<")
    assert compare(make_value("text", "a"), make_value("text", "a"), "=")
    with pytest.raises(DataError):
        make_value("int", "x")


def test_database_ids_stable_and_duplicates_dropped():
    schema = parse_schema("relation R(A: int, B: text)")
    db = load_database(schema, {"R": [(1, "x"), (2, "y"), (1, "x")]})
    assert len(db) == 2
    assert sorted(db.ids) == [TupleId("R", 1), TupleId("R", 2)]
    sub = db.subset([TupleId("R", 2)])
    assert TupleId("R", 2) in sub and TupleId("R", 1) not in sub
    assert TupleId.parse("R:2") == TupleId("R", 2)


def test_database_rejects_bad_rows():
    schema = parse_schema("relation R(A: int)")
    with pytest.raises(DataError):
        load_database(schema, {"R": [(1, 2)]})
    with pytest.raises(DataError):
        load_database(schema, {"S": [(1,)]})
