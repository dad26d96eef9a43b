import random

import pytest
from hypothesis import given, settings, strategies as st

from incmeter import (ConstraintError, ConstraintSyntaxError, desugar_fd, desugar_nd, parse_constraints,
                      parse_schema, pretty_print)
from incmeter.generate import ROUNDTRIP_SCHEMA, random_constraint_set

SCHEMA = parse_schema("relation MealTicket(Number: int, Value: int, Holder: text, Date: date)")


def test_nd_numbering_matches_textbook_form():
    c = desugar_nd(SCHEMA, "MealTicket", ["Holder", "Date"], "Number", 2, name="c4")
    assert str(c.atoms[0]) == "MealTicket(x1, x2, x3, x4)"
    assert str(c.atoms[1]) == "MealTicket(x5, x6, x3, x4)"
    assert str(c.atoms[2]) == "MealTicket(x7, x8, x3, x4)"
    assert len(c.phi) == 3


def test_fd_is_binary():
    c = desugar_fd(SCHEMA, "MealTicket", ["Number"], "Value", name="c2")
    assert c.arity == 2
    assert [str(x) for x in c.phi[0]] == ["x2 = x5"]


def test_sugar_matches_explicit_denial():
    text = ("fd c2: MealTicket: Number -> Value\n"
            "denial d2: MealTicket(x1, x2, x3, x4), MealTicket(x1, x5, x6, x7) -> x2 = x5\n")
    cs = parse_constraints(text, SCHEMA)
    assert cs["c2"].atoms == cs["d2"].atoms and cs["c2"].phi == cs["d2"].phi


def test_empty_phi_forbids_pattern_outright():
    cs = parse_constraints("denial z: MealTicket(x1, 0, x3, x4) ->\n", SCHEMA)
    assert cs["z"].phi == ()


@pytest.mark.parametrize("text,line", [
    ("denial c1: MealTicket(x1, x2, x3) -> x2 > 0", 1),
    ("denial c1: Nope(x1) -> x1 > 0", 1),
    ("\ndenial c1: MealTicket(x1, x2, x3, x4) -> y > 0", 2),
    ("denial c1: MealTicket(x1, x2, x3, x4) -> x2 > \"a\"", 1),
    ("denial fd: MealTicket(x1, x2, x3, x4) -> x2 > 0", 1),
])
def test_errors_carry_position(text, line):
    with pytest.raises((ConstraintSyntaxError, ConstraintError)) as info:
        parse_constraints(text, SCHEMA)
    if isinstance(info.value, ConstraintSyntaxError):
        assert info.value.line == line


def test_duplicate_names_rejected():
    with pytest.raises((ConstraintError, ConstraintSyntaxError)):
        parse_constraints("fd a: MealTicket: Number -> Value\nfd a: MealTicket: Number -> Holder\n", SCHEMA)


def test_nd_bound_must_be_positive():
    with pytest.raises((ConstraintError, ConstraintSyntaxError)):
        parse_constraints("nd a: MealTicket: Holder -> 0 Number\n", SCHEMA)


@settings(max_examples=100, deadline=None)
@given(st.integers(min_value=0, max_value=2**32))
def test_round_trip(seed):
    cs = random_constraint_set(random.Random(seed), ROUNDTRIP_SCHEMA)
    assert parse_constraints(pretty_print(cs), ROUNDTRIP_SCHEMA) == cs


def test_round_trip_mealticket(ticket):
    _, cs = ticket
    assert parse_constraints(pretty_print(cs), SCHEMA) == cs
