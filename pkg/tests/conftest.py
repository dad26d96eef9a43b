import pytest

from incmeter import load_mealticket, parse_constraints, parse_schema, load_database


@pytest.fixture
def ticket():
    return load_mealticket()


@pytest.fixture
def tid(ticket):
    """Tuple ids t1..t7 of the meal ticket fixture by position."""
    db, _ = ticket
    ids = sorted(db.ids)
    return {f"t{i}": t for i, t in enumerate(ids, 1)}


def build(schema_text, rows, constraints_text):
    schema = parse_schema(schema_text)
    return load_database(schema, rows), parse_constraints(constraints_text, schema)
