"""Bundled sample instances."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from .dsl import ConstraintSet, parse_constraints
from .files import load_manifest, parse_schema
from .model import Database, load_database


def data_path(*parts: str) -> Path:
    return Path(str(resources.files("incmeter").joinpath("data", *parts)))


def mealticket_manifest() -> Path:
    return data_path("mealticket", "manifest.txt")


def load_mealticket() -> tuple[Database, ConstraintSet]:
    """The seven meal tickets with constraints c1 (positive value), c2, c3 (FDs) and c4 (ND)."""
    _, db, cs = load_manifest(mealticket_manifest())
    return db, cs


def collapse_example() -> tuple[Database, ConstraintSet]:
    """One tuple R(0) violating two unary constraints whose formulas coincide."""
    schema = parse_schema("relation R(A: int)")
    db = load_database(schema, {"R": [(0,)]})
    cs = parse_constraints("denial c1: R(x) -> x = 1\ndenial c2: R(x) -> x = 2\n", schema)
    return db, cs
