"""Seeded random instances for property tests, oracle runs and postulate checks."""

from __future__ import annotations

import datetime
import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction

from .dsl import (Comparison, Const, ConstraintSet, DenialConstraint, RelationAtom, Var,
                  desugar_fd, desugar_nd)
from .model import Attribute, Database, RelationScheme, Schema, Value, load_database

ATTR_NAMES = "ABCD"


def derive_seed(seed: int, *labels) -> int:
    """A 64-bit seed that depends only on ``seed`` and the labels."""
    digest = hashlib.sha256(repr((seed,) + labels).encode()).digest()
    return int.from_bytes(digest[:8], "big")


def _int(v: int) -> Const:
    return Const(Value("int", v))


@dataclass
class InstanceGen:
    """Small random databases over int-valued relations R, S with 1 to 3 constraints.

    Constraints are unary denials, functional dependencies and ternary
    numerical dependencies. Values come from ``range(domain)`` so that
    conflicts are frequent.
    """

    seed: int = 0
    max_tuples: int = 8
    max_relations: int = 2
    max_constraints: int = 3
    min_constraints: int = 1
    domain: int = 3

    def rng(self, *labels) -> random.Random:
        return random.Random(derive_seed(self.seed, *labels))

    def schema(self, rng: random.Random) -> Schema:
        n = rng.randint(1, self.max_relations)
        rels = []
        for name in "RS"[:n]:
            arity = rng.randint(2, 3)
            rels.append(RelationScheme(name, tuple(Attribute(a, "int") for a in ATTR_NAMES[:arity])))
        return Schema(rels)

    def database(self, rng: random.Random, schema: Schema, max_tuples: int | None = None) -> Database:
        n = rng.randint(0, self.max_tuples if max_tuples is None else max_tuples)
        rows: dict[str, list] = {r.name: [] for r in schema}
        rels = list(schema)
        for _ in range(n):
            r = rng.choice(rels)
            rows[r.name].append(tuple(rng.randrange(self.domain) for _ in range(r.arity)))
        return load_database(schema, rows)

    def constraint(self, rng: random.Random, schema: Schema, name: str) -> DenialConstraint:
        rs = rng.choice(list(schema))
        kind = rng.choices(["unary", "fd", "nd"], weights=[35, 40, 25])[0]
        names = list(rs.attribute_names)
        if kind == "fd":
            rhs = rng.choice(names)
            others = [a for a in names if a != rhs]
            lhs = rng.sample(others, rng.randint(1, len(others)))
            return desugar_fd(schema, rs.name, sorted(lhs), rhs, name=name)
        if kind == "nd":
            rhs = rng.choice(names)
            others = [a for a in names if a != rhs]
            lhs = rng.sample(others, rng.randint(0, len(others)))
            return desugar_nd(schema, rs.name, sorted(lhs), rhs, 2, name=name)
        xs = [Var(f"x{i + 1}") for i in range(rs.arity)]
        atom = RelationAtom(rs.name, tuple(xs))
        return DenialConstraint(name, (atom,), self._phi(rng, xs))

    def _comparison(self, rng: random.Random, xs) -> Comparison:
        x = rng.choice(xs)
        if len(xs) > 1 and rng.random() < 0.3:
            y = rng.choice([v for v in xs if v != x])
            return Comparison(x, rng.choice(["=", "!=", "<"]), y)
        return Comparison(x, rng.choice(["=", "!=", "<", "<=", ">", ">="]),
                          _int(rng.randrange(self.domain)))

    def _phi(self, rng: random.Random, xs) -> tuple:
        shape = rng.choices(["one", "and", "or", "empty"], weights=[55, 20, 20, 5])[0]
        if shape == "empty":
            return ()
        if shape == "one":
            return ((self._comparison(rng, xs),),)
        if shape == "and":
            return ((self._comparison(rng, xs), self._comparison(rng, xs)),)
        return ((self._comparison(rng, xs),), (self._comparison(rng, xs),))

    def constraints(self, rng: random.Random, schema: Schema, k: int | None = None) -> ConstraintSet:
        if k is None:
            k = rng.randint(self.min_constraints, self.max_constraints)
        return ConstraintSet(self.constraint(rng, schema, f"c{i + 1}") for i in range(k))

    def instance(self, *labels) -> tuple[Database, ConstraintSet]:
        rng = self.rng("instance", *labels)
        schema = self.schema(rng)
        cs = self.constraints(rng, schema)
        return self.database(rng, schema), cs

    def weaken(self, rng: random.Random, schema: Schema, c: DenialConstraint, name: str) -> DenialConstraint:
        """A constraint logically implied by ``c``: an extra disjunct in phi or an extra atom."""
        if rng.random() < 0.5:
            xs = sorted({Var(v) for v in c.atom_variables()}, key=lambda v: v.name)
            extra = (self._comparison(rng, xs),)
            return DenialConstraint(name, c.atoms, c.phi + (extra,))
        rs = rng.choice(list(schema))
        used = c.atom_variables()
        args = []
        for i in range(rs.arity):
            if rng.random() < 0.3:
                args.append(_int(rng.randrange(self.domain)))
            else:
                fresh = f"y{i + 1}"
                while fresh in used:
                    fresh += "_"
                args.append(Var(fresh))
        return DenialConstraint(name, c.atoms + (RelationAtom(rs.name, tuple(args)),), c.phi)


# -- constraint ASTs for parser round trips ----------------------------------

ROUNDTRIP_SCHEMA = Schema([
    RelationScheme("Item", (Attribute("Id", "int"), Attribute("Price", "rational"),
                            Attribute("Label", "text"), Attribute("Day", "date"))),
    RelationScheme("Pair", (Attribute("Left", "int"), Attribute("Right", "int"))),
])

_TEXTS = ["", "a", "Zoë", 'say "hi"', "back\\slash", "comma, here", "denial"]


def _random_value(rng: random.Random, kind: str) -> Value:
    if kind == "int":
        return Value("int", rng.randint(-50, 50))
    if kind == "rational":
        return Value("rational", Fraction(rng.randint(-20, 20), rng.randint(1, 9)))
    if kind == "text":
        return Value("text", rng.choice(_TEXTS))
    return Value("date", datetime.date(2000, 1, 1) + datetime.timedelta(days=rng.randint(0, 9000)))


def random_constraint(rng: random.Random, schema: Schema, name: str) -> DenialConstraint:
    """A valid constraint with random atoms, constants of every kind and a DNF phi."""
    counter = 0
    kinds: dict[str, str] = {}
    atoms = []
    for _ in range(rng.randint(1, 3)):
        rs = rng.choice(list(schema))
        args = []
        for attr in rs.attributes:
            same_kind = [v for v, k in kinds.items() if k == attr.kind]
            r = rng.random()
            if same_kind and r < 0.3:
                args.append(Var(rng.choice(same_kind)))
            elif r < 0.45:
                args.append(Const(_random_value(rng, attr.kind)))
            else:
                counter += 1
                v = f"v{counter}" if rng.random() < 0.5 else f"x_{counter}"
                kinds[v] = attr.kind
                args.append(Var(v))
        atoms.append(RelationAtom(rs.name, tuple(args)))
    phi = []
    if kinds:
        for _ in range(rng.randint(0, 3)):
            conj = []
            for _ in range(rng.randint(1, 3)):
                v = rng.choice(sorted(kinds))
                same = [w for w in kinds if kinds[w] == kinds[v] and w != v]
                if same and rng.random() < 0.4:
                    other = Var(rng.choice(sorted(same)))
                else:
                    other = Const(_random_value(rng, kinds[v]))
                left, right = (Var(v), other) if rng.random() < 0.7 else (other, Var(v))
                conj.append(Comparison(left, rng.choice(["=", "!=", "<", "<=", ">", ">="]), right))
            phi.append(tuple(conj))
    return DenialConstraint(name, tuple(atoms), tuple(phi))


def random_constraint_set(rng: random.Random, schema: Schema = ROUNDTRIP_SCHEMA,
                          max_size: int = 5) -> ConstraintSet:
    return ConstraintSet(random_constraint(rng, schema, f"k{i}")
                         for i in range(rng.randint(0, max_size)))
