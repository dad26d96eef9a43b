"""Typed relational data model and the extended-rational measure value."""

from __future__ import annotations

import datetime
import functools
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, NamedTuple, Sequence

from .errors import DataError

KINDS = ("int", "rational", "text", "date")
_KIND_ALIASES = {
    "int": "int",
    "integer": "int",
    "rational": "rational",
    "rat": "rational",
    "text": "text",
    "str": "text",
    "string": "text",
    "date": "date",
}


def normalize_kind(name: str) -> str:
    try:
        return _KIND_ALIASES[name.lower()]
    except KeyError:
        raise DataError(f"unknown attribute type {name!r}") from None


@dataclass(frozen=True, slots=True)
class Value:
    """A scalar tagged with its attribute kind.

    Integers and rationals are exact; dates are calendar dates.
    """

    kind: str
    v: object

    def __str__(self) -> str:
        if self.kind == "date":
            return self.v.isoformat()
        return str(self.v)


def make_value(kind: str, raw) -> Value:
    """Coerce ``raw`` (a string or a native Python value) into a Value of ``kind``."""
    try:
        if kind == "int":
            if isinstance(raw, bool):
                raise TypeError
            if isinstance(raw, str):
                return Value("int", int(raw.strip()))
            if isinstance(raw, int):
                return Value("int", raw)
            if isinstance(raw, Fraction) and raw.denominator == 1:
                return Value("int", int(raw))
            raise TypeError
        if kind == "rational":
            if isinstance(raw, bool) or isinstance(raw, float):
                raise TypeError
            if isinstance(raw, (str, int, Fraction)):
                return Value("rational", Fraction(raw.strip() if isinstance(raw, str) else raw))
            raise TypeError
        if kind == "text":
            if not isinstance(raw, str):
                raise TypeError
            return Value("text", raw)
        if kind == "date":
            if isinstance(raw, datetime.datetime):
                raise TypeError
            if isinstance(raw, datetime.date):
                return Value("date", raw)
            if isinstance(raw, str):
                return Value("date", datetime.date.fromisoformat(raw.strip()))
            raise TypeError
    except (TypeError, ValueError):
        raise DataError(f"cannot read {raw!r} as {kind}") from None
    raise DataError(f"unknown attribute kind {kind!r}")


_ORDER_OPS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
}
COMPARISON_OPS = ("=", "!=", "<", "<=", ">", ">=")


def compare(a: Value, b: Value, op: str) -> bool:
    """Evaluate ``a op b``.

    Equality across kinds is simply false; ordering across kinds raises TypeError.
    """
    if op == "=":
        return a.kind == b.kind and a.v == b.v
    if op == "!=":
        return a.kind != b.kind or a.v != b.v
    fn = _ORDER_OPS.get(op)
    if fn is None:
        raise ValueError(f"unknown comparison operator {op!r}")
    if a.kind != b.kind:
        raise TypeError(f"cannot order {a.kind} against {b.kind}")
    return fn(a.v, b.v)


@dataclass(frozen=True)
class Attribute:
    name: str
    kind: str


@dataclass(frozen=True)
class RelationScheme:
    name: str
    attributes: tuple[Attribute, ...]

    def __post_init__(self):
        if not self.attributes:
            raise DataError(f"relation {self.name} needs at least one attribute")
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            raise DataError(f"duplicate attribute name in relation {self.name}")
        for a in self.attributes:
            if a.kind not in KINDS:
                raise DataError(f"unknown attribute kind {a.kind!r} in {self.name}")

    @property
    def arity(self) -> int:
        return len(self.attributes)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(a.name for a in self.attributes)

    def position(self, attr: str) -> int:
        for i, a in enumerate(self.attributes):
            if a.name == attr:
                return i
        raise DataError(f"relation {self.name} has no attribute {attr!r}")


def scheme(name: str, **attrs: str) -> RelationScheme:
    """Shorthand: ``scheme("R", A="int", B="text")``."""
    return RelationScheme(name, tuple(Attribute(k, normalize_kind(v)) for k, v in attrs.items()))


class Schema:
    """Nonempty set of relation schemes, kept in declaration order."""

    def __init__(self, relations: Iterable[RelationScheme]):
        rels = tuple(relations)
        if not rels:
            raise DataError("a schema needs at least one relation")
        self._by_name: dict[str, RelationScheme] = {}
        for r in rels:
            if r.name in self._by_name:
                raise DataError(f"duplicate relation {r.name}")
            self._by_name[r.name] = r
        self.relations = rels

    def __getitem__(self, name: str) -> RelationScheme:
        try:
            return self._by_name[name]
        except KeyError:
            raise DataError(f"unknown relation {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self._by_name

    def __iter__(self) -> Iterator[RelationScheme]:
        return iter(self.relations)

    def __eq__(self, other) -> bool:
        return isinstance(other, Schema) and self.relations == other.relations

    def __hash__(self) -> int:
        return hash(self.relations)

    def __repr__(self) -> str:
        return f"Schema({', '.join(r.name for r in self.relations)})"


class TupleId(NamedTuple):
    """Relation name plus 1-based insertion ordinal of the (deduplicated) tuple."""

    relation: str
    ordinal: int

    def __str__(self) -> str:
        return f"{self.relation}:{self.ordinal}"

    @classmethod
    def parse(cls, text: str) -> "TupleId":
        rel, _, num = text.rpartition(":")
        return cls(rel, int(num))


@dataclass(frozen=True)
class DBTuple:
    relation: str
    values: tuple[Value, ...]

    def __str__(self) -> str:
        return f"{self.relation}({', '.join(str(v) for v in self.values)})"


class Database:
    """An instance of a schema: a set of tuples, each keyed by a stable TupleId.

    Duplicate rows collapse (set semantics). Databases are immutable; the
    sub-database helpers keep the original TupleIds so that measures on
    D and on subsets of D refer to the same tuples.
    """

    def __init__(self, schema: Schema, tuples: Mapping[TupleId, DBTuple]):
        self.schema = schema
        self._tuples: dict[TupleId, DBTuple] = dict(sorted(tuples.items()))
        self._by_relation: dict[str, list[tuple[TupleId, DBTuple]]] = {r.name: [] for r in schema}
        for tid, t in self._tuples.items():
            self._by_relation[tid.relation].append((tid, t))

    def __len__(self) -> int:
        return len(self._tuples)

    def __iter__(self) -> Iterator[TupleId]:
        return iter(self._tuples)

    def __contains__(self, tid) -> bool:
        return tid in self._tuples

    def __getitem__(self, tid: TupleId) -> DBTuple:
        try:
            return self._tuples[tid]
        except KeyError:
            raise DataError(f"unknown tuple id {tid}") from None

    def __eq__(self, other) -> bool:
        return (isinstance(other, Database) and self.schema == other.schema
                and self._tuples == other._tuples)

    def __hash__(self) -> int:
        return hash(frozenset(self._tuples))

    def __repr__(self) -> str:
        return f"Database({len(self)} tuples)"

    @property
    def ids(self) -> frozenset[TupleId]:
        return frozenset(self._tuples)

    def items(self):
        return self._tuples.items()

    def relation(self, name: str) -> list[tuple[TupleId, DBTuple]]:
        return self._by_relation[self.schema[name].name]

    def subset(self, ids: Iterable[TupleId]) -> "Database":
        keep = set(ids)
        missing = keep - self._tuples.keys()
        if missing:
            raise DataError(f"unknown tuple ids: {sorted(map(str, missing))}")
        return Database(self.schema, {k: v for k, v in self._tuples.items() if k in keep})

    def without(self, ids: Iterable[TupleId]) -> "Database":
        drop = set(ids)
        return Database(self.schema, {k: v for k, v in self._tuples.items() if k not in drop})

    def union(self, other: "Database") -> "Database":
        """Set union of two instances of the same schema.

        Tuples of ``other`` that already occur in ``self`` are identified with
        them; new tuples get fresh ordinals after ``self``'s.
        """
        if other.schema != self.schema:
            raise DataError("cannot take the union of databases over different schemas")
        merged = dict(self._tuples)
        seen = {t: tid for tid, t in merged.items()}
        next_ord = {r.name: 0 for r in self.schema}
        for tid in merged:
            next_ord[tid.relation] = max(next_ord[tid.relation], tid.ordinal)
        for tid, t in other.items():
            if t in seen:
                continue
            next_ord[tid.relation] += 1
            nid = TupleId(tid.relation, next_ord[tid.relation])
            merged[nid] = t
            seen[t] = nid
        return Database(self.schema, merged)

    def rows(self) -> dict[str, list[tuple]]:
        """Per-relation rows of native Python values, in TupleId order."""
        out: dict[str, list[tuple]] = {r.name: [] for r in self.schema}
        for tid, t in self._tuples.items():
            out[tid.relation].append(tuple(v.v for v in t.values))
        return out


def load_database(schema: Schema, rows: Mapping[str, Iterable[Sequence]]) -> Database:
    """Build a Database from per-relation row lists (strings or native values)."""
    tuples: dict[TupleId, DBTuple] = {}
    for rel_name, rel_rows in rows.items():
        if rel_name not in schema:
            raise DataError(f"unknown relation {rel_name!r}", relation=rel_name)
        rs = schema[rel_name]
        seen: set[DBTuple] = set()
        ordinal = 0
        for idx, row in enumerate(rel_rows):
            row = tuple(row)
            if len(row) != rs.arity:
                raise DataError(f"expected {rs.arity} values, got {len(row)}",
                                relation=rel_name, row=idx)
            try:
                vals = tuple(make_value(a.kind, raw) for a, raw in zip(rs.attributes, row))
            except DataError as exc:
                raise DataError(str(exc), relation=rel_name, row=idx) from None
            t = DBTuple(rel_name, vals)
            if t in seen:
                continue
            seen.add(t)
            ordinal += 1
            tuples[TupleId(rel_name, ordinal)] = t
    return Database(schema, tuples)


def project(db_or_schema, t: DBTuple, attrs: Sequence[str]) -> tuple[Value, ...]:
    """Values of ``t`` on ``attrs``, in the requested order."""
    schema = db_or_schema.schema if isinstance(db_or_schema, Database) else db_or_schema
    rs = schema[t.relation]
    return tuple(t.values[rs.position(a)] for a in attrs)


@functools.total_ordering
class MeasureValue:
    """Exact non-negative rational, or infinity (which is greater than everything)."""

    __slots__ = ("_q",)

    def __init__(self, q=0):
        if isinstance(q, MeasureValue):
            q = q._q
        elif q is not None:
            if isinstance(q, (bool, float)):
                raise TypeError("measure values must be exact")
            q = Fraction(q)
            if q < 0:
                raise ValueError(f"measure values are non-negative, got {q}")
        object.__setattr__(self, "_q", q)

    def __setattr__(self, name, value):
        raise AttributeError("MeasureValue is immutable")

    @property
    def is_infinite(self) -> bool:
        return self._q is None

    @property
    def fraction(self) -> Fraction:
        if self._q is None:
            raise ValueError("infinite measure has no rational value")
        return self._q

    @staticmethod
    def _coerce(other):
        if isinstance(other, MeasureValue):
            return other._q
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other)
        return NotImplemented

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._q == o

    def __lt__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self._q is None:
            return False
        return o is None or self._q < o

    def __hash__(self) -> int:
        return hash(("inf",) if self._q is None else self._q)

    def __add__(self, other) -> "MeasureValue":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if self._q is None or o is None:
            return INF
        return MeasureValue(self._q + o)

    __radd__ = __add__

    def __sub__(self, other) -> "MeasureValue":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o is None:
            raise ValueError("cannot subtract infinity")
        if self._q is None:
            return INF
        return MeasureValue(self._q - o)

    def __repr__(self) -> str:
        return "MeasureValue(inf)" if self._q is None else f"MeasureValue({self._q})"

    def __str__(self) -> str:
        return "inf" if self._q is None else str(self._q)

    def to_json(self):
        if self._q is None:
            return "inf"
        return {"num": self._q.numerator, "den": self._q.denominator}

    @classmethod
    def from_json(cls, obj) -> "MeasureValue":
        if obj == "inf":
            return INF
        return cls(Fraction(obj["num"], obj["den"]))

    @classmethod
    def parse(cls, text: str) -> "MeasureValue":
        """Read ``inf``, ``p/q``, an integer or a decimal literal exactly."""
        s = text.strip()
        if s.lower() in ("inf", "infinity", "∞"):
            return INF
        try:
            return cls(Fraction(s))
        except (ValueError, ZeroDivisionError):
            raise ValueError(f"not an exact non-negative number: {text!r}") from None


INF = MeasureValue(None)
ZERO = MeasureValue(0)
ONE = MeasureValue(1)
