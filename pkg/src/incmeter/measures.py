"""The twenty inconsistency measures and a facade that computes them together.

Database measures (family ``db``) blame tuples only; propositional measures
(family ``prop``) are evaluated on the transformed knowledge base K_DB.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .dsl import ConstraintSet
from .grounding import (ConflictHypergraph, classify_tuples, conflict_hypergraph,
                        is_consistent, violation_sets)
from .hypergraph import (Hypergraph, maximal_consistent_subsets, min_cover_by_sets,
                         min_hitting_set)
from .lp import eta_db, eta_prop
from .model import INF, Database, MeasureValue
from .transform import PropKB, kb_minimal_inconsistent_subsets, transform

FAMILIES = ("prop", "db")
NAMES = ("B", "M", "sharp", "P", "A", "H", "nc", "hs", "C", "eta")
CLI_NAMES = {"B": "IB", "M": "IM", "sharp": "Isharp", "P": "IP", "A": "IA",
             "H": "IH", "nc": "Inc", "hs": "Ihs", "C": "IC", "eta": "Ieta"}
_FROM_CLI = {v: k for k, v in CLI_NAMES.items()}


@dataclass(frozen=True, order=True)
class MeasureId:
    family: str
    name: str

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown measure family {self.family!r}")
        if self.name not in NAMES:
            raise ValueError(f"unknown measure name {self.name!r}")

    def __str__(self) -> str:
        return f"{self.family}:{CLI_NAMES[self.name]}"

    @classmethod
    def parse(cls, text: str) -> "MeasureId":
        """Accept ``db:IM``, ``prop:Isharp`` and also the short ``db:M`` form."""
        family, sep, name = text.strip().partition(":")
        if not sep:
            raise ValueError(f"measure {text!r} needs a family prefix (prop: or db:)")
        name = _FROM_CLI.get(name, name)
        return cls(family, name)

    def sort_key(self):
        return (FAMILIES.index(self.family), NAMES.index(self.name))


DB_MEASURES = tuple(MeasureId("db", n) for n in NAMES)
PROP_MEASURES = tuple(MeasureId("prop", n) for n in NAMES)
ALL_MEASURES = PROP_MEASURES + DB_MEASURES


def parse_measures(spec: str | Iterable[str] | None) -> list[MeasureId]:
    """Comma list of measure names; ``all``, ``db`` and ``prop`` select groups."""
    if spec is None:
        return list(ALL_MEASURES)
    items = spec.split(",") if isinstance(spec, str) else list(spec)
    out: list[MeasureId] = []
    for raw in items:
        raw = raw.strip()
        if not raw:
            continue
        group = {"all": ALL_MEASURES, "db": DB_MEASURES, "prop": PROP_MEASURES}.get(raw)
        for m in group or (MeasureId.parse(raw),):
            if m not in out:
                out.append(m)
    return out


class Analysis:
    """Lazily computed intermediates shared by the measures of one (db, cs) pair.

    ``computed`` records which intermediates were actually built.
    """

    def __init__(self, db: Database | None, cs: ConstraintSet | None, kb: PropKB | None = None):
        self.db = db
        self.cs = cs
        self.computed: list[str] = []
        self._cache: dict = {}
        if kb is not None:
            self._cache["kb"] = kb

    def _get(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
            self.computed.append(key)
        return self._cache[key]

    # database side
    @property
    def violations(self) -> dict:
        return self._get("violations", lambda: {c.name: violation_sets(self.db, c) for c in self.cs})

    @property
    def hypergraph(self) -> ConflictHypergraph:
        return self._get("mi", lambda: conflict_hypergraph(self.db, self.cs, self.violations))

    @property
    def consistent(self) -> bool:
        if "mi" in self._cache:
            return len(self._cache["mi"]) == 0
        return self._get("consistency", lambda: is_consistent(self.db, self.cs))

    @property
    def classification(self):
        return self._get("classification", lambda: classify_tuples(self.hypergraph, self.db))

    @property
    def mcs(self) -> list[frozenset]:
        return self._get("mc", lambda: maximal_consistent_subsets(self.db.ids, self.hypergraph.edges))

    @property
    def hitting_set(self):
        return self._get("hitting_set", lambda: min_hitting_set(Hypergraph.of(self.hypergraph.edges)))

    # propositional side
    @property
    def kb(self) -> PropKB:
        return self._get("kb", lambda: transform(self.db, self.cs, self.violations))

    @property
    def kb_mi(self) -> list[frozenset]:
        return self._get("kb_mi", lambda: kb_minimal_inconsistent_subsets(self.kb))

    @property
    def kb_mcs(self) -> list[frozenset]:
        def build():
            items = self.kb.items()
            index = {it: i for i, it in enumerate(items)}
            mi = [{index[x] for x in m} for m in self.kb_mi]
            return [frozenset(items[i] for i in s)
                    for s in maximal_consistent_subsets(range(len(items)), mi)]
        return self._get("kb_mc", build)

    @property
    def kb_hitting_set(self):
        def build():
            items = self.kb.items()
            index = {it: i for i, it in enumerate(items)}
            value, hs = min_hitting_set(Hypergraph.of([{index[x] for x in m} for m in self.kb_mi]))
            return value, None if hs is None else frozenset(items[i] for i in hs)
        return self._get("kb_hitting_set", build)

    @property
    def kb_conflict_base(self):
        # atoms valued B: a minimum set of atoms meeting every clause of every formula
        return self._get("kb_conflict_base", lambda: min_hitting_set(
            Hypergraph.of(cl for f in self.kb.formulas for cl in f.clauses)))


def _sharp(edges) -> MeasureValue:
    return MeasureValue(sum((Fraction(1, len(e)) for e in edges), Fraction(0)))


def _db_value(a: Analysis, name: str, evidence: dict) -> MeasureValue:
    if name == "B":
        return MeasureValue(0 if a.consistent else 1)
    if name == "M":
        return MeasureValue(len(a.hypergraph))
    if name == "sharp":
        return _sharp(a.hypergraph.edges)
    if name == "P":
        return MeasureValue(len(a.classification.problematic))
    if name == "A":
        return MeasureValue(len(a.mcs) + len(a.classification.contradictory) - 1)
    if name in ("H", "C"):
        # the minimum B-valued tuple set of a 3VL model is a minimum hitting set of MI(D)
        value, hs = a.hitting_set
        evidence["hitting_set" if name == "H" else "conflict_base"] = hs
        return value
    if name == "nc":
        if a.consistent:
            return MeasureValue(0)
        return MeasureValue(len(a.db) - min(len(e) for e in a.hypergraph.edges) + 1)
    if name == "hs":
        value, cover = min_cover_by_sets(a.db.ids, a.mcs)
        if value == INF:
            return INF
        # a hitting set holds at least one interpretation, even for an empty database
        evidence["interpretation_cover"] = cover or [frozenset()]
        return MeasureValue(max(value.fraction, 1) - 1)
    if name == "eta":
        res = eta_db(a.db, a.cs, a.mcs)
        evidence["eta_witness"] = res.weights
        return res.measure
    raise ValueError(name)


def _prop_value(a: Analysis, name: str, evidence: dict) -> MeasureValue:
    kb = a.kb
    if name == "B":
        return MeasureValue(0 if kb.is_consistent() else 1)
    if name == "M":
        return MeasureValue(len(a.kb_mi))
    if name == "sharp":
        return _sharp(a.kb_mi)
    if name == "P":
        return MeasureValue(len(frozenset().union(*a.kb_mi)) if a.kb_mi else 0)
    if name == "A":
        if kb.self_contradictions():
            raise AssertionError("a transformed knowledge base has no self-contradictions")
        return MeasureValue(len(a.kb_mcs) - 1)
    if name == "H":
        value, hs = a.kb_hitting_set
        evidence["kb_hitting_set"] = hs
        return value
    if name == "nc":
        if not a.kb_mi:
            return MeasureValue(0)
        return MeasureValue(len(kb) - min(len(m) for m in a.kb_mi) + 1)
    if name == "hs":
        # all-true satisfies every atom and all-false every formula, so two
        # interpretations always suffice and one does exactly when K is consistent
        return MeasureValue(0 if kb.is_consistent() else 1)
    if name == "C":
        value, base = a.kb_conflict_base
        evidence["kb_conflict_base"] = base
        return value
    if name == "eta":
        res = eta_prop(kb, a.kb_mcs)
        evidence["kb_eta_witness"] = res.weights
        return res.measure
    raise ValueError(name)


def _evaluate(a: Analysis, m: MeasureId, evidence: dict) -> MeasureValue:
    return (_db_value if m.family == "db" else _prop_value)(a, m.name, evidence)


def db_measure(m: MeasureId | str, db: Database, cs: ConstraintSet) -> MeasureValue:
    m = _as_id(m, "db")
    return _evaluate(Analysis(db, cs), m, {})


def prop_measure(m: MeasureId | str, db: Database, cs: ConstraintSet) -> MeasureValue:
    m = _as_id(m, "prop")
    return _evaluate(Analysis(db, cs), m, {})


def _as_id(m, family) -> MeasureId:
    if isinstance(m, str):
        m = MeasureId.parse(m) if ":" in m else MeasureId(family, _FROM_CLI.get(m, m))
    if m.family != family:
        raise ValueError(f"{m} is not a {family} measure")
    return m


def kb_measure(name: str, kb: PropKB) -> MeasureValue:
    """A propositional measure evaluated directly on a transformed knowledge base."""
    return _prop_value(Analysis(None, None, kb), _FROM_CLI.get(name, name), {})


def kb_measures(kb: PropKB, names=NAMES) -> dict[str, MeasureValue]:
    a = Analysis(None, None, kb)
    return {n: _prop_value(a, n, {}) for n in names}


@dataclass
class MeasureReport:
    values: dict  # MeasureId -> MeasureValue
    evidence: dict = field(default_factory=dict)
    computed: tuple = ()

    def __getitem__(self, key) -> MeasureValue:
        if isinstance(key, str):
            key = MeasureId.parse(key)
        return self.values[key]

    def as_tuple(self, family: str) -> tuple:
        return tuple(self.values[MeasureId(family, n)] for n in NAMES)


def measure_all(db: Database, cs: ConstraintSet, which=None, analysis: Analysis | None = None) -> MeasureReport:
    """Compute the requested measures (default: all twenty) sharing intermediates."""
    if which is None or isinstance(which, str):
        ids = parse_measures(which)
    else:
        ids = [m if isinstance(m, MeasureId) else MeasureId.parse(m) for m in which]
    a = analysis or Analysis(db, cs)
    evidence: dict = {}
    values = {}
    for m in sorted(ids, key=MeasureId.sort_key):
        values[m] = _evaluate(a, m, evidence)
    if "mi" in a._cache:
        evidence["mi"] = a.hypergraph
    if "classification" in a._cache:
        evidence["classification"] = a.classification
    if "mc" in a._cache:
        evidence["mc"] = a.mcs
    if "kb" in a._cache:
        evidence["kb"] = a.kb
    if "kb_mi" in a._cache:
        evidence["kb_mi"] = a.kb_mi
    return MeasureReport(values, evidence, tuple(a.computed))


DECISIONS = ("lv", "uv", "ev")


def decide(value: MeasureValue, op: str, threshold: MeasureValue) -> bool:
    """lv: value >= v (v > 0), uv: value <= v, ev: value == v; infinity is greatest."""
    if op not in DECISIONS:
        raise ValueError(f"unknown decision {op!r}, expected one of {', '.join(DECISIONS)}")
    if op == "lv" and threshold == 0:
        raise ValueError("lv needs a threshold greater than 0")
    if op == "lv":
        return value >= threshold
    if op == "uv":
        return value <= threshold
    return value == threshold
