"""Database-to-propositional-KB transformation and its deletion/union semantics.

Every tuple becomes a positive atom. Every violated constraint becomes a
conjunction of negative clauses, one clause per violating tuple set; clauses
are kept in canonical form (deduplicated, subsumed clauses removed), so two
constraints whose formulas coincide collapse into one KB formula.

Atoms are identified by the TupleId of their tuple; ``PropKB.label`` gives
the ``a_i`` numbering used for display and export.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .dsl import ConstraintSet
from .errors import ConstraintError, DataError
from .grounding import minimize, violation_sets
from .model import Database, TupleId

Clause = frozenset  # of TupleId; read as the disjunction of the negated atoms


@dataclass(frozen=True)
class ConstraintFormula:
    """g(c): a nonempty, subsumption-free set of negative clauses.

    ``sources`` lists every constraint that maps to this formula.
    """

    sources: tuple[str, ...]
    clauses: frozenset[Clause]

    @property
    def name(self) -> str:
        return "g(" + ",".join(self.sources) + ")"

    def __str__(self) -> str:
        return self.name


class PropKB:
    """K_DB: one atom per tuple plus the defined constraint formulas."""

    def __init__(self, atoms: Iterable[TupleId], formulas: Iterable[ConstraintFormula],
                 labels: dict[TupleId, int] | None = None):
        self.atoms: tuple[TupleId, ...] = tuple(sorted(atoms))
        self.formulas: tuple[ConstraintFormula, ...] = tuple(formulas)
        if labels is None:
            labels = {t: i for i, t in enumerate(self.atoms, 1)}
        self.labels = labels
        atom_set = set(self.atoms)
        for f in self.formulas:
            if not f.clauses or any(not cl or not cl <= atom_set for cl in f.clauses):
                raise ValueError(f"malformed formula {f.name}")

    # equality ignores labels and formula order
    def _key(self):
        return (frozenset(self.atoms),
                frozenset((frozenset(f.sources), f.clauses) for f in self.formulas))

    def __eq__(self, other) -> bool:
        return isinstance(other, PropKB) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __len__(self) -> int:
        return len(self.atoms) + len(self.formulas)

    def __repr__(self) -> str:
        return f"PropKB({self.render()})"

    def label(self, tid: TupleId) -> str:
        return f"a{self.labels[tid]}"

    def items(self) -> list:
        """KB members: TupleIds for atoms, ConstraintFormula objects for formulas."""
        return list(self.atoms) + list(self.formulas)

    def formula_for(self, constraint: str) -> ConstraintFormula | None:
        for f in self.formulas:
            if constraint in f.sources:
                return f
        return None

    def render_formula(self, f: ConstraintFormula) -> str:
        clauses = sorted(sorted(self.labels[t] for t in cl) for cl in f.clauses)
        parts = [" ∨ ".join(f"¬a{i}" for i in cl) for cl in clauses]
        if len(parts) == 1:
            return parts[0]
        return " ∧ ".join(f"({p})" if "∨" in p else p for p in parts)

    def render(self) -> str:
        items = [self.label(t) for t in self.atoms] + [self.render_formula(f) for f in self.formulas]
        return "{" + ", ".join(items) + "}"

    def is_consistent(self) -> bool:
        # all-true on the KB's atoms satisfies every atom; a formula then fails
        # exactly when one of its clauses consists of KB atoms only
        atom_set = set(self.atoms)
        return not any(cl <= atom_set for f in self.formulas for cl in f.clauses)

    def self_contradictions(self) -> list:
        # atoms are satisfiable; a conjunction of negative clauses is satisfied by all-false
        return []


def _canonical_formulas(per_constraint: dict[str, set[frozenset]], order) -> list[ConstraintFormula]:
    by_clauses: dict[frozenset, list[str]] = {}
    for name in order:
        sets = per_constraint.get(name)
        if not sets:
            continue
        clauses = frozenset(minimize(sets))
        by_clauses.setdefault(clauses, []).append(name)
    return [ConstraintFormula(tuple(names), clauses) for clauses, names in by_clauses.items()]


def transform(db: Database, cs: ConstraintSet, per_constraint=None) -> PropKB:
    if per_constraint is None:
        per_constraint = {c.name: violation_sets(db, c) for c in cs}
    return PropKB(db.ids, _canonical_formulas(per_constraint, cs.names))


def kb_minimal_inconsistent_subsets(k: PropKB) -> list[frozenset]:
    """MI(K): one set {F} ∪ atoms(γ) per formula F and clause γ of F."""
    out = []
    for f in k.formulas:
        for cl in sorted(f.clauses, key=lambda c: (len(c), sorted(c))):
            out.append(frozenset(cl) | {f})
    return out


mi_of_kb = kb_minimal_inconsistent_subsets


def mi_of_db(db: Database, cs: ConstraintSet) -> list[tuple[frozenset, str]]:
    """MI(D ∪ C) with constraints as formulas: a minimal violating tuple set plus its constraint."""
    out = []
    for c in cs:
        for s in sorted(minimize(violation_sets(db, c)), key=lambda s: (len(s), sorted(s))):
            out.append((s, c.name))
    return out


def kb_set_for(kb: PropKB, tuples: frozenset, constraint: str) -> frozenset:
    """The member of MI(K_DB) corresponding to a member of MI(D ∪ C)."""
    f = kb.formula_for(constraint)
    if f is None or tuples not in f.clauses:
        raise ValueError(f"{constraint} has no clause over {sorted(map(str, tuples))}")
    return frozenset(tuples) | {f}


def delete_tuple(db: Database, cs: ConstraintSet, t: TupleId, kb: PropKB | None = None) -> PropKB:
    """K for D ∖ {t}: drop the atom and every clause mentioning it."""
    if t not in db:
        raise DataError(f"unknown tuple id {t}")
    kb = kb if kb is not None else transform(db, cs)
    remaining: dict[frozenset, list[str]] = {}
    for f in kb.formulas:
        clauses = frozenset(cl for cl in f.clauses if t not in cl)
        if clauses:
            remaining.setdefault(clauses, []).extend(f.sources)
    order = {n: i for i, n in enumerate(cs.names)}
    formulas = [ConstraintFormula(tuple(sorted(srcs, key=order.__getitem__)), cl)
                for cl, srcs in remaining.items()]
    formulas.sort(key=lambda f: order[f.sources[0]])
    labels = {a: i for a, i in kb.labels.items() if a != t}
    return PropKB([a for a in kb.atoms if a != t], formulas, labels)


def delete_constraint(db: Database, cs: ConstraintSet, name: str, kb: PropKB | None = None) -> PropKB:
    """K for DB ∖ {c}.

    Unchanged if g(c) is undefined or shared with another constraint;
    otherwise g(c) is removed.
    """
    if name not in cs:
        raise ConstraintError(f"unknown constraint {name!r}")
    kb = kb if kb is not None else transform(db, cs)
    formulas = []
    for f in kb.formulas:
        if name in f.sources:
            rest = tuple(s for s in f.sources if s != name)
            if rest:
                formulas.append(ConstraintFormula(rest, f.clauses))
        else:
            formulas.append(f)
    return PropKB(kb.atoms, formulas, kb.labels)


def union_transform(db1: Database, cs1: ConstraintSet, db2: Database, cs2: ConstraintSet) -> PropKB:
    """K for DB1 ∪ DB2: union the databases and constraints first, then transform."""
    if db1.schema != db2.schema:
        raise DataError("union_transform needs databases over the same schema")
    return transform(db1.union(db2), cs1.union(cs2))


# -- export -------------------------------------------------------------------

def kb_to_json(kb: PropKB, db: Database | None = None) -> dict:
    """Atom table plus formulas as lists of clauses over atom numbers."""
    atoms = []
    for t in kb.atoms:
        entry = {"id": kb.labels[t], "tuple": str(t), "relation": t.relation}
        if db is not None and t in db:
            entry["values"] = [str(v) for v in db[t].values]
        atoms.append(entry)
    formulas = []
    for f in kb.formulas:
        clauses = sorted(sorted(kb.labels[t] for t in cl) for cl in f.clauses)
        formulas.append({"name": f.name, "sources": list(f.sources), "clauses": clauses})
    return {"atoms": atoms, "formulas": formulas}


def kb_from_json(obj: dict) -> PropKB:
    try:
        by_id = {a["id"]: TupleId.parse(a["tuple"]) for a in obj["atoms"]}
        formulas = [ConstraintFormula(tuple(f["sources"]),
                                      frozenset(frozenset(by_id[i] for i in cl) for cl in f["clauses"]))
                    for f in obj["formulas"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"malformed knowledge base JSON: {exc}") from None
    return PropKB(by_id.values(), formulas, {t: i for i, t in by_id.items()})


def kb_dimacs_like(kb: PropKB) -> str:
    """Clause listing for SAT tools.

    A ``p kb <atoms> <clauses>`` header, then one positive unit clause per
    atom under ``c atoms``, then each formula as a ``c <formula-name>``
    comment followed by its clauses as negative literals. Every clause ends
    in ``0``.
    """
    n_clauses = len(kb.atoms) + sum(len(f.clauses) for f in kb.formulas)
    lines = [f"p kb {len(kb.atoms)} {n_clauses}", "c atoms"]
    lines += [f"{kb.labels[t]} 0" for t in kb.atoms]
    for f in kb.formulas:
        lines.append(f"c {f.name}")
        for cl in sorted(sorted(kb.labels[t] for t in cl) for cl in f.clauses):
            lines.append(" ".join(f"-{i}" for i in cl) + " 0")
    return "\n".join(lines) + "\n"
