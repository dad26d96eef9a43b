"""Ground denial constraints over a database; build the conflict hypergraph MI(D)."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator

from .dsl import ConstraintSet, DenialConstraint, Var, evaluate_phi
from .model import Database, TupleId, compare


@dataclass(frozen=True)
class GroundViolation:
    constraint: str
    binding: tuple[TupleId, ...]

    @property
    def tuple_set(self) -> frozenset[TupleId]:
        return frozenset(self.binding)


class _Plan:
    """Join plan for one constraint: atom order, index keys and pruning points."""

    def __init__(self, c: DenialConstraint):
        self.c = c
        bound: set[str] = set()
        self.steps = []
        for atom in c.atoms:
            key_pos, key_src = [], []   # positions looked up in the index, and their source
            binds = []                  # (position, var) bound fresh by this atom
            checks = []                 # (position, earlier position in same tuple)
            first_in_atom: dict[str, int] = {}
            for i, t in enumerate(atom.args):
                if isinstance(t, Var):
                    if t.name in bound:
                        key_pos.append(i)
                        key_src.append(("var", t.name))
                    elif t.name in first_in_atom:
                        checks.append((i, first_in_atom[t.name]))
                    else:
                        first_in_atom[t.name] = i
                        binds.append((i, t.name))
                else:
                    key_pos.append(i)
                    key_src.append(("const", t.value))
            bound.update(first_in_atom)
            self.steps.append((atom.relation, tuple(key_pos), tuple(key_src), binds, checks))
        # prune once a disjunct is fully bound and already true
        self.ready: list[list] = [[] for _ in c.atoms]
        bound = set()
        for depth, atom in enumerate(c.atoms):
            bound |= {t.name for t in atom.args if isinstance(t, Var)}
            for conj in c.phi:
                names = set().union(*(cmp.variables() for cmp in conj))
                if names <= bound and conj not in {x for d in self.ready[:depth] for x in d}:
                    self.ready[depth].append(conj)


def _conj_true(conj, env) -> bool:
    for cmp in conj:
        lv = env[cmp.left.name] if isinstance(cmp.left, Var) else cmp.left.value
        rv = env[cmp.right.name] if isinstance(cmp.right, Var) else cmp.right.value
        if not compare(lv, rv, cmp.op):
            return False
    return True


def iter_violations(db: Database, c: DenialConstraint) -> Iterator[GroundViolation]:
    """Yield every binding (repetition allowed) that matches all atoms and falsifies phi."""
    plan = _Plan(c)
    indexes = []
    for rel, key_pos, _, _, _ in plan.steps:
        idx = defaultdict(list)
        for tid, t in db.relation(rel):
            idx[tuple(t.values[p] for p in key_pos)].append((tid, t))
        indexes.append(idx)
    n = len(plan.steps)
    env: dict = {}
    binding: list = [None] * n

    def rec(depth):
        rel, key_pos, key_src, binds, checks = plan.steps[depth]
        key = tuple(env[s] if kind == "var" else s for kind, s in key_src)
        for tid, t in indexes[depth].get(key, ()):
            vals = t.values
            if any(vals[i] != vals[j] for i, j in checks):
                continue
            for i, name in binds:
                env[name] = vals[i]
            binding[depth] = tid
            if any(_conj_true(conj, env) for conj in plan.ready[depth]):
                continue
            if depth + 1 == n:
                if not evaluate_phi(c.phi, env):
                    yield GroundViolation(c.name, tuple(binding))
            else:
                yield from rec(depth + 1)

    # disjuncts with no variables at all are decided before any tuple is read
    if any(not conj or all(not cmp.variables() for cmp in conj) and _conj_true(conj, {})
           for conj in c.phi):
        return
    yield from rec(0)


def ground_constraint(db: Database, c: DenialConstraint) -> set[GroundViolation]:
    return set(iter_violations(db, c))


def violation_sets(db: Database, c: DenialConstraint) -> set[frozenset[TupleId]]:
    """Distinct tuple sets of the violations of ``c``."""
    return {frozenset(v.binding) for v in iter_violations(db, c)}


def minimize(sets: Iterable[frozenset]) -> set[frozenset]:
    """Drop every set that strictly contains another one."""
    ordered = sorted(set(sets), key=len)
    kept: list[frozenset] = []
    by_vertex: dict = defaultdict(list)
    for s in ordered:
        if not s:
            return {s}
        dominated = False
        for v in s:
            for k in by_vertex[v]:
                if len(k) < len(s) and k <= s:
                    dominated = True
                    break
            if dominated:
                break
        if dominated:
            continue
        kept.append(s)
        for v in s:
            by_vertex[v].append(s)
    return set(kept)


class ConflictHypergraph:
    """MI(D): minimal inconsistent tuple sets, each with its witnessing constraints."""

    def __init__(self, edges: dict[frozenset[TupleId], frozenset[str]]):
        self.witnesses = dict(edges)

    @property
    def edges(self) -> list[frozenset[TupleId]]:
        return sorted(self.witnesses, key=lambda e: (len(e), sorted(e)))

    def __len__(self) -> int:
        return len(self.witnesses)

    def __iter__(self):
        return iter(self.edges)

    def __eq__(self, other) -> bool:
        return isinstance(other, ConflictHypergraph) and set(self.witnesses) == set(other.witnesses)

    def __repr__(self) -> str:
        inner = ", ".join("{" + ", ".join(map(str, sorted(e))) + "}" for e in self.edges)
        return f"ConflictHypergraph({inner})"


def conflict_hypergraph(db: Database, cs: ConstraintSet, per_constraint=None) -> ConflictHypergraph:
    """MI(D) w.r.t. ``cs``; ``per_constraint`` may supply precomputed violation sets."""
    if per_constraint is None:
        per_constraint = {c.name: violation_sets(db, c) for c in cs}
    witnesses: dict[frozenset, set[str]] = defaultdict(set)
    for name, sets in per_constraint.items():
        for s in sets:
            witnesses[s].add(name)
    kept = minimize(witnesses)
    return ConflictHypergraph({e: frozenset(witnesses[e]) for e in kept})


@dataclass(frozen=True)
class TupleClassification:
    problematic: frozenset[TupleId]
    free: frozenset[TupleId]
    contradictory: frozenset[TupleId]


def classify_tuples(h: ConflictHypergraph, db: Database) -> TupleClassification:
    problematic = frozenset().union(*h.witnesses) if len(h) else frozenset()
    contradictory = frozenset(next(iter(e)) for e in h.witnesses if len(e) == 1)
    return TupleClassification(problematic, db.ids - problematic, contradictory)


def is_consistent(db: Database, cs: ConstraintSet) -> bool:
    for c in cs:
        for _ in iter_violations(db, c):
            return False
    return True
