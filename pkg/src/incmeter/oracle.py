"""Brute-force reference implementations.

Everything here works by enumeration: tuple sequences for grounding, subsets
for MI/MC, assignments for interpretations. Nothing is shared with the
optimized code paths except the data model, the constraint AST and the LP
solver. Interpretations over n atoms are encoded as the integers 0..2^n-1
(bit i set = atom i true); the set of interpretations satisfying a formula
is a Python int used as a bitset.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .dsl import ConstraintSet, DenialConstraint, Var
from .errors import OracleBoundError
from .lp import EQ, LE, LinearProgram, simplex_max
from .model import INF, Database, MeasureValue, compare

DEFAULT_CLASSICAL_BOUND = 14
DEFAULT_3VL_BOUND = 10

# Priest's three-valued logic, truth values ordered F < B < T
F, B, T = 0, 1, 2
SYMBOL = {F: "F", B: "B", T: "T"}


def and3(x: int, y: int) -> int:
    return min(x, y)


def or3(x: int, y: int) -> int:
    return max(x, y)


def not3(x: int) -> int:
    return 2 - x


def truth_table() -> dict:
    """All nine cells of the binary connectives and the three of negation."""
    return {
        "or": {(SYMBOL[a], SYMBOL[b]): SYMBOL[or3(a, b)] for a in (T, B, F) for b in (T, B, F)},
        "and": {(SYMBOL[a], SYMBOL[b]): SYMBOL[and3(a, b)] for a in (T, B, F) for b in (T, B, F)},
        "not": {SYMBOL[a]: SYMBOL[not3(a)] for a in (T, B, F)},
    }


def bounds() -> tuple[int, int]:
    """(classical, three-valued) size bounds; ``INCMETER_ORACLE_BOUND`` is ``N`` or ``N,M``."""
    raw = os.environ.get("INCMETER_ORACLE_BOUND")
    if not raw:
        return DEFAULT_CLASSICAL_BOUND, DEFAULT_3VL_BOUND
    parts = [int(p) for p in raw.split(",")]
    return (parts[0], parts[0]) if len(parts) == 1 else (parts[0], parts[1])


def _check(n: int, bound: int, what: str) -> None:
    if n > bound:
        raise OracleBoundError(f"{what}: {n} exceeds the oracle bound {bound}")


# -- grounding by enumeration -------------------------------------------------

def _match(c: DenialConstraint, seq) -> dict | None:
    env: dict = {}
    for atom, (_, t) in zip(c.atoms, seq):
        if t.relation != atom.relation:
            return None
        for term, val in zip(atom.args, t.values):
            if isinstance(term, Var):
                if term.name in env:
                    if env[term.name] != val:
                        return None
                else:
                    env[term.name] = val
            elif term.value != val:
                return None
    return env


def _phi_holds(c: DenialConstraint, env) -> bool:
    def val(term):
        return env[term.name] if isinstance(term, Var) else term.value
    return any(all(compare(val(x.left), val(x.right), x.op) for x in conj) for conj in c.phi)


def oracle_violations(db: Database, c: DenialConstraint) -> list[frozenset]:
    """Tuple sets of all violating sequences, found by trying every sequence."""
    tuples = list(db.items())
    out = set()
    for seq in product(tuples, repeat=c.arity):
        env = _match(c, seq)
        if env is not None and not _phi_holds(c, env):
            out.add(frozenset(tid for tid, _ in seq))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def _subsets(items):
    n = len(items)
    for mask in range(1 << n):
        yield mask, frozenset(items[i] for i in range(n) if mask >> i & 1)


def oracle_mi(db: Database, cs: ConstraintSet) -> set[frozenset]:
    """MI(D) by checking every subset of D for consistency."""
    bound, _ = bounds()
    _check(len(db), bound, "oracle_mi")
    ids = sorted(db.ids)
    violations = [v for c in cs for v in oracle_violations(db, c)]
    cons = {s: not any(v <= s for v in violations) for _, s in _subsets(ids)}
    return {s for s, ok in cons.items() if not ok and all(cons[s - {x}] for x in s)}


def oracle_mc(db: Database, cs: ConstraintSet) -> set[frozenset]:
    ids = sorted(db.ids)
    violations = [v for c in cs for v in oracle_violations(db, c)]
    cons = {s: not any(v <= s for v in violations) for _, s in _subsets(ids)}
    return {s for s, ok in cons.items() if ok and not any(cons[s | {x}] for x in ids if x not in s)}


# -- a naive K_DB -------------------------------------------------------------

@dataclass
class NaiveFormula:
    names: tuple[str, ...]
    clauses: list[frozenset]  # every violating sequence's tuple set, unreduced


@dataclass
class NaiveKB:
    atoms: list  # TupleIds, bit i of an interpretation = atoms[i]
    formulas: list[NaiveFormula]

    @property
    def n(self) -> int:
        return len(self.atoms)

    def items(self) -> list:
        return [("atom", a) for a in self.atoms] + [("formula", i) for i in range(len(self.formulas))]

    def value(self, item, interp: int) -> bool:
        kind, x = item
        if kind == "atom":
            return bool(interp >> self.atoms.index(x) & 1)
        return all(any(not (interp >> self.atoms.index(a) & 1) for a in cl)
                   for cl in self.formulas[x].clauses)

    def models_of(self, item) -> int:
        """Bitset over the 2^n interpretations that make ``item`` true."""
        bits = 0
        for i in range(1 << self.n):
            if self.value(item, i):
                bits |= 1 << i
        return bits

    def value3(self, item, assignment) -> int:
        kind, x = item
        if kind == "atom":
            return assignment[self.atoms.index(x)]
        result = T
        for cl in self.formulas[x].clauses:
            disj = F
            for a in cl:
                disj = or3(disj, not3(assignment[self.atoms.index(a)]))
            result = and3(result, disj)
        return result


def naive_kb(db: Database, cs: ConstraintSet) -> NaiveKB:
    """K_DB with formulas identified when they have the same models."""
    bound, _ = bounds()
    _check(len(db), bound, "naive_kb")
    atoms = sorted(db.ids)
    kb = NaiveKB(atoms, [])
    seen: dict[int, int] = {}
    for c in cs:
        clauses = oracle_violations(db, c)
        if not clauses:
            continue
        f = NaiveFormula((c.name,), clauses)
        kb.formulas.append(f)
        models = kb.models_of(("formula", len(kb.formulas) - 1))
        if models in seen:
            kb.formulas.pop()
            prev = kb.formulas[seen[models]]
            prev.names = prev.names + (c.name,)
        else:
            seen[models] = len(kb.formulas) - 1
    return kb


def naive_kb_from_prop(kb) -> NaiveKB:
    """Wrap an optimized PropKB so the oracle can evaluate it."""
    return NaiveKB(list(kb.atoms), [NaiveFormula(f.sources, sorted(f.clauses, key=sorted))
                                    for f in kb.formulas])


# -- propositional measures by enumeration -------------------------------------

class _PropOracle:
    def __init__(self, kb: NaiveKB):
        bound, _ = bounds()
        _check(kb.n, bound, "propositional oracle")
        self.kb = kb
        self.items = kb.items()
        self.full = (1 << (1 << kb.n)) - 1
        self.models = [kb.models_of(it) for it in self.items]
        m = len(self.items)
        self.consistent = {}
        for mask in range(1 << m):
            bits = self.full
            for i in range(m):
                if mask >> i & 1:
                    bits &= self.models[i]
            self.consistent[mask] = bits != 0
        # consistency is downward closed, so one-element neighbours decide extremality
        cons = self.consistent
        self.mi = [s for s in range(1 << m) if not cons[s]
                   and all(cons[s & ~(1 << i)] for i in range(m) if s >> i & 1)]
        self.mc = [s for s in range(1 << m) if cons[s]
                   and not any(cons[s | 1 << i] for i in range(m) if not s >> i & 1)]

    def measure(self, name: str) -> MeasureValue:
        m = len(self.items)
        all_mask = (1 << m) - 1
        inconsistent = not self.consistent[all_mask]
        if name == "B":
            return MeasureValue(int(inconsistent))
        if name == "M":
            return MeasureValue(len(self.mi))
        if name == "sharp":
            return MeasureValue(sum((Fraction(1, bin(s).count("1")) for s in self.mi), Fraction(0)))
        if name == "P":
            union = 0
            for s in self.mi:
                union |= s
            return MeasureValue(bin(union).count("1"))
        if name == "A":
            selfcontra = sum(1 for b in self.models if b == 0)
            return MeasureValue(len(self.mc) + selfcontra - 1)
        if name == "H":
            for k in range(m + 1):
                for combo in combinations(range(m), k):
                    x = sum(1 << i for i in combo)
                    if all(x & s for s in self.mi):
                        return MeasureValue(k)
        if name == "nc":
            best = 0
            for n in range(m + 1):
                if all(self.consistent[sum(1 << i for i in combo)] for combo in combinations(range(m), n)):
                    best = n
                else:
                    break
            return MeasureValue(m - best)
        if name == "hs":
            return oracle_hs(self.kb, "propositional")
        if name == "C":
            return oracle_3vl_C(self.kb, "propositional")
        if name == "eta":
            return oracle_eta(self.kb, "propositional")
        raise ValueError(name)


def _true_sets(kb: NaiveKB, mode: str) -> list[frozenset]:
    """Per admissible classical interpretation, the set of items it makes true.

    In database mode only interpretations satisfying every formula count,
    and only atoms need covering.
    """
    items = kb.items()
    formulas = [it for it in items if it[0] == "formula"]
    out = set()
    for i in range(1 << kb.n):
        if mode == "database":
            if not all(kb.value(f, i) for f in formulas):
                continue
            out.add(frozenset(it for it in items if it[0] == "atom" and kb.value(it, i)))
        else:
            out.add(frozenset(it for it in items if kb.value(it, i)))
    return sorted(out, key=lambda s: sorted(map(str, s)))


def _rows(kb: NaiveKB, mode: str) -> list:
    items = kb.items()
    return [it for it in items if it[0] == "atom"] if mode == "database" else items


def oracle_hs(kb, mode: str = "propositional") -> MeasureValue:
    """Fewest admissible interpretations jointly making every row true, minus one."""
    kb = kb if isinstance(kb, NaiveKB) else naive_kb_from_prop(kb)
    bound, _ = bounds()
    _check(kb.n, bound, "oracle_hs")
    rows = set(_rows(kb, mode))
    sets = _true_sets(kb, mode)
    if rows - frozenset().union(*sets):
        return INF
    for k in range(1, len(sets) + 1):
        for combo in combinations(sets, k):
            if rows <= frozenset().union(*combo):
                return MeasureValue(k - 1)
    return INF


def oracle_3vl_C(kb, mode: str = "propositional", literal: bool = False) -> MeasureValue:
    """Smallest number of B atoms in a 3VL model.

    Propositional mode: any assignment in {T,B,F}^n where no KB item is F.
    Database mode: atoms only T or B; every constraint formula must be
    designated (T or B), or exactly T when ``literal`` is set.
    """
    kb = kb if isinstance(kb, NaiveKB) else naive_kb_from_prop(kb)
    _, bound = bounds()
    _check(kb.n, bound, "oracle_3vl_C")
    items = kb.items()
    values = (T, B) if mode == "database" else (T, B, F)
    best = None
    for assignment in product(values, repeat=kb.n):
        ok = True
        for it in items:
            v = kb.value3(it, assignment)
            if v == F or (literal and mode == "database" and it[0] == "formula" and v != T):
                ok = False
                break
        if ok:
            size = sum(1 for v in assignment if v == B)
            if best is None or size < best:
                best = size
    return INF if best is None else MeasureValue(best)


def oracle_eta(kb, mode: str = "propositional") -> MeasureValue:
    """1 − η* over every admissible interpretation as an LP column."""
    kb = kb if isinstance(kb, NaiveKB) else naive_kb_from_prop(kb)
    bound, _ = bounds()
    _check(kb.n, bound, "oracle_eta")
    rows = _rows(kb, mode)
    formulas = [it for it in kb.items() if it[0] == "formula"]
    columns = []
    for i in range(1 << kb.n):
        if mode == "database" and not all(kb.value(f, i) for f in formulas):
            continue
        columns.append([kb.value(r, i) for r in rows])
    if not rows:
        return MeasureValue(0)
    k = len(columns)
    lp = LinearProgram([0] * k + [1])
    lp.add([1] * k + [0], EQ, 1)
    for j in range(len(rows)):
        lp.add([-1 if col[j] else 0 for col in columns] + [1], LE, 0)
    lp.add([0] * k + [1], LE, 1)
    return MeasureValue(1 - simplex_max(lp).value)


# -- database measures by enumeration ------------------------------------------

def oracle_db_measures(db: Database, cs: ConstraintSet, names=None) -> dict[str, MeasureValue]:
    from .measures import NAMES
    names = names or NAMES
    bound, bound3 = bounds()
    _check(len(db), bound, "database oracle")
    ids = sorted(db.ids)
    violations = [v for c in cs for v in oracle_violations(db, c)]
    n = len(ids)

    def consistent(s):
        return not any(v <= s for v in violations)

    subsets = [s for _, s in _subsets(ids)]
    cons = {s: consistent(s) for s in subsets}
    mi = [s for s in subsets if not cons[s] and all(cons[s - {x}] for x in s)]
    mc = [s for s in subsets if cons[s] and not any(cons[s | {x}] for x in ids if x not in s)]
    out: dict[str, MeasureValue] = {}
    for name in names:
        if name == "B":
            out[name] = MeasureValue(int(bool(mi)))
        elif name == "M":
            out[name] = MeasureValue(len(mi))
        elif name == "sharp":
            out[name] = MeasureValue(sum((Fraction(1, len(s)) for s in mi), Fraction(0)))
        elif name == "P":
            out[name] = MeasureValue(len(frozenset().union(*mi)) if mi else 0)
        elif name == "A":
            out[name] = MeasureValue(len(mc) + sum(1 for s in mi if len(s) == 1) - 1)
        elif name == "H":
            out[name] = next(MeasureValue(len(s)) for s in sorted(subsets, key=len)
                             if all(s & e for e in mi))
        elif name == "nc":
            best = 0
            for k in range(n + 1):
                if all(cons[frozenset(c)] for c in combinations(ids, k)):
                    best = k
                else:
                    break
            out[name] = MeasureValue(n - best)
        elif name in ("hs", "C", "eta"):
            kb = naive_kb(db, cs)
            if name == "hs":
                out[name] = oracle_hs(kb, "database")
            elif name == "C":
                out[name] = oracle_3vl_C(kb, "database")
            else:
                out[name] = oracle_eta(kb, "database")
    return out


def oracle_prop_measures(db: Database, cs: ConstraintSet, names=None) -> dict[str, MeasureValue]:
    from .measures import NAMES
    o = _PropOracle(naive_kb(db, cs))
    return {name: o.measure(name) for name in (names or NAMES)}


def oracle_kb_measures(kb, names=None) -> dict[str, MeasureValue]:
    from .measures import NAMES
    o = _PropOracle(kb if isinstance(kb, NaiveKB) else naive_kb_from_prop(kb))
    return {name: o.measure(name) for name in (names or NAMES)}


def oracle_kb_mi(db: Database, cs: ConstraintSet) -> list[tuple[frozenset, tuple]]:
    """MI(K_DB) as (tuple set, formula source names) pairs."""
    kb = naive_kb(db, cs)
    o = _PropOracle(kb)
    out = []
    for s in o.mi:
        members = [o.items[i] for i in range(len(o.items)) if s >> i & 1]
        tuples = frozenset(x for k, x in members if k == "atom")
        names = tuple(n for k, x in members if k == "formula" for n in kb.formulas[x].names)
        out.append((tuples, names))
    return out


def oracle_kb_mc_count(db: Database, cs: ConstraintSet) -> int:
    return len(_PropOracle(naive_kb(db, cs)).mc)


def cross_check(db: Database, cs: ConstraintSet) -> list[tuple[str, MeasureValue, MeasureValue]]:
    """(measure, optimized, oracle) for every one of the twenty measures that disagrees."""
    from .measures import ALL_MEASURES, measure_all
    report = measure_all(db, cs)
    expected = {f"db:{k}": v for k, v in oracle_db_measures(db, cs).items()}
    expected.update({f"prop:{k}": v for k, v in oracle_prop_measures(db, cs).items()})
    out = []
    for m in ALL_MEASURES:
        got, want = report.values[m], expected[f"{m.family}:{m.name}"]
        if got != want:
            out.append((str(m), got, want))
    return out
