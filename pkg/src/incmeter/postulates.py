"""Machine checks of the rationality postulates for both measure families.

A postulate instance is a :class:`Case`: a master database with constraints
plus named *views*, each a subset of the tuples together with a subset of
the constraints. Every postulate compares measure values of views, e.g.
Penalty compares ``base`` with ``reduced`` (base minus one problematic
tuple or constraint). For the propositional family a view is evaluated on
its own transformed knowledge base, which is how deletion and union of
tuples and constraints act on K_DB.

Expected-✓ cells are checked on random cases; expected-✗ cells need a
stored counterexample that re-verifies.
"""

from __future__ import annotations

import functools
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .dsl import ConstraintSet, DenialConstraint, parse_constraints, pretty_print
from .files import load_manifest, parse_schema, write_bundle
from .generate import InstanceGen
from .measures import CLI_NAMES, NAMES, Analysis, MeasureId, _db_value, _prop_value
from .model import Database, MeasureValue, TupleId, load_database

POSTULATES = ("FFI", "SFI", "Penalty", "Dominance", "SA", "MISep", "MINorm", "Atten", "EC", "AC")
LONG_NAMES = {
    "FFI": "Free-Formula Independence",
    "SFI": "Safe-Formula Independence",
    "Penalty": "Penalty",
    "Dominance": "Dominance",
    "SA": "Super-Additivity",
    "MISep": "MI-Separability",
    "MINorm": "MI-Normalization",
    "Atten": "Attenuation",
    "EC": "Equal Conflict",
    "AC": "Almost Consistency",
}

# columns follow NAMES: B M sharp P A H nc hs C eta
EXPECTED_TABLES = {
    "prop": {
        "FFI":       "✓✓✓✓✓✓✗✓✓✓",
        "SFI":       "✓✓✓✓✓✓✗✓✓✓",
        "Penalty":   "✗✓✓✓✓✗✓✗✗✗",
        "Dominance": "✓✗✗✗✗✗✗✓✓✓",
        "SA":        "✗✓✓✓✓✓✓✗✓✗",
        "MISep":     "✗✓✓✗✗✗✗✗✗✗",
        "MINorm":    "✓✓✗✗✗✓✓✓✓✗",
        "Atten":     "✗✗✓✗✗✗✗✗✗✓",
        "EC":        "✓✓✓✓✓✓✓✓✓✓",
        "AC":        "✗✗✓✗✗✗✗✗✗✓",
    },
    "db": {
        "FFI":       "✓✓✓✓✓✓✗✓✓✓",
        "SFI":       "✓✓✓✓✓✓✗✓✓✓",
        "Penalty":   "✗✓✓✓✗✗✓✗✗✗",
        "Dominance": "✓✓✓✓✓✓✓✓✓✓",
        "SA":        "✗✓✓✓✓✓✓✗✓✗",
        "MISep":     "✗✓✓✗✗✗✗✗✗✗",
        "MINorm":    "✓✓✗✗✗✓✓✗✓✗",
        "Atten":     "✗✗✓✗✗✗✗✗✗✗",
        "EC":        "✓✓✓✓✓✓✓✓✓✓",
        "AC":        "✗✗✓✗✗✗✗✗✗✓",
    },
}

AC_RANGE = range(2, 7)


def expected(m: MeasureId, postulate: str) -> bool:
    return EXPECTED_TABLES[m.family][postulate][NAMES.index(m.name)] == "✓"


def by_definition(family: str, postulate: str) -> bool:
    # one tuple never implies another, so database Dominance only adds identical tuples
    return family == "db" and postulate == "Dominance"


class PostulateError(Exception):
    pass


@dataclass(frozen=True)
class View:
    tuples: frozenset
    constraints: tuple[str, ...]

    def to_json(self) -> dict:
        return {"tuples": sorted(map(str, self.tuples)), "constraints": list(self.constraints)}

    @classmethod
    def from_json(cls, d) -> "View":
        return cls(frozenset(TupleId.parse(t) for t in d["tuples"]), tuple(d["constraints"]))


@dataclass
class Case:
    postulate: str
    family: str
    db: Database
    cs: ConstraintSet
    views: dict[str, View]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def view(self, name: str) -> tuple[Database, ConstraintSet]:
        v = self.views[name]
        return self.db.subset(v.tuples), self.cs.only(v.constraints)

    def analysis(self, name: str) -> Analysis:
        key = ("analysis", self.views[name])
        if key not in self._cache:
            self._cache[key] = _shared_analysis(*self.view(name))
        return self._cache[key]

    def value(self, measure: MeasureId, name: str) -> MeasureValue:
        key = (measure, self.views[name])
        if key not in self._cache:
            fn = _db_value if measure.family == "db" else _prop_value
            self._cache[key] = fn(self.analysis(name), measure.name, {})
        return self._cache[key]

    def values(self, measure: MeasureId) -> dict[str, MeasureValue]:
        return {name: self.value(measure, name) for name in self.views}


@functools.lru_cache(maxsize=2048)
def _shared_analysis(db: Database, cs: ConstraintSet) -> Analysis:
    # stored bundles and structured cases often repeat the same view
    return Analysis(db, cs)


# -- views as sets of KB items / tuple sets ------------------------------------

def _db_mi(a: Analysis) -> set[frozenset]:
    return set(a.hypergraph.edges)


def _kb_mi_items(a: Analysis) -> set[frozenset]:
    """MI(K) with atoms as TupleIds and each formula as its clause set."""
    out = set()
    for m in a.kb_mi:
        out.add(frozenset(x if isinstance(x, TupleId) else ("formula", x.clauses) for x in m))
    return out


def _free_items(case: Case, name: str) -> list:
    a = case.analysis(name)
    v = case.views[name]
    if case.family == "db":
        return sorted(v.tuples - a.classification.problematic)
    in_mi = frozenset().union(*a.kb_mi) if a.kb_mi else frozenset()
    tuples = sorted(t for t in v.tuples if t not in in_mi)
    undefined = [c for c in v.constraints if a.kb.formula_for(c) is None]
    return tuples + undefined


def _safe_items(case: Case, name: str) -> list:
    """Free items sharing no atom with the rest of the knowledge base."""
    if case.family == "db":
        return _free_items(case, name)
    a = case.analysis(name)
    v = case.views[name]
    free = set(_free_items(case, name))
    mentioned = {t for f in a.kb.formulas for cl in f.clauses for t in cl}
    tuples = sorted(t for t in v.tuples if t in free and t not in mentioned)
    undefined = [c for c in v.constraints if a.kb.formula_for(c) is None]
    return tuples + undefined


def _problematic_items(case: Case, name: str) -> list:
    a = case.analysis(name)
    v = case.views[name]
    if case.family == "db":
        return sorted(a.classification.problematic)
    in_mi = frozenset().union(*a.kb_mi) if a.kb_mi else frozenset()
    tuples = sorted(t for t in v.tuples if t in in_mi)
    defined = [c for c in v.constraints if a.kb.formula_for(c) is not None]
    return tuples + defined


def _remove(v: View, item) -> View:
    if isinstance(item, TupleId):
        return View(v.tuples - {item}, v.constraints)
    return View(v.tuples, tuple(c for c in v.constraints if c != item))


def _union(a: View, b: View, order) -> View:
    names = set(a.constraints) | set(b.constraints)
    return View(a.tuples | b.tuples, tuple(n for n in order if n in names))


def _mi_views(case: Case, source: str) -> list[View]:
    """Each minimal inconsistent set of the source view as a standalone view."""
    a = case.analysis(source)
    v = case.views[source]
    if case.family == "db":
        return [View(e, v.constraints) for e in a.hypergraph.edges]
    out = []
    for f in a.kb.formulas:
        for cl in sorted(f.clauses, key=lambda c: (len(c), sorted(c))):
            out.append(View(frozenset(cl), f.sources))
    return out


def _mi_size(case: Case, v: View) -> int:
    return len(v.tuples) + (1 if case.family == "prop" else 0)


def _weakens(strong: DenialConstraint, weak: DenialConstraint) -> bool:
    """Sufficient syntactic test that ``strong`` implies ``weak``."""
    k = len(strong.atoms)
    return (weak.atoms[:k] == strong.atoms
            and set(strong.phi) <= set(weak.phi)
            and (len(weak.atoms) == k or weak.phi == strong.phi))


def antecedent_error(case: Case) -> str | None:
    """None when the case satisfies its postulate's hypothesis, else the reason."""
    p, v = case.postulate, case.views
    if p in ("FFI", "SFI", "Penalty"):
        base, red = v["base"], v["reduced"]
        removed = list(base.tuples - red.tuples) + [c for c in base.constraints if c not in red.constraints]
        if len(removed) != 1 or not (red.tuples <= base.tuples) or \
                not set(red.constraints) <= set(base.constraints):
            return "reduced view must drop exactly one item of the base view"
        if case.family == "db" and not isinstance(removed[0], TupleId):
            return "database postulates remove tuples only"
        pool = {"FFI": _free_items, "SFI": _safe_items, "Penalty": _problematic_items}[p](case, "base")
        if removed[0] not in pool:
            kind = {"FFI": "free", "SFI": "safe", "Penalty": "problematic"}[p]
            return f"{removed[0]} is not {kind} in the base view"
        return None
    if p == "Dominance":
        phi, psi = case.cs[case_role(case, "phi")], case.cs[case_role(case, "psi")]
        if not _weakens(phi, psi):
            return "psi is not a weakening of phi"
        base = set(v["with_phi"].constraints) - {phi.name}
        if base != set(v["with_psi"].constraints) - {psi.name} or v["with_phi"].tuples != v["with_psi"].tuples:
            return "the two views must share tuples and base constraints"
        return None
    if p in ("SA", "MISep"):
        left, right, union = v["left"], v["right"], v["union"]
        if union != _union(left, right, case.cs.names):
            return "union view is not the union of left and right"
        if case.family == "db" and not (set(left.constraints) == set(right.constraints) == set(case.cs.names)):
            return "database views keep the full constraint set"
        if p == "SA":
            if left.tuples & right.tuples or set(left.constraints) & set(right.constraints) and case.family == "prop":
                return "left and right are not disjoint"
            return None
        mi = _db_mi if case.family == "db" else _kb_mi_items
        ml, mr, mu = mi(case.analysis("left")), mi(case.analysis("right")), mi(case.analysis("union"))
        if mu != ml | mr or ml & mr:
            return "MI sets of left and right do not partition those of the union"
        return None
    if p in ("MINorm", "Atten", "EC"):
        members = {"MINorm": ["mi"], "Atten": ["smaller", "larger"], "EC": ["first", "second"]}[p]
        pool = _mi_views(case, "source")
        for name in members:
            if v[name] not in pool:
                return f"view {name} is not a minimal inconsistent set of the source"
        if p == "Atten" and not _mi_size(case, v["smaller"]) < _mi_size(case, v["larger"]):
            return "smaller is not smaller than larger"
        if p == "EC" and _mi_size(case, v["first"]) != _mi_size(case, v["second"]):
            return "the two sets differ in size"
        return None
    if p == "AC":
        seq = sorted(v, key=lambda n: int(n[1:]))
        sizes = []
        for name in seq:
            pool = _mi_views(case, name)
            if pool != [v[name]]:
                return f"view {name} is not minimal inconsistent as a whole"
            sizes.append(_mi_size(case, v[name]))
        if any(a >= b for a, b in zip(sizes, sizes[1:])):
            return "sizes must grow along the sequence"
        return None
    return f"unknown postulate {p}"


def case_role(case: Case, role: str) -> str:
    return case._cache.get(("role", role)) or {"phi": "phi", "psi": "psi"}[role]


def holds(case: Case, m: MeasureId) -> bool:
    """Whether the postulate's conclusion holds for measure ``m`` on this case."""
    p = case.postulate
    val = lambda name: case.value(m, name)  # noqa: E731
    if p in ("FFI", "SFI"):
        return val("base") == val("reduced")
    if p == "Penalty":
        return val("base") > val("reduced")
    if p == "Dominance":
        return val("with_phi") >= val("with_psi")
    if p == "SA":
        return val("union") >= val("left") + val("right")
    if p == "MISep":
        return val("union") == val("left") + val("right")
    if p == "MINorm":
        return val("mi") == 1
    if p == "Atten":
        return val("smaller") > val("larger")
    if p == "EC":
        return val("first") == val("second")
    if p == "AC":
        seq = [val(n) for n in sorted(case.views, key=lambda n: int(n[1:]))]
        return all(b < a for a, b in zip(seq, seq[1:]))
    raise PostulateError(p)


# -- random cases ---------------------------------------------------------------

def random_cases(postulate: str, family: str, gen: InstanceGen, trial: int) -> list[Case]:
    """Cases built from one random master instance; all satisfy the antecedent."""
    rng = gen.rng("postulate", family, postulate, trial)
    schema = gen.schema(rng)
    # comparing MI sets needs several of them, ideally of different sizes
    k = gen.max_constraints if postulate in ("Atten", "EC") else None
    cs = gen.constraints(rng, schema, k)
    if postulate == "Dominance":
        phi = gen.constraint(rng, schema, "phi")
        cs = ConstraintSet(list(cs) + [phi, gen.weaken(rng, schema, phi, "psi")])
    db = gen.database(rng, schema)
    everything = View(db.ids, cs.names)
    out: list[Case] = []

    def make(views):
        return Case(postulate, family, db, cs, views)

    if postulate in ("FFI", "SFI", "Penalty"):
        probe = make({"base": everything})
        picker = {"FFI": _free_items, "SFI": _safe_items, "Penalty": _problematic_items}[postulate]
        for item in picker(probe, "base"):
            if family == "db" and not isinstance(item, TupleId):
                continue
            c = make({"base": everything, "reduced": _remove(everything, item)})
            c._cache.update(probe._cache)
            out.append(c)
    elif postulate == "Dominance":
        base = tuple(n for n in cs.names if n not in ("phi", "psi"))
        out.append(make({"with_phi": View(db.ids, base + ("phi",)),
                         "with_psi": View(db.ids, base + ("psi",))}))
    elif postulate in ("SA", "MISep"):
        ids = sorted(db.ids)
        for _ in range(3):
            if postulate == "SA":
                sides = [rng.choice("LRN") for _ in ids]
                csides = [rng.choice("LR") for _ in cs.names]
            else:
                sides = [rng.choice("LRBN") for _ in ids]
                csides = [rng.choice("LRB") for _ in cs.names]
            lt = frozenset(t for t, s in zip(ids, sides) if s in "LB")
            rt = frozenset(t for t, s in zip(ids, sides) if s in "RB")
            if family == "db":
                lc = rc = cs.names
            else:
                lc = tuple(n for n, s in zip(cs.names, csides) if s in "LB")
                rc = tuple(n for n, s in zip(cs.names, csides) if s in "RB")
            left, right = View(lt, lc), View(rt, rc)
            out.append(make({"left": left, "right": right, "union": _union(left, right, cs.names)}))
    elif postulate in ("MINorm", "Atten", "EC"):
        probe = make({"source": everything})
        mis = _mi_views(probe, "source")
        if postulate == "MINorm":
            pairs = [{"mi": m} for m in mis]
        else:
            pairs = []
            for i, a in enumerate(mis):
                for b in mis[i + 1:]:
                    sa, sb = _mi_size(probe, a), _mi_size(probe, b)
                    if postulate == "EC" and sa == sb:
                        pairs.append({"first": a, "second": b})
                    elif postulate == "Atten" and sa != sb:
                        pairs.append({"smaller": a, "larger": b} if sa < sb else {"smaller": b, "larger": a})
        for views in pairs:
            c = make({"source": everything, **views})
            c._cache.update(probe._cache)
            out.append(c)
    return [c for c in out if antecedent_error(c) is None]


def almost_consistency_case(family: str) -> Case:
    """M_n for n in 2..6: n distinct tuples and the constraint 'at most n-1 tuples'."""
    schema = parse_schema("relation Item(K: int)")
    n_max = max(AC_RANGE)
    db = load_database(schema, {"Item": [(k,) for k in range(1, n_max + 1)]})
    text = "".join(f"nd m{n}: Item: -> {n - 1} K\n" for n in AC_RANGE)
    cs = parse_constraints(text, schema)
    ids = sorted(db.ids)
    views = {f"n{n}": View(frozenset(ids[:n]), (f"m{n}",)) for n in AC_RANGE}
    return Case("AC", family, db, cs, views)


# -- results --------------------------------------------------------------------

@dataclass
class CheckResult:
    measure: MeasureId
    postulate: str
    expected: bool
    verdict: str  # held | counterexample-verified | satisfied-by-definition | violated | no-counterexample
    trials: int = 0
    cases: int = 0
    counterexample: Case | None = None
    detail: str = ""

    @property
    def matches(self) -> bool:
        if self.expected:
            return self.verdict == "held" or self.verdict == "satisfied-by-definition"
        return self.verdict == "counterexample-verified"

    @property
    def mark(self) -> str:
        if self.verdict == "no-counterexample":
            return "?"
        ok = self.verdict == "held" or self.verdict == "satisfied-by-definition"
        return "✓" if ok else "✗"


def _run_trials(postulate, family, measures, gen, trials, threads):
    def one(trial):
        found = {}
        cases = random_cases(postulate, family, gen, trial)
        for c in cases:
            for m in measures:
                if m not in found and not holds(c, m):
                    found[m] = c
        return len(cases), found

    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(t) for t in range(trials)]
    total = sum(n for n, _ in results)
    first: dict = {}
    for _, found in results:  # earliest trial wins, independent of scheduling
        for m, c in found.items():
            first.setdefault(m, c)
    return total, first


def check_postulate(m: MeasureId, postulate: str, gen: InstanceGen, trials: int,
                    store: Path | None = None, threads: int = 1) -> CheckResult:
    return check_family(m.family, gen, trials, store, threads, measures=[m], postulates=[postulate])[0]


def check_family(family: str, gen: InstanceGen, trials: int, store: Path | None = None,
                 threads: int = 1, measures=None, postulates=POSTULATES) -> list[CheckResult]:
    measures = measures or [MeasureId(family, n) for n in NAMES]
    out: list[CheckResult] = []
    for p in postulates:
        want = [m for m in measures if expected(m, p)]
        if by_definition(family, p):
            out += [CheckResult(m, p, True, "satisfied-by-definition") for m in want]
        elif want:
            fixed = structured_cases(p, family)
            found = {}
            for c in fixed:
                for m in want:
                    if m not in found and not holds(c, m):
                        found[m] = c
            n_trials = 0 if p == "AC" else trials
            total = len(fixed)
            if n_trials:
                n, random_found = _run_trials(p, family, want, gen, n_trials, threads)
                total += n
                for m, c in random_found.items():
                    found.setdefault(m, c)
            for m in want:
                c = found.get(m)
                out.append(CheckResult(m, p, True, "violated" if c else "held",
                                       n_trials, total, c))
        for m in measures:
            if expected(m, p):
                continue
            out.append(verify_stored(m, p, store))
    order = {(m, p): i for i, (p, m) in enumerate((p, m) for p in postulates for m in measures)}
    out.sort(key=lambda r: order[(r.measure, r.postulate)])
    return out


# -- counterexample store ---------------------------------------------------------

def default_store() -> Path:
    from .datasets import data_path
    return data_path("counterexamples")


def bundle_dir(store: Path, m: MeasureId, postulate: str) -> Path:
    return Path(store) / m.family / f"{CLI_NAMES[m.name]}-{postulate}"


def _compact(case: Case) -> Case:
    """Keep only referenced tuples and constraints, renumbered from 1 per relation."""
    used = frozenset().union(*(v.tuples for v in case.views.values()))
    names = {n for v in case.views.values() for n in v.constraints}
    if case.postulate == "Dominance":
        names |= {"phi", "psi"}
    mapping = {}
    rows: dict[str, list] = {r.name: [] for r in case.db.schema}
    for tid in sorted(used):
        rows[tid.relation].append(tuple(v.v for v in case.db[tid].values))
        mapping[tid] = TupleId(tid.relation, len(rows[tid.relation]))
    db = load_database(case.db.schema, rows)
    cs = ConstraintSet(c for c in case.cs if c.name in names)
    views = {k: View(frozenset(mapping[t] for t in v.tuples), v.constraints) for k, v in case.views.items()}
    return Case(case.postulate, case.family, db, cs, views)


def save_case(case: Case, m: MeasureId, directory: Path) -> Path:
    case = _compact(case)
    if holds(case, m):
        raise PostulateError("refusing to store a case that does not violate the postulate")
    info = {
        "family": case.family,
        "measure": str(m),
        "postulate": case.postulate,
        "postulate_name": LONG_NAMES[case.postulate],
        "expected": "violated",
        "views": {k: v.to_json() for k, v in sorted(case.views.items())},
        "values": {k: v.to_json() for k, v in sorted(case.values(m).items())},
    }
    text = json.dumps(info, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    return write_bundle(directory, case.db, pretty_print(case.cs), {"case.json": text})


def load_case(directory: Path) -> tuple[Case, MeasureId]:
    directory = Path(directory)
    info = json.loads((directory / "case.json").read_text(encoding="utf-8"))
    _, db, cs = load_manifest(directory / "manifest.txt")
    views = {k: View.from_json(v) for k, v in info["views"].items()}
    return Case(info["postulate"], info["family"], db, cs, views), MeasureId.parse(info["measure"])


def verify_stored(m: MeasureId, postulate: str, store: Path | None = None) -> CheckResult:
    d = bundle_dir(store or default_store(), m, postulate)
    if not (d / "case.json").exists():
        return CheckResult(m, postulate, False, "no-counterexample", detail="no stored counterexample")
    case, stored_m = load_case(d)
    if stored_m != m or case.postulate != postulate:
        return CheckResult(m, postulate, False, "no-counterexample", detail=f"{d} is for another cell")
    err = antecedent_error(case)
    if err:
        return CheckResult(m, postulate, False, "no-counterexample", detail=f"stored case invalid: {err}")
    if holds(case, m):
        return CheckResult(m, postulate, False, "no-counterexample", detail="stored case does not violate")
    return CheckResult(m, postulate, False, "counterexample-verified", counterexample=case, detail=str(d))


def _build(postulate, family, schema_text, rows, constraints_text, views) -> Case:
    schema = parse_schema(schema_text)
    db = load_database(schema, rows)
    cs = parse_constraints(constraints_text, schema)
    tid = {str(t): t for t in db.ids}
    return Case(postulate, family, db, cs,
                {k: View(frozenset(tid[t] for t in ts), tuple(cn)) for k, (ts, cn) in views.items()})


def shared_tuple_case(family: str) -> Case:
    """Two MI sets that meet in one tuple, split between left and right.

    Database form: R(1,1,0) and R(1,2,2) break A -> B, R(1,2,2) and R(3,2,3)
    break B -> C. Propositional form: R(1,9) breaks a unary constraint on its
    own and, with R(1,2), the dependency A -> B.
    """
    if family == "db":
        return _build("MISep", "db", "relation R(A: int, B: int, C: int)",
                      {"R": [(1, 1, 0), (1, 2, 2), (3, 2, 3)]},
                      "fd ab: R: A -> B\nfd bc: R: B -> C\n",
                      {"left": (["R:1", "R:2"], ["ab", "bc"]),
                       "right": (["R:2", "R:3"], ["ab", "bc"]),
                       "union": (["R:1", "R:2", "R:3"], ["ab", "bc"])})
    return _build("MISep", "prop", "relation R(A: int, B: int)",
                  {"R": [(1, 9), (1, 2)]},
                  "fd ab: R: A -> B\ndenial no9: R(x, y) -> y != 9\n",
                  {"left": (["R:1", "R:2"], ["ab"]),
                   "right": (["R:1"], ["no9"]),
                   "union": (["R:1", "R:2"], ["ab", "no9"])})


def four_cycle_case() -> Case:
    """Four tuples whose conflicts form a cycle under two FDs, split into two conflicting pairs."""
    return _build("SA", "db", "relation R(A: int, B: int, C: int, D: int)",
                  {"R": [(1, 1, 1, 1), (1, 2, 2, 1), (3, 3, 1, 2), (3, 4, 2, 2)]},
                  "fd ab: R: A -> B\nfd cd: R: C -> D\n",
                  {"left": (["R:1", "R:2"], ["ab", "cd"]),
                   "right": (["R:3", "R:4"], ["ab", "cd"]),
                   "union": (["R:1", "R:2", "R:3", "R:4"], ["ab", "cd"])})


def collapse_penalty_case() -> Case:
    """Dropping one of two constraints whose formulas coincide."""
    return _build("Penalty", "prop", "relation R(A: int)", {"R": [(0,)]},
                  "denial c1: R(x) -> x = 1\ndenial c2: R(x) -> x = 2\n",
                  {"base": (["R:1"], ["c1", "c2"]), "reduced": (["R:1"], ["c2"])})


def structured_cases(postulate: str, family: str) -> list[Case]:
    """Fixed cases with shapes that small random instances rarely produce."""
    out = []
    if postulate == "MISep":
        out.append(shared_tuple_case(family))
    if postulate == "SA" and family == "db":
        out.append(four_cycle_case())
    if postulate == "Penalty" and family == "prop":
        out.append(collapse_penalty_case())
    if postulate == "AC":
        out.append(almost_consistency_case(family))
    return [c for c in out if antecedent_error(c) is None]


def handmade_case(m: MeasureId, postulate: str) -> Case | None:
    for case in structured_cases(postulate, m.family):
        if not holds(case, m):
            return case
    return None


def find_counterexample(m: MeasureId, postulate: str, gen: InstanceGen, budget: int) -> Case | None:
    """Random search for a case violating ``postulate`` for ``m``."""
    if postulate == "AC":
        case = almost_consistency_case(m.family)
        return None if holds(case, m) else case
    if by_definition(m.family, postulate):
        return None
    for trial in range(budget):
        for c in random_cases(postulate, m.family, gen, trial):
            if not holds(c, m):
                return c
    return None


def populate_store(store: Path, gen: InstanceGen, budget: int = 2000, families=("prop", "db"),
                   log=print) -> dict:
    """Search and save a counterexample for every expected-✗ cell lacking a valid one."""
    summary = {}
    for family in families:
        for p in POSTULATES:
            for name in NAMES:
                m = MeasureId(family, name)
                if expected(m, p):
                    continue
                if verify_stored(m, p, store).verdict == "counterexample-verified":
                    summary[(m, p)] = "kept"
                    continue
                case = find_counterexample(m, p, gen, budget) or handmade_case(m, p)
                if case is None:
                    summary[(m, p)] = "not found"
                    log(f"{m} {p}: no counterexample within budget")
                    continue
                save_case(case, m, bundle_dir(store, m, p))
                summary[(m, p)] = "stored"
                log(f"{m} {p}: stored")
    return summary


# -- report -----------------------------------------------------------------------

def table_report(gen: InstanceGen, trials: int, store: Path | None = None, threads: int = 1,
                 families=("prop", "db")) -> tuple[str, list[CheckResult]]:
    """Markdown tables of observed verdicts; cells that differ from the expected table are flagged."""
    lines, results = [], []
    for family in families:
        res = check_family(family, gen, trials, store, threads)
        results += res
        cell = {(r.postulate, r.measure.name): r for r in res}
        title = "Propositional measures on K_DB" if family == "prop" else "Database measures"
        lines.append(f"## {title} (trials={trials}, seed={gen.seed})")
        lines.append("")
        lines.append("| Postulate | " + " | ".join(CLI_NAMES[n] for n in NAMES) + " |")
        lines.append("|---|" + "---|" * len(NAMES))
        for p in POSTULATES:
            marks = []
            for n in NAMES:
                r = cell[(p, n)]
                marks.append(r.mark if r.matches else f"**{r.mark}** (expected {'✓' if r.expected else '✗'})")
            lines.append(f"| {LONG_NAMES[p]} | " + " | ".join(marks) + " |")
        lines.append("")
        bad = [r for r in res if not r.matches]
        lines.append(f"Mismatches: {len(bad)}")
        for r in bad:
            lines.append(f"- {r.measure} {LONG_NAMES[r.postulate]}: {r.verdict}"
                         + (f" ({r.detail})" if r.detail else "")
                         + (f"; views {describe_case(r.counterexample, r.measure)}" if r.counterexample else ""))
        lines.append("")
    return "\n".join(lines), results


def describe_case(case: Case, m: MeasureId) -> str:
    parts = []
    for name, v in sorted(case.views.items()):
        tuples = ",".join(str(case.db[t]) for t in sorted(v.tuples))
        parts.append(f"{name}=[{tuples} | {','.join(v.constraints)}] -> {case.value(m, name)}")
    return "; ".join(parts)
