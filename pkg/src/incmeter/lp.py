"""Exact rational linear programming and the PSAT-based eta measures."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .model import MeasureValue

LE, EQ, GE = "<=", "=", ">="


class LPError(Exception):
    pass


class Infeasible(LPError):
    pass


class Unbounded(LPError):
    pass


@dataclass
class LinearProgram:
    """maximize objective·x  s.t.  each (coeffs, rel, rhs) row, and x >= lower."""

    objective: Sequence
    constraints: list = field(default_factory=list)
    lower: Sequence | None = None

    @property
    def n(self) -> int:
        return len(self.objective)

    def add(self, coeffs, rel, rhs) -> None:
        if rel not in (LE, EQ, GE):
            raise ValueError(f"unknown relation {rel!r}")
        if len(coeffs) != self.n:
            raise ValueError("coefficient vector has the wrong length")
        self.constraints.append((coeffs, rel, rhs))


@dataclass
class LPSolution:
    value: Fraction
    x: list[Fraction]


def simplex_max(lp: LinearProgram) -> LPSolution:
    """Two-phase tableau simplex in exact arithmetic with Bland's rule.

    Raises Infeasible or Unbounded.
    """
    n = lp.n
    lower = [Fraction(v) for v in (lp.lower or [0] * n)]
    obj = [Fraction(v) for v in lp.objective]

    rows = []
    for coeffs, rel, rhs in lp.constraints:
        a = [Fraction(v) for v in coeffs]
        b = Fraction(rhs) - sum(ai * li for ai, li in zip(a, lower))
        if b < 0:
            a, b = [-v for v in a], -b
            rel = {LE: GE, GE: LE, EQ: EQ}[rel]
        rows.append((a, rel, b))

    m = len(rows)
    n_slack = sum(1 for _, rel, _ in rows if rel != EQ)
    n_art = sum(1 for _, rel, _ in rows if rel != LE)
    width = n + n_slack + n_art
    art_start = n + n_slack
    T: list[list[Fraction]] = []
    basis: list[int] = []
    s_col, a_col = n, art_start
    for a, rel, b in rows:
        row = a + [Fraction(0)] * (n_slack + n_art) + [b]
        if rel == LE:
            row[s_col] = Fraction(1)
            basis.append(s_col)
            s_col += 1
        else:
            if rel == GE:
                row[s_col] = Fraction(-1)
                s_col += 1
            row[a_col] = Fraction(1)
            basis.append(a_col)
            a_col += 1
        T.append(row)

    def reduced(costs):
        d = list(costs) + [Fraction(0)]
        for i, bv in enumerate(basis):
            cb = costs[bv]
            if cb:
                r = T[i]
                for j in range(width + 1):
                    if r[j]:
                        d[j] -= cb * r[j]
        return d  # d[width] is minus the objective value

    def pivot(i, j, d):
        r = T[i]
        p = r[j]
        if p != 1:
            T[i] = r = [v / p for v in r]
        for k in range(len(T)):
            if k != i:
                f = T[k][j]
                if f:
                    rk = T[k]
                    T[k] = [vk - f * vi for vk, vi in zip(rk, r)]
        f = d[j]
        if f:
            d[:] = [vd - f * vi for vd, vi in zip(d, r)]
        basis[i] = j

    def run(d, allowed):
        while True:
            enter = next((j for j in range(width) if allowed[j] and d[j] > 0), None)
            if enter is None:
                return
            best = None
            for i in range(len(T)):
                a = T[i][enter]
                if a > 0:
                    ratio = T[i][width] / a
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded")
            pivot(best[1], enter, d)

    if n_art:
        costs = [Fraction(0)] * width
        for j in range(art_start, width):
            costs[j] = Fraction(-1)
        d = reduced(costs)
        run(d, [True] * width)
        if -d[width] < 0:
            raise Infeasible("no feasible point")
        # drive zero-level artificials out of the basis; drop redundant rows
        i = 0
        while i < len(T):
            if basis[i] >= art_start:
                j = next((j for j in range(art_start) if T[i][j] != 0), None)
                if j is None:
                    del T[i]
                    del basis[i]
                    continue
                pivot(i, j, d)
            i += 1

    allowed = [j < art_start for j in range(width)]
    costs = obj + [Fraction(0)] * (width - n)
    d = reduced(costs)
    run(d, allowed)

    x = [Fraction(0)] * width
    for i, bv in enumerate(basis):
        x[bv] = T[i][width]
    xs = [x[j] + lower[j] for j in range(n)]
    value = sum(c * v for c, v in zip(obj, xs))
    return LPSolution(value, xs)


@dataclass
class EtaResult:
    measure: MeasureValue
    eta: Fraction
    weights: dict  # column (frozenset) -> probability


def max_eta(rows: Iterable, columns: Sequence[frozenset]) -> tuple[Fraction, list[Fraction]]:
    """max η s.t. a distribution over ``columns`` gives every row mass >= η.

    A column covers the rows it contains. η is capped at 1.
    """
    rows = list(rows)
    k = len(columns)
    if not rows:
        return Fraction(1), [Fraction(1)] + [Fraction(0)] * (k - 1) if k else []
    # variables: x_1..x_k, then eta
    lp = LinearProgram([0] * k + [1])
    lp.add([1] * k + [0], EQ, 1)
    for r in rows:
        lp.add([-1 if r in col else 0 for col in columns] + [1], LE, 0)
    lp.add([0] * k + [1], LE, 1)
    sol = simplex_max(lp)
    return sol.value, sol.x[:k]


def _eta_result(rows, columns) -> EtaResult:
    columns = list(columns)
    eta, w = max_eta(rows, columns)
    weights = {c: p for c, p in zip(columns, w) if p}
    return EtaResult(MeasureValue(1 - eta), eta, weights)


def eta_db(db, cs=None, mcs=None) -> EtaResult:
    """1 − η* for Γ_C(D): tuples need probability >= η, constraints probability 1.

    Only interpretations whose true tuples form a consistent set may carry
    mass, and enlarging a true set never lowers coverage, so the maximal
    consistent subsets are a complete set of columns.
    """
    if mcs is None:
        from .grounding import conflict_hypergraph
        from .hypergraph import maximal_consistent_subsets
        mcs = maximal_consistent_subsets(db.ids, conflict_hypergraph(db, cs).edges)
    return _eta_result(sorted(db.ids), mcs)


def eta_prop(kb, mcs=None) -> EtaResult:
    """1 − η* for {P(φ) >= η | φ ∈ K}, with the maximal consistent subsets of K as columns."""
    from .hypergraph import maximal_consistent_subsets
    from .transform import kb_minimal_inconsistent_subsets
    items = kb.items()
    if mcs is None:
        index = {it: i for i, it in enumerate(items)}
        mi = [{index[x] for x in m} for m in kb_minimal_inconsistent_subsets(kb)]
        mcs = [frozenset(items[i] for i in s)
               for s in maximal_consistent_subsets(range(len(items)), mi)]
    return _eta_result(items, mcs)
