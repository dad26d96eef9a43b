"""Hypergraph algorithms behind the measures.

Vertices can be any mutually comparable hashable values (TupleIds, ints).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable

from .grounding import minimize
from .model import INF, MeasureValue


@dataclass(frozen=True)
class Hypergraph:
    vertices: frozenset
    edges: frozenset = field(default_factory=frozenset)

    @classmethod
    def of(cls, edges: Iterable[Iterable], vertices: Iterable = ()) -> "Hypergraph":
        es = frozenset(frozenset(e) for e in edges)
        vs = frozenset(vertices).union(*es) if es else frozenset(vertices)
        return cls(vs, es)

    def normalized(self) -> list[frozenset]:
        """Inclusion-minimal edges in a deterministic order."""
        return sorted(minimize(self.edges), key=lambda e: (len(e), sorted(e)))


def _sort_key(s):
    return sorted(s)


def minimal_transversals(h: Hypergraph) -> list[frozenset]:
    """All inclusion-minimal hitting sets, sorted by their sorted vertex lists.

    Edges are incorporated one at a time (Berge); after each step the
    candidate family is reduced to its minimal members.
    """
    edges = h.normalized()
    if any(not e for e in edges):
        return []
    transversals: set[frozenset] = {frozenset()}
    for e in edges:
        hit = {t for t in transversals if t & e}
        extended = {t | {v} for t in transversals - hit for v in e}
        transversals = minimize(hit | extended)
    return sorted(transversals, key=_sort_key)


def maximal_consistent_subsets(universe: Iterable, mi: Iterable[Iterable]) -> list[frozenset]:
    """Complements of the minimal transversals of ``mi`` within ``universe``."""
    u = frozenset(universe)
    h = Hypergraph.of(mi, u)
    return sorted((u - t for t in minimal_transversals(h)), key=_sort_key)


def _greedy_disjoint(edges: list[frozenset]) -> int:
    used: set = set()
    count = 0
    for e in sorted(edges, key=len):
        if not (e & used):
            used |= e
            count += 1
    return count


def min_hitting_set(h: Hypergraph) -> tuple[MeasureValue, frozenset | None]:
    """Minimum-cardinality hitting set and its size (INF when an edge is empty).

    Branch and bound: branch on the highest-degree vertex (ties by smallest
    vertex), taking it or deleting it; prune with a greedy matching of
    pairwise disjoint edges as a lower bound.
    """
    edges = h.normalized()
    if not edges:
        return MeasureValue(0), frozenset()
    if any(not e for e in edges):
        return INF, None

    # incumbent from the greedy max-degree heuristic
    best: list = [None]
    rest, chosen = list(edges), []
    while rest:
        deg = Counter(v for e in rest for v in e)
        v = min(deg, key=lambda x: (-deg[x], x))
        chosen.append(v)
        rest = [e for e in rest if v not in e]
    best[0] = frozenset(chosen)

    def rec(edges: list[frozenset], chosen: frozenset):
        # forced picks: singleton edges
        while True:
            singles = {next(iter(e)) for e in edges if len(e) == 1}
            if not singles:
                break
            chosen = chosen | singles
            edges = [e for e in edges if not (e & singles)]
        if not edges:
            if len(chosen) < len(best[0]):
                best[0] = chosen
            return
        if len(chosen) + _greedy_disjoint(edges) >= len(best[0]):
            return
        deg = Counter(v for e in edges for v in e)
        v = min(deg, key=lambda x: (-deg[x], x))
        rec([e for e in edges if v not in e], chosen | {v})
        reduced = [e - {v} for e in edges]
        rec(sorted(minimize(reduced), key=len), chosen)

    rec(edges, frozenset())
    return MeasureValue(len(best[0])), best[0]


def min_hitting_set_size(h: Hypergraph) -> MeasureValue:
    return min_hitting_set(h)[0]


def min_cover_by_sets(universe: Iterable, candidates: Iterable[Iterable]) -> tuple[MeasureValue, list | None]:
    """Fewest candidate sets whose union is ``universe``; INF if impossible."""
    u = frozenset(universe)
    cands = {frozenset(c) & u for c in candidates}
    cands.discard(frozenset())
    # a candidate contained in another is never needed
    cands = [c for c in cands if not any(c < d for d in cands)]
    cands.sort(key=lambda c: (-len(c), sorted(c)))
    if not u:
        return MeasureValue(0), []
    covered = frozenset().union(*cands) if cands else frozenset()
    if covered != u:
        return INF, None

    best: list = [None]

    def rec(uncovered: frozenset, picked: list):
        if not uncovered:
            if best[0] is None or len(picked) < len(best[0]):
                best[0] = list(picked)
            return
        if best[0] is not None:
            largest = max(len(c & uncovered) for c in cands)
            lower = -(-len(uncovered) // largest)
            if len(picked) + lower >= len(best[0]):
                return
        # branch on the element with the fewest covering candidates
        def options(x):
            return [c for c in cands if x in c]
        x = min(uncovered, key=lambda y: (len(options(y)), y))
        for c in sorted(options(x), key=lambda c: -len(c & uncovered)):
            picked.append(c)
            rec(uncovered - c, picked)
            picked.pop()

    rec(u, [])
    return MeasureValue(len(best[0])), best[0]
