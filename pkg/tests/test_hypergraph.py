from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from incmeter import (INF, Hypergraph, maximal_consistent_subsets, min_cover_by_sets, min_hitting_set,
                      minimal_transversals)

edges_strategy = st.lists(st.frozensets(st.integers(0, 6), min_size=1, max_size=3), max_size=6)


def brute_transversals(edges, universe):
    hits = [frozenset(c) for k in range(len(universe) + 1) for c in combinations(sorted(universe), k)
            if all(set(c) & e for e in edges)]
    return {h for h in hits if not any(o < h for o in hits)}


def test_small_example():
    h = Hypergraph.of([{1, 2}, {2, 3}])
    assert set(minimal_transversals(h)) == {frozenset({2}), frozenset({1, 3})}
    assert min_hitting_set(h)[0] == 1
    assert set(maximal_consistent_subsets({1, 2, 3}, [{1, 2}, {2, 3}])) == {frozenset({1, 3}), frozenset({2})}


def test_empty_hypergraph():
    assert minimal_transversals(Hypergraph.of([])) == [frozenset()]
    assert min_hitting_set(Hypergraph.of([]))[0] == 0
    assert maximal_consistent_subsets({1, 2}, []) == [frozenset({1, 2})]


@settings(max_examples=150, deadline=None)
@given(edges_strategy)
def test_transversals_against_enumeration(edges):
    universe = frozenset().union(*edges) if edges else frozenset()
    trs = minimal_transversals(Hypergraph.of(edges))
    assert set(trs) == brute_transversals(edges, universe)
    value, hs = min_hitting_set(Hypergraph.of(edges))
    assert value == min(len(t) for t in trs)
    assert all(hs & e for e in edges)


@settings(max_examples=150, deadline=None)
@given(edges_strategy)
def test_mcs_are_complements_of_transversals(edges):
    universe = frozenset(range(7))
    mcs = maximal_consistent_subsets(universe, edges)
    assert {universe - m for m in mcs} == brute_transversals(edges, universe)
    for m in mcs:
        assert not any(e <= m for e in edges)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.frozensets(st.integers(0, 5), max_size=4), max_size=6))
def test_min_cover_against_enumeration(cands):
    universe = frozenset(range(4))
    value, cover = min_cover_by_sets(universe, cands)
    best = next((k for k in range(1, len(cands) + 1)
                 for c in combinations(cands, k) if universe <= frozenset().union(*c)), None)
    if best is None:
        assert value == INF
    else:
        assert value == best
        assert universe <= frozenset().union(*cover)


def test_cover_of_empty_universe():
    assert min_cover_by_sets(frozenset(), [])[0] == 0
