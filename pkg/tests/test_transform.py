import json

import pytest

from incmeter import collapse_example, delete_constraint, delete_tuple, mi_of_kb, transform, union_transform
from incmeter.generate import InstanceGen
from incmeter.oracle import oracle_kb_mi
from incmeter.transform import kb_dimacs_like, kb_from_json, kb_set_for, kb_to_json, mi_of_db


def test_kb_of_the_ticket_database(ticket, tid):
    db, cs = ticket
    kb = transform(db, cs)
    assert len(kb.atoms) == 7
    assert [f.sources for f in kb.formulas] == [("c1",), ("c3",), ("c4",)]
    assert kb.render() == "{a1, a2, a3, a4, a5, a6, a7, ¬a5, (¬a1 ∨ ¬a3) ∧ (¬a2 ∨ ¬a3), ¬a5 ∨ ¬a6 ∨ ¬a7}"
    assert not kb.is_consistent()


def test_mi_of_the_ticket_kb(ticket, tid):
    db, cs = ticket
    kb = transform(db, cs)
    g = {f.sources[0]: f for f in kb.formulas}
    expected = {
        frozenset([g["c1"], tid["t5"]]),
        frozenset([g["c3"], tid["t1"], tid["t3"]]),
        frozenset([g["c3"], tid["t2"], tid["t3"]]),
        frozenset([g["c4"], tid["t5"], tid["t6"], tid["t7"]]),
    }
    assert set(mi_of_kb(kb)) == expected


def test_collapse_of_coinciding_formulas():
    db, cs = collapse_example()
    kb = transform(db, cs)
    assert len(kb.formulas) == 1 and kb.formulas[0].sources == ("c1", "c2")
    assert kb.render() == "{a1, ¬a1}"
    assert len(mi_of_kb(kb)) == 1


def test_formula_level_mi_maps_onto_kb_mi(ticket):
    db, cs = ticket
    assert len(mi_of_db(db, cs)) == 4  # c4's triple survives: c1 is a separate formula
    db, cs = collapse_example()
    pairs = mi_of_db(db, cs)
    assert len(pairs) == 2
    kb = transform(db, cs)
    assert len({kb_set_for(kb, s, c) for s, c in pairs}) == 1


def test_deleting_one_of_two_collapsed_constraints_leaves_kb_unchanged():
    db, cs = collapse_example()
    before = transform(db, cs)
    after = delete_constraint(db, cs, "c1")
    assert after.atoms == before.atoms
    assert [f.clauses for f in after.formulas] == [f.clauses for f in before.formulas]
    assert after.formulas[0].sources == ("c2",)


def test_deletion_equals_retransformation():
    gen = InstanceGen(seed=5, max_tuples=6)
    for trial in range(60):
        db, cs = gen.instance("deletion", trial)
        for t in db.ids:
            assert delete_tuple(db, cs, t) == transform(db.without([t]), cs)
        for name in cs.names:
            assert delete_constraint(db, cs, name) == transform(db, cs.without(name))


def test_union_equals_transformation_of_union(ticket, tid):
    db, cs = ticket
    left = db.subset([tid["t1"], tid["t2"], tid["t5"]])
    right = db.subset([tid["t3"], tid["t6"], tid["t7"]])
    kb = union_transform(left, cs.only(["c1", "c3"]), right, cs.only(["c4"]))
    assert kb == transform(left.union(right), cs)


def test_mi_matches_enumeration():
    gen = InstanceGen(seed=6, max_tuples=5)
    for trial in range(60):
        db, cs = gen.instance("kbmi", trial)
        kb = transform(db, cs)
        mine = {(frozenset(x for x in m if x in db), frozenset(n for x in m if x not in db for n in x.sources))
                for m in mi_of_kb(kb)}
        oracle = {(t, frozenset(n)) for t, n in oracle_kb_mi(db, cs)}
        assert mine == oracle


def test_json_round_trip(ticket):
    db, cs = ticket
    kb = transform(db, cs)
    data = json.loads(json.dumps(kb_to_json(kb, db)))
    assert kb_from_json(data) == kb
    assert data["atoms"][0] == {"id": 1, "tuple": "MealTicket:1", "relation": "MealTicket",
                                "values": ["1001", "15", "Matthew", "2018-12-13"]}


def test_dimacs_like_layout(ticket):
    db, cs = ticket
    text = kb_dimacs_like(transform(db, cs))
    lines = text.splitlines()
    assert lines[0] == "p kb 7 11"
    assert "c g(c3)" in lines and "-1 -3 0" in lines and "-5 -6 -7 0" in lines


def test_consistent_database_gives_atoms_only(ticket, tid):
    db, cs = ticket
    kb = transform(db.subset([tid["t1"], tid["t4"]]), cs)
    assert kb.formulas == () and kb.is_consistent()


def test_malformed_json_rejected():
    from incmeter import DataError
    with pytest.raises(DataError):
        kb_from_json({"atoms": [{"id": 1}], "formulas": []})
