from fractions import Fraction

import pytest

from incmeter import Infeasible, LinearProgram, Unbounded, eta_db, eta_prop, simplex_max, transform
from incmeter.lp import EQ, GE, LE


def test_textbook_problem():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
    lp = LinearProgram([3, 5])
    lp.add([1, 0], LE, 4)
    lp.add([0, 2], LE, 12)
    lp.add([3, 2], LE, 18)
    sol = simplex_max(lp)
    assert sol.value == 36 and sol.x == [2, 6]


def test_exact_fractions():
    lp = LinearProgram([1, 1])
    lp.add([3, 1], LE, 1)
    lp.add([1, 3], LE, 1)
    assert simplex_max(lp).value == Fraction(1, 2)


def test_equality_and_ge_rows():
    lp = LinearProgram([-1, -1])
    lp.add([1, 1], GE, 2)
    lp.add([1, -1], EQ, Fraction(1, 3))
    sol = simplex_max(lp)
    assert sol.value == -2 and sol.x == [Fraction(7, 6), Fraction(5, 6)]


def test_infeasible_and_unbounded():
    lp = LinearProgram([1])
    lp.add([1], LE, 1)
    lp.add([1], GE, 2)
    with pytest.raises(Infeasible):
        simplex_max(lp)
    lp = LinearProgram([1, 0])
    lp.add([0, 1], LE, 1)
    with pytest.raises(Unbounded):
        simplex_max(lp)


def test_degenerate_problem_terminates():
    # cycles without an anti-cycling rule
    lp = LinearProgram([Fraction(3, 4), -150, Fraction(1, 50), -6])
    lp.add([Fraction(1, 4), -60, Fraction(-1, 25), 9], LE, 0)
    lp.add([Fraction(1, 2), -90, Fraction(-1, 50), 3], LE, 0)
    lp.add([0, 0, 1, 0], LE, 1)
    assert simplex_max(lp).value == Fraction(1, 20)


def test_eta_on_ticket_database(ticket):
    db, cs = ticket
    r = eta_db(db, cs)
    assert r.measure == 1
    kb = transform(db, cs)
    r = eta_prop(kb)
    assert r.measure == Fraction(1, 2)
    assert sum(r.weights.values()) == 1
