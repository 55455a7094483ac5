import json
import random
from fractions import Fraction

import pytest

from oracles import random_poly_coeffs
from uniqpoly.algebra.parse import parse_poly, parse_scalar
from uniqpoly.algebra.poly import Poly
from uniqpoly.corpus import EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, EX4_7_P1, EX4_7_P2
from uniqpoly.structure import (build_structure, compute_h_sets, render_tables,
                                report_from_json)


def S(text):
    return build_structure(parse_poly(text))


def _col(r, *points):
    """The column whose members are exactly the given exact points."""
    want = sorted(str(parse_scalar(p)) for p in points)
    for c, d in zip(r.columns, r.derived):
        if sorted(str(m.point) for m in c.members) == want:
            return c, d
    raise AssertionError(f"no column {points}")


def test_first_example():
    r = S(EX4_1)
    assert (r.n, r.k, r.s, r.t, r.t_prime, r.is_cip) == (6, 5, 2, 3, 3, False)
    c, d = _col(r, "4", "5")
    assert c.qs == (1, 1) and d.A == frozenset() and d.B_H2 == ()
    assert c.exact_value == Fraction(-12041, 159)
    for p in ("1", "241/53", "3"):
        assert len(_col(r, p)[1].B_H2) == 1
    assert _col(r, "1")[0].exact_value == Fraction(-15497, 159)
    assert _col(r, "241/53")[0].exact_value == Fraction(-5030097474637, 66493083387)


def test_fourth_example():
    r = S(EX4_4)
    assert (r.k, r.t, r.t_prime, r.is_cip) == (4, 3, 4, False)
    c, d = _col(r, "i", "3")
    assert sorted(c.qs) == [1, 2]
    assert d.A_H1 == (2, 1) and set(d.A_H2) == {1, 2} and len(d.B_H2) == 2
    assert c.exact_value == parse_scalar("9/10 + 9i/5")


def test_p1_structure():
    r = S(EX4_7_P1)
    assert (r.k, r.t, r.t_prime) == (3, 2, 3)
    c, d = _col(r, "0", "1")
    assert sorted(c.qs) == [4, 7] and set(d.A_H2) == {7, 4}
    assert sorted(str(m.point) for m in d.B_H2) == ["0", "1"]
    c2, d2 = _col(r, "56/91 - 2 i sqrt(35)/91")
    assert c2.qs == (2,) and len(d2.B_H2) == 1


def test_third_example_layout():
    r = S(EX4_3)
    assert r.row_sizes == (1, 4)
    assert r.column_q_multisets() == [(1,), (1,), (1, 1), (2,)]
    text = render_tables(r)
    for token in ("3001/658", "5", "4", "1", "3"):
        assert token in text


def test_power_and_linear():
    r = S("z^3")
    assert (r.k, r.s, len(r.columns), r.columns[0].q_sum) == (1, 1, 1, 2)
    assert render_tables(r).count("\n") >= 1
    lin = S("3z + 1")
    assert (lin.k, lin.columns, lin.t, lin.t_prime) == (0, (), 0, 0)


def test_distinct_values_for_quartic():
    r = S("z^4 + z")
    assert r.k == 3 and r.is_cip and all(len(c) == 1 for c in r.columns)


def test_h_sets_with_dominance_failure():
    # column q-list {3, 1, 1}: A = {3}, 3 dominates the repeated 1s
    r = S("z^4 (z - 2)^2 (z + 2)^2")
    for c, d in zip(r.columns, r.derived):
        again = compute_h_sets(c)
        assert again == d
        assert set(d.A_H2) <= set(d.A_H1) <= set(d.A)
        if d.A_H1:
            assert max(d.A_H1) in d.A_H2
        assert len(d.B_H2) == len(d.A_H2)


@pytest.mark.parametrize("src", [EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, EX4_7_P1, EX4_7_P2])
def test_json_round_trip(src):
    r = S(src)
    doc = r.to_json()
    back = report_from_json(json.loads(json.dumps(doc)))
    assert back == r
    assert back.to_json() == doc
    assert doc["schema"] == "structure.v1"
    for key in ("degree", "derivative_index", "s", "columns", "t", "t_prime", "is_cip",
                "p_squarefree", "certification"):
        assert key in doc


def _invariants(r):
    assert sum(r.row_sizes) == r.k
    assert list(r.row_sizes) == sorted(r.row_sizes)
    for ci, c in enumerate(r.columns):
        rows = [li for li, row in enumerate(r.rows) for (cj, _) in row if cj == ci]
        assert rows == list(range(r.s - len(c), r.s))
    assert r.t_prime >= r.t >= 0
    assert r.t == sum(1 for d in r.derived if d.B_H2)
    assert r.t_prime == sum(len(d.B_H2) for d in r.derived)
    assert r.is_cip == all(len(c) == 1 for c in r.columns)
    assert r.is_cip == (r.t == r.t_prime == r.k)


def test_layout_invariants_random():
    rng = random.Random(40)
    for _ in range(30):
        r = build_structure(Poly(random_poly_coeffs(rng, rng.randint(2, 8))))
        _invariants(r)
    for src in (EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, EX4_7_P1, EX4_7_P2):
        _invariants(S(src))


def test_not_squarefree_is_flagged():
    r = S("(z - 1)^2 (z + 1)")
    assert not r.p_squarefree
    assert S(EX4_1).p_squarefree


def test_constant_rejected():
    with pytest.raises(ValueError):
        build_structure(parse_poly("4"))
