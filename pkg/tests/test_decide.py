import dataclasses
import itertools
import json
import random
from fractions import Fraction

import pytest
import sympy as sp

from oracles import random_poly_coeffs
from uniqpoly.algebra.parse import parse_poly
from uniqpoly.algebra.poly import Poly
from uniqpoly.corpus import EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, EX4_7_P1, EX4_7_P2
from uniqpoly.decide import (Condition, FieldKind, FunctionClass, Query, Status, check_quartic,
                             check_thm_3_5, check_thm_3_6, check_thm_3_7, check_thm_A,
                             check_thm_B, check_thresholds, check_tt8, decide, decide_all,
                             evaluate_relation, quartic_invariant, replay_certificate, urs_check)
from uniqpoly.identity import verify_pair
from uniqpoly.structure import build_structure

CM = Query.of("complex", "meromorphic")
CE = Query.of("complex", "entire")
PM = Query.of("padic", "meromorphic")
PE = Query.of("padic", "entire")


def analyzed(text):
    P = parse_poly(text)
    return P, build_structure(P)


def _antiderivative(factored: str) -> str:
    """Source text of the antiderivative (zero constant) of a product, via sympy."""
    z = sp.Symbol("z")
    expr = sp.integrate(sp.expand(sp.sympify(factored.replace(") (", ")*(").replace("z (", "z*("))), z)
    return str(sp.expand(expr)).replace("**", "^")


def verdict(text, q=CM):
    P, r = analyzed(text)
    return decide(P, r, q)


# ----------------------------------------------------------- trivial rules
def test_degree_one_and_single_critical_point():
    assert (verdict("3z - 1").status, verdict("3z - 1").theorem) == (Status.PROVEN, "Degree1")
    for q in (CM, CE, PM, PE):
        v = verdict("z^6 + 2", q)
        assert (v.status, v.theorem) == (Status.REFUTED, "Rem1_2")


def test_low_degree_complex():
    for q in (CM, CE):
        v = verdict("z^3 + z", q)
        assert (v.status, v.theorem) == (Status.REFUTED, "LiYang_deg23")


# ------------------------------------------------------ complete CIP rules
def test_thm_a_pair_products():
    P, r = analyzed("z^5/5 - 3z^4/4 + 2z^3/3 + 1")  # P' = z^2 (z-1)(z-2)
    assert r.is_cip and sorted(m.q for m in r.points) == [1, 1, 2]
    assert check_thm_A(r).status is Status.PROVEN
    assert (decide(P, r, CM).status, decide(P, r, CM).theorem) == (Status.PROVEN, "ThmA")

    _, r = analyzed("z^4/4 - 4z^3/3 + 3z^2/2 + 1")  # P' = z(z-1)(z-3)
    assert r.is_cip and check_thm_A(r).status is Status.REFUTED

    _, r = analyzed(_antiderivative("z (z - 1) (z - 2) (z + 3)") + " + 1")
    assert r.k == 4 and r.is_cip
    assert check_thm_A(r).status is Status.PROVEN


def test_thm_a_needs_squarefree_and_cip():
    _, r = analyzed(EX4_1)
    assert check_thm_A(r).status is None


def test_thm_b():
    _, r = analyzed("z^4/4 - 4z^3/3 + 3z^2/2 + 1")
    assert check_thm_B(r).status is Status.PROVEN
    P, r = analyzed("z^5/5 - 3z^4/4 + z^3 - z^2/2 + 1")  # P' = z (z-1)^3
    assert r.k == 2 and r.is_cip
    assert check_thm_B(r).status is Status.REFUTED
    assert decide(P, r, PM).status is Status.REFUTED
    assert decide(P, r, PE).status is Status.UNKNOWN
    _, r = analyzed("z^5/5 - z^4/2 + z^3/3 + 1")  # P' = z^2 (z-1)^2
    assert check_thm_B(r).status is Status.PROVEN


def test_cip_verdict_equals_complete_rule():
    rng = random.Random(50)
    seen = 0
    while seen < 15:
        P = Poly(random_poly_coeffs(rng, rng.randint(5, 8)))
        r = build_structure(P)
        if not (r.is_cip and r.p_squarefree):
            continue
        seen += 1
        assert decide(P, r, CM).status is check_thm_A(r).status
        assert decide(P, r, PM).status is check_thm_B(r).status


# ------------------------------------------------------------------ quartic
def test_quartic_rules():
    P, r = analyzed("z^4 + z")
    assert quartic_invariant(P) == 1
    rl = check_quartic(P, r, CE)
    assert (rl.status, rl.theorem) == (Status.PROVEN, "Thm_tt7")
    assert decide(P, r, CM).theorem == "ThmC" and decide(P, r, CM).status is Status.REFUTED

    P, r = analyzed("z^4 - 2z^2")
    assert quartic_invariant(P) == 0 and not r.is_cip
    rl = check_quartic(P, r, CE)
    assert rl.status is Status.REFUTED
    shared = [c for c in r.columns if len(c) > 1][0]
    assert shared.exact_value == -1 == 0 - Fraction((0 + 8) ** 2, 64)


def test_quartic_with_one_critical_point_falls_through():
    P, r = analyzed("z^4 + 1")
    assert check_quartic(P, r, CE).status is None
    assert decide(P, r, CE).theorem == "Rem1_2"


# --------------------------------------------------------------- thresholds
def test_thresholds_on_examples():
    P, r = analyzed(EX4_2)
    assert [rl.status for rl in check_thresholds(r, CM)][0] is Status.PROVEN
    assert decide(P, r, CM).theorem == "Thm3_4"
    assert decide(P, r, PM).theorem == "Thm3_3"
    _, r = analyzed(EX4_1)
    assert all(rl.status is None for rl in check_thresholds(r, CM))
    assert check_thresholds(r, PM)[0].status is Status.PROVEN


def test_threshold_table():
    _, r = analyzed(EX4_1)
    cases = [((1, 5), PM, "Thm3_1"), ((1, 4), PE, "Thm3_1"), ((1, 6), CM, "Thm3_2"),
             ((1, 5), CE, "Thm3_2"), ((3, 4), CM, "Thm3_4"), ((3, 3), PE, "Thm3_3")]
    for (t, tp), q, want in cases:
        fake = dataclasses.replace(r, t=t, t_prime=tp)
        proven = [rl.theorem for rl in check_thresholds(fake, q) if rl.status is Status.PROVEN]
        assert proven and proven[0] == want
        lower = dataclasses.replace(r, t=t, t_prime=tp - 1)
        assert want not in [rl.theorem for rl in check_thresholds(lower, q)
                            if rl.status is Status.PROVEN]
    gated = dataclasses.replace(r, t=5, t_prime=9, p_squarefree=False)
    assert all(rl.status is None for rl in check_thresholds(gated, CM))


# ------------------------------------------------------- three-point rules
def test_thm_3_5_examples():
    P, r = analyzed(EX4_3)
    assert check_thm_3_5(P, r).status is Status.PROVEN
    assert decide(P, r, CM).theorem == "Thm3_5"
    P, r = analyzed(EX4_4)
    assert check_thm_3_5(P, r).status is Status.PROVEN
    P, r = analyzed(EX4_1)  # every q equals 1
    assert check_thm_3_5(P, r).status is None


def test_thm_3_6_examples():
    P, r = analyzed(EX4_6)
    assert check_thm_3_6(P, r).status is Status.PROVEN
    assert decide(P, r, CM).theorem == "Thm3_6"
    P, r = analyzed(EX4_4)  # a column with two B_H2 points
    assert check_thm_3_6(P, r).status is None
    P, r = analyzed(EX4_2)  # t = 4
    assert check_thm_3_6(P, r).status is None


def _sym_first_example_conditions():
    """Conditions (a), (b), (c) and the conclusion test for EX4_1, by sympy."""
    z = sp.Symbol("z")
    P = sp.Rational(1, 6) * z ** 6 - sp.Rational(186, 53) * z ** 5 + sp.Rational(1565, 53) * z ** 4 \
        - sp.Rational(6630, 53) * z ** 3 + sp.Rational(28967, 106) * z ** 2 - sp.Rational(14460, 53) * z + 1
    d = [sp.Integer(1), sp.Rational(241, 53), sp.Integer(3)]
    Q = sp.cancel(sp.diff(P, z) / ((z - d[0]) * (z - d[1]) * (z - d[2])))
    assert sp.Poly(Q, z).degree() == 2
    dQ = sp.diff(Q, z)
    ok_a = all(dQ.subs(z, x) != 0 for x in d)
    ok_b = True
    for i, j, k in itertools.permutations(range(3)):
        lhs = dQ.subs(z, d[j]) / Q.subs(z, d[i])
        rhs = (2 * d[i] + 2 * d[k] - 4 * d[j]) / ((d[j] - d[k]) * (d[j] - d[i]))
        ok_b &= sp.simplify(lhs - rhs) != 0
    ok_c = True
    for k in range(3):
        i, j = [x for x in range(3) if x != k]
        # d_k is a double root of P - P(d_k); the other roots are what (c) ranges over
        rest = sp.quo(sp.Poly(P - P.subs(z, d[k]), z), sp.Poly((z - d[k]) ** 2, z))
        for xi in rest.nroots(n=50, maxsteps=200):
            assert abs(xi - d[k]) > 1e-30
            lhs = Q.subs(z, xi) / Q.subs(z, d[k])
            rhs = (d[k] - d[i]) ** 2 * (d[k] - d[j]) ** 2 / ((xi - d[i]) ** 2 * (xi - d[j]) ** 2)
            ok_c &= abs(sp.N(lhs - rhs, 50)) > 1e-30
    midpoint_free = all(d[k] != 2 * d[i] - d[j] for i, j, k in itertools.permutations(range(3)))
    return ok_a, ok_b, ok_c, midpoint_free


def test_thm_3_6_on_first_example_matches_oracle():
    ok_a, ok_b, ok_c, midpoint_free = _sym_first_example_conditions()
    P, r = analyzed(EX4_1)
    rl = check_thm_3_6(P, r)
    want = Status.PROVEN if (ok_a and ok_b and ok_c and midpoint_free) else None
    assert rl.status is want


def test_thm_3_7_examples():
    P, r = analyzed(EX4_7_P1)
    rl = check_thm_3_7(r, CM)
    assert rl.status is Status.PROVEN
    vals = [c.value for c in rl.conditions]
    assert "3 < 4" in vals and "4 < 5/2 + 1/2*sqrt(17)" in vals
    P, r = analyzed(EX4_7_P2)
    rl = check_thm_3_7(r, CM)
    assert rl.status is Status.PROVEN
    vals = [c.value for c in rl.conditions]
    assert "9/2 < 6" in vals and "6 < 4 + sqrt(14)" in vals


def _band_poly(q1: int, q3: int) -> str:
    """z^(q1+1) (z-1)^(q3+1) (z-c) + 1 with c chosen so the third critical point is double."""
    a, b = q1 + 1, q3 + 1
    c = sp.Symbol("c")
    disc = (a + (a + b) * c + 1) ** 2 - 4 * (a + b + 1) * a * c
    root = sp.solve(disc, c)[0]
    text = str(sp.nsimplify(root)).replace("I", "i").replace("**", "^")
    return f"z^{a} (z - 1)^{b} (z - ({text})) + 1"


@pytest.mark.parametrize("q3, ok", [(3, True), (4, False), (5, False)])
def test_band_at_q1_six(q3, ok):
    P, r = analyzed(_band_poly(6, q3))
    assert (r.k, r.t, r.t_prime) == (3, 2, 3)
    assert sorted(m.q for m in r.points) == sorted([6, q3, 2])
    rl = check_thm_3_7(r, CM)
    assert (rl.status is Status.PROVEN) == ok
    assert (rl.status is None) == (not ok)


# ---------------------------------------------------------------- quintic
def test_tt8_refutation_with_witness():
    P, r = analyzed("z^5 + 2z^4 + z^3 + 1")
    v = decide(P, r, CM)
    assert (v.status, v.theorem) == (Status.REFUTED, "Thm_tt8")
    assert verify_pair(v.witness.P, v.witness.f, v.witness.g)


def test_tt8_shape_gates():
    P, r = analyzed("z^5 + 2z^4 + z^3 + z^2 + 1")
    assert check_tt8(P, r).status is None
    P, r = analyzed("z^5 + z^3 + 1")  # a = 0 gives a CIP quintic
    assert r.is_cip and check_tt8(P, r).status is None
    assert decide(P, r, CM).theorem == "ThmA"


# -------------------------------------------------------------- properties
def test_monotonicity_and_replay():
    rng = random.Random(60)
    sources = [EX4_1, EX4_2, EX4_3, EX4_4, EX4_6, "z^4 + z", "z^4 - 2z^2", "z^5 + 2z^4 + z^3 + 1"]
    polys = [parse_poly(s) for s in sources]
    polys += [Poly(random_poly_coeffs(rng, rng.randint(2, 7))) for _ in range(15)]
    for P in polys:
        r = build_structure(P)
        vs = decide_all(P, r)
        for field in ("Complex", "Padic"):
            m, e = vs[(field, "Meromorphic")], vs[(field, "Entire")]
            if m.status is Status.PROVEN:
                assert e.status is Status.PROVEN
            if e.status is Status.REFUTED:
                assert m.status is Status.REFUTED
        for v in vs.values():
            doc = json.loads(json.dumps(v.to_json()))
            assert doc["schema"] == "verdict.v1"
            assert replay_certificate(doc)


def test_tampered_certificate_fails_replay():
    doc = verdict(EX4_7_P1).to_json()
    doc["certificate"][-1]["rhs"] = "3"
    assert not replay_certificate(doc)


def test_condition_round_trip_and_relations():
    c = Condition.make("q_3 < U", 4, "<", parse_poly("5/2 + sqrt(17)/2").coeff(0))
    assert c.ok is True and Condition.from_json(c.to_json()) == c
    assert evaluate_relation("1/3", "<", "1/2") is True
    assert evaluate_relation("i", "!=", "0") is True
    assert evaluate_relation("sqrt(2)", "==", "sqrt(8)/2") is True
    assert evaluate_relation("ball(0, 0, 1)", "!=", "0") is None


def test_unknown_lists_attempts():
    # columns {0}, {+w, -w}, {+w', -w'}: t = t' = 1, nothing applies
    v = verdict("z^6 + z^2 + 1", PE)
    assert v.status is Status.UNKNOWN and v.theorem is None
    names = [th for th, _, _ in v.attempts]
    assert names == ["Thm3_3", "Thm3_1", "Thm3_7"]
    assert all(c is not None for _, c, _ in v.attempts)
    v = verdict("z^6 + z^2 + 1", CM)
    assert v.status is Status.UNKNOWN
    assert [th for th, _, _ in v.attempts] == ["Thm3_4", "Thm3_2", "Thm3_7", "Thm3_5", "Thm3_6",
                                               "Thm_tt8"]


# --------------------------------------------------------------------- URS
def test_urs_examples():
    for src, m, card, concl in [(EX4_7_P1, [8, 5, 1], 14, "URSM"),
                                (EX4_7_P2, [11, 7, 1], 19, "URSM-IM")]:
        P, r = analyzed(src)
        u = urs_check(P, r, decide(P, r, CM))
        assert list(u.m_list) == m and u.p == 3 and u.condition_hit == "ii"
        assert (u.conclusion, u.cardinality) == (concl, card)
        assert u.to_json()["schema"] == "urs.v1"


def test_urs_edge_cases():
    P, r = analyzed("z^5 + 1")
    assert urs_check(P, r, decide(P, r, CM)).condition_hit is None
    P, r = analyzed("z^5 + z^2")
    assert not urs_check(P, r, decide(P, r, CM)).applicable
    P, r = analyzed(EX4_1)  # not proven over C: the conclusion stays contingent
    u = urs_check(P, r, decide(P, r, PM))
    assert u.conclusion.startswith("contingent") or u.condition_hit is None


def test_query_parsing():
    assert Query.of("padic", "entire") == Query(FieldKind.PADIC, FunctionClass.ENTIRE)
    with pytest.raises(ValueError):
        Query.of("real", "entire")
