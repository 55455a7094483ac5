"""A quintic that fails uniqueness, with an explicit pair of functions.

For P(z) = z^5 + a z^4 + (a^2/4) z^3 + c the engine returns a refutation
whose witness is a pair of rational functions f, g in u = exp(z) with
P(f) = P(g) but f != g.  We print the pair, confirm the identity
symbolically, and spot-check it at a few rational values of u.
"""

from fractions import Fraction

from uniqpoly.algebra.parse import parse_poly
from uniqpoly.algebra.poly import eval_poly
from uniqpoly.decide import Query, decide
from uniqpoly.identity import verify_pair
from uniqpoly.structure import build_structure

P = parse_poly("z^5 + 2z^4 + z^3 + 1")
r = build_structure(P)
v = decide(P, r, Query.of("complex", "meromorphic"))
print(f"verdict: {v.status.value} ({v.theorem})")

w = v.witness
print(f"f(u) = {w.f}")
print(f"g(u) = {w.g}")

check = verify_pair(P, w.f, w.g)
print(f"P(f) = P(g) symbolically: {check.holds}; f != g: {check.distinct}")
print(f"numerator degree before cancellation: {check.numerator_degree}")

for u in (Fraction(1, 2), Fraction(3), Fraction(-7, 5)):
    lhs = eval_poly(P, w.f(u))
    rhs = eval_poly(P, w.g(u))
    print(f"  u = {u}: P(f(u)) = {lhs}, equal: {lhs == rhs}")
