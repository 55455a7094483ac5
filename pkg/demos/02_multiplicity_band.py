"""How the admissible band for q_3 grows with q_1.

P(z) = z^(q1+1) (z-1)^(q3+1) (z-c) + 1 has critical points 0 and 1 with
multiplicities q1 and q3 sharing the value 1.  Choosing c as a root of a
quadratic makes the remaining two critical points collide into a double one.
Then t = 2 and t' = 3, and the verdict depends only on where q3 sits between
(q1-1)/2 and (q1-2)/2 + sqrt(q1^2 - 4q1 - 4)/2.
"""

from fractions import Fraction

from uniqpoly.algebra.field import multiquadratic_field, render_scalar, sqrt_in_field
from uniqpoly.algebra.field import squarefree_part as rational_squarefree_part
from uniqpoly.algebra.parse import parse_poly
from uniqpoly.decide import Query, check_thm_3_7
from uniqpoly.structure import build_structure


def double_point_constant(q1: int, q3: int):
    """c such that the quadratic cofactor of P' is a perfect square."""
    a, b = q1 + 1, q3 + 1
    # discriminant of (a+b+1) z^2 - (a(1+c) + bc + 1) z + ac, as a quadratic in c
    A = Fraction((a + b) ** 2)
    B = Fraction(2 * (a + 1) * (a + b) - 4 * a * (a + b + 1))
    C = Fraction((a + 1) ** 2)
    disc = B * B - 4 * A * C
    e, s = rational_squarefree_part(disc)
    K = multiquadratic_field([e])
    return (sqrt_in_field(K, e) * s - B) / (2 * A)


CM = Query.of("complex", "meromorphic")
PM = Query.of("padic", "meromorphic")

print(f"{'q1':>3} {'q3':>3}  {'t':>2} {'tp':>3}  over C      non-archimedean")
for q1 in range(6, 11):
    for q3 in range((q1 + 1) // 2, q1):
        c = double_point_constant(q1, q3)
        P = parse_poly(f"z^{q1 + 1} (z - 1)^{q3 + 1} (z - ({render_scalar(c)})) + 1")
        r = build_structure(P)
        if (r.t, r.t_prime) != (2, 3):
            continue
        on_c = check_thm_3_7(r, CM).status
        on_k = check_thm_3_7(r, PM).status
        print(f"{q1:>3} {q3:>3}  {r.t:>2} {r.t_prime:>3}  "
              f"{on_c.value if on_c else '-':10s}  {on_k.value if on_k else '-'}")
