"""Quartics: the invariant I = a3^3/8 - a2 a3/2 + a1 against critical injectivity.

For monic quartics with at least two critical points, I vanishes exactly when
two critical values coincide.  We sample a few quartics on and off the
surface I = 0 and compare I with the structure report.
"""

import random
from fractions import Fraction

from uniqpoly.algebra.poly import Poly
from uniqpoly.decide import Query, decide, quartic_invariant
from uniqpoly.structure import build_structure

rng = random.Random(4)
entire = Query.of("complex", "entire")


def rand():
    return Fraction(rng.randint(-6, 6), rng.randint(1, 3))


for trial in range(8):
    a3, a2, a0 = rand(), rand(), rand()
    a1 = a2 * a3 / 2 - a3 ** 3 / 8 if trial % 2 else rand()
    P = Poly([a0, a1, a2, a3, 1])
    r = build_structure(P)
    if r.k < 2:
        continue
    I = quartic_invariant(P)
    v = decide(P, r, entire)
    print(f"{str(P):45s} I = {str(I):>10s}  CIP = {r.is_cip!s:5s}  "
          f"entire over C: {v.status.value}")
