"""Independent reference computations used by the tests.

Nothing here calls the package's polynomial algebra or root isolation.  Exact
coefficients are converted to sympy once; squarefree factorization is done by
sympy and roots and critical values by mpmath at 200 digits.
"""

from __future__ import annotations

import random
from fractions import Fraction

import mpmath
import sympy as sp

from uniqpoly.algebra.field import to_mq

Z = sp.Symbol("z")
DPS = 200
THRESHOLD = mpmath.mpf(10) ** -100


def sym_scalar(x) -> sp.Expr:
    """ExactScalar -> sympy expression via its multiquadratic coordinates."""
    if x.is_rational():
        f = x.as_fraction()
        return sp.Rational(f.numerator, f.denominator)
    rads = x.field.mq.radicands
    out = sp.Integer(0)
    for mask, c in to_mq(x).items():
        term = sp.Rational(c.numerator, c.denominator)
        for j, b in enumerate(rads):
            if mask >> j & 1:
                term *= sp.sqrt(b)
        out += term
    return out


def sym_poly(P) -> sp.Poly:
    expr = sum(sym_scalar(c) * Z ** k for k, c in enumerate(P.coeffs))
    return sp.Poly(expr, Z, extension=True)


def _mp_coeffs(poly: sp.Poly):
    return [mpmath.mpc(complex(0)) + mpmath.mpmathify(sp.N(c, DPS + 20)) for c in poly.all_coeffs()]


def oracle_roots(p) -> list:
    """[(root, multiplicity)] of p at 200 digits; multiplicities from sympy's sqf_list."""
    with mpmath.workdps(DPS):
        _, factors = sp.sqf_list(p if isinstance(p, sp.Poly) else sym_poly(p))
        out = []
        for f, q in factors:
            f = sp.Poly(f, Z, extension=True)
            if f.degree() < 1:
                continue
            coeffs = _mp_coeffs(f)
            if f.degree() == 1:
                roots = [-coeffs[1] / coeffs[0]]
            else:
                roots = mpmath.polyroots(coeffs, maxsteps=500, extraprec=2 * DPS)
            out.extend((mpmath.mpc(r), q) for r in roots)
        return out


def oracle_critical_points(P):
    """[(root, q)] for P' at 200 digits."""
    return oracle_roots(sym_poly(P).diff(Z))


def oracle_clusters(P):
    """Critical points grouped by 200-digit equality (|difference| < 1e-100)."""
    pts = oracle_critical_points(P)
    with mpmath.workdps(DPS):
        pc = _mp_coeffs(sym_poly(P))
        vals = [mpmath.polyval(pc, r) for r, _ in pts]
        parent = list(range(len(pts)))

        def find(i):
            while parent[i] != i:
                i = parent[i]
            return i

        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                if abs(vals[i] - vals[j]) < THRESHOLD * max(1, abs(vals[i])):
                    parent[find(i)] = find(j)
        groups: dict = {}
        for i in range(len(pts)):
            groups.setdefault(find(i), []).append(i)
        return [[(pts[i][0], pts[i][1], vals[i]) for i in g] for g in groups.values()]


def mp_in_ball(z, ball) -> bool:
    """Containment of an mpmath number in a ComplexBall, at 200 digits."""
    with mpmath.workdps(DPS):
        dr = z.real - mpmath.mpf(ball.mid_re.numerator) / ball.mid_re.denominator
        di = z.imag - mpmath.mpf(ball.mid_im.numerator) / ball.mid_im.denominator
        rad = mpmath.mpf(ball.radius.numerator) / ball.radius.denominator
        # tiny slack for the oracle's own 200-digit error
        return mpmath.sqrt(dr * dr + di * di) <= rad + mpmath.mpf(10) ** -150


def sylvester_resultant(a: list, b: list) -> Fraction:
    """Determinant of the Sylvester matrix (a's rows first), by sympy."""
    m, n = len(a) - 1, len(b) - 1
    size = m + n
    rows = []
    ah = list(reversed(a))
    bh = list(reversed(b))
    for i in range(n):
        rows.append([0] * i + ah + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + bh + [0] * (size - n - 1 - i))
    M = sp.Matrix([[sp.Rational(Fraction(x).numerator, Fraction(x).denominator) for x in r]
                   for r in rows])
    d = M.det()
    return Fraction(int(sp.fraction(d)[0]), int(sp.fraction(d)[1]))


# --------------------------------------------------------------- generators
def random_rational(rng: random.Random, num: int = 9, den: int = 4) -> Fraction:
    return Fraction(rng.randint(-num, num), rng.randint(1, den))


def random_poly_coeffs(rng: random.Random, degree: int) -> list:
    coeffs = [random_rational(rng) for _ in range(degree)]
    lead = Fraction(rng.choice([1, 2, 3, -1, -2]), rng.randint(1, 3))
    return coeffs + [lead]


def engineered_collision_coeffs(rng: random.Random, degree: int) -> list:
    """Even polynomial R(z^2) + c: critical points +-d share values."""
    half = degree // 2
    inner = random_poly_coeffs(rng, half)
    coeffs = [Fraction(0)] * (2 * half + 1)
    for k, c in enumerate(inner):
        coeffs[2 * k] = c
    coeffs[0] = random_rational(rng)
    return coeffs
