"""Certified isolation of the complex roots of an exact polynomial.

Each squarefree factor (from Yun's decomposition) is solved approximately by
Aberth iteration from a deterministic perturbed circle, then every
approximation is certified by a Krawczyk inclusion test: the returned ball
contains exactly one root of the factor.  Roots lying in the coefficient field
are recognised and confirmed by exact substitution, in which case the
enclosure carries the exact value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field as dc_field, replace
from fractions import Fraction
from math import lcm

import mpmath

from .algebra.ball import ComplexBall, _mpf_to_fraction
from .algebra.field import ExactScalar, NumberField, krawczyk, mq_basis_element, to_mq
from .algebra.poly import Poly, coefficient_balls, eval_poly, squarefree_decomposition

__all__ = [
    "DEFAULT_PRECISION",
    "DEFAULT_MAX_PRECISION",
    "Ordering",
    "PrecisionExhausted",
    "RootEnclosure",
    "IsolationResult",
    "isolate_roots",
    "refine",
    "certified_compare",
    "exact_re_is_zero",
    "exact_im_is_zero",
    "recognize_root",
]

DEFAULT_PRECISION = 128
DEFAULT_MAX_PRECISION = 8192
DEFAULT_TARGET = Fraction(1, 1 << 64)


class PrecisionExhausted(ArithmeticError):
    """The precision ceiling was reached before a certified answer."""


class Ordering(enum.Enum):
    LESS = "LessLex"
    GREATER = "GreaterLex"
    EQUAL = "Equal"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class RootEnclosure:
    """A ball holding exactly one distinct root, with its multiplicity."""

    ball: ComplexBall
    multiplicity: int
    exact_value: ExactScalar | None = None
    factor: Poly | None = dc_field(default=None, compare=False, repr=False)

    @property
    def is_exact(self) -> bool:
        return self.exact_value is not None


@dataclass(frozen=True)
class IsolationResult:
    enclosures: tuple
    source_degree: int
    precision_used: int

    def __iter__(self):
        return iter(self.enclosures)

    def __len__(self):
        return len(self.enclosures)


# ------------------------------------------------------------------ numerics
def _context(prec: int) -> mpmath.ctx_mp.MPContext:
    ctx = mpmath.MPContext()
    ctx.prec = prec
    return ctx


def _approx_coeffs(g: Poly, ctx, prec: int):
    out = []
    for c in g.coeffs:
        if c.is_rational():
            q = c.coords[0]
            out.append(ctx.mpc(ctx.mpf(q.numerator) / q.denominator))
        else:
            out.append(c.embed(prec).to_mpc(ctx))
    return out


def _aberth(coeffs, ctx, max_iter: int = 2000):
    """Simultaneous approximation of all roots (coefficients low degree first)."""
    n = len(coeffs) - 1
    lead = coeffs[-1]
    a = [c / lead for c in coeffs]
    centre = -a[n - 1] / n
    # Fujiwara-type bound on |root - centre| from the shifted polynomial
    shifted = _taylor_shift(a, centre)
    bound = ctx.mpf(0)
    for k in range(n):
        mag = abs(shifted[k])
        if mag:
            bound = max(bound, mag ** (ctx.mpf(1) / (n - k)))
    radius = bound if bound > 0 else ctx.mpf(1)
    zs = [centre + radius * ctx.expjpi(ctx.mpf(2 * j) / n + ctx.mpf(1) / (2 * n) + ctx.mpf(3) / 10)
          for j in range(n)]
    # stop well above the rounding floor; Newton polishing finishes the job
    tol = ctx.mpf(2) ** (-(ctx.prec * 3) // 4)
    for _ in range(max_iter):
        biggest = ctx.mpf(0)
        for j in range(n):
            z = zs[j]
            p = ctx.mpc(1)
            dp = ctx.mpc(0)
            for c in reversed(a[:-1]):
                dp = dp * z + p
                p = p * z + c
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else ctx.mpc(1)
            s = ctx.mpc(0)
            for k in range(n):
                if k != j:
                    diff = z - zs[k]
                    if diff != 0:
                        s += 1 / diff
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            zs[j] = z - w
            rel = abs(w) / max(ctx.mpf(1), abs(zs[j]))
            if rel > biggest:
                biggest = rel
        if biggest <= tol:
            break
    return zs


def _taylor_shift(a, c):
    """Coefficients of p(x + c) given those of p (low degree first)."""
    b = list(a)
    n = len(b) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            b[j] += c * b[j + 1]
    return b


def _newton_polish(coeffs, z, ctx, steps: int = 6):
    for _ in range(steps):
        p = ctx.mpc(0)
        dp = ctx.mpc(0)
        for c in reversed(coeffs):
            dp = dp * z + p
            p = p * z + c
        if dp == 0 or p == 0:
            break
        z = z - p / dp
    return z


# ----------------------------------------------------------- exact guesses
def _integral_scale(g: Poly) -> Fraction:
    dens = [c.denominator for coef in g.coeffs for c in coef.coords]
    return Fraction(lcm(*dens))


def _basis_values(field: NumberField, prec: int):
    """Masks and embedded values of the multiquadratic basis, split Re/Im."""
    ctx = _context(prec)
    real, imag = [], []
    for mask in range(1 << len(field.mq.radicands)):
        v = mq_basis_element(field, mask).embed(prec).to_mpc(ctx)
        if abs(v.imag) > abs(v.real):
            imag.append((mask, v.imag))
        else:
            real.append((mask, v.real))
    return real, imag


def _guess_part(value, basis, ctx, max_den: int):
    """Rational coordinates x_S with value ~ sum x_S * basis_S."""
    if len(basis) == 1:
        mask, bv = basis[0]
        x = _mpf_to_fraction(value / bv).limit_denominator(max_den)
        return {mask: x}
    if value == 0:
        return {mask: Fraction(0) for mask, _ in basis}
    vec = [value] + [bv for _, bv in basis]
    try:
        rel = ctx.pslq(vec, tol=ctx.mpf(2) ** (-(ctx.prec * 3) // 4), maxcoeff=max_den,
                       maxsteps=20000)
    except ValueError:
        return None
    if not rel or rel[0] == 0:
        return None
    return {mask: Fraction(-r, rel[0]) for (mask, _), r in zip(basis, rel[1:])}


def _guess_exact(g: Poly, z, prec: int):
    """Candidate exact root of ``g`` in its coefficient field, or None."""
    field = g.field
    ctx = _context(prec)
    if field.is_rational:
        scale = _integral_scale(g)
        lead = g.lc.coords[0] * scale
        num = ctx.nint(z.real * lead)
        cand = Fraction(int(num)) / lead
        return field(cand)
    if field.mq is None:
        return None
    # c * alpha is integral over Z when c is the leading coefficient of an
    # integral multiple of g; guess its coordinates with bounded denominators
    scale = _integral_scale(g)
    lead = g.lc * scale
    beta = z * lead.to_mpc(ctx)
    real, imag = _basis_values(field, prec)
    max_den = 1 << min(64, max(16, prec // 8))
    coords = {}
    for part, basis in ((beta.real, real), (beta.imag, imag)):
        got = _guess_part(part, basis, ctx, max_den)
        if got is None:
            return None
        coords.update(got)
    val = field(0)
    for mask, x in coords.items():
        if x:
            val = val + mq_basis_element(field, mask) * x
    return val / lead


def recognize_root(g: Poly, ball: ComplexBall, prec: int) -> ExactScalar | None:
    """Exact root of ``g`` inside ``ball`` lying in g's coefficient field, if found.

    The guess is heuristic; the answer is confirmed by exact substitution and
    by containment in ``ball``, so a returned value is always correct.
    """
    ctx = _context(prec + 24)
    z = ball.to_mpc(ctx)
    return _certify_exact(g, _guess_exact(g, z, prec), ball, prec)


def _certify_exact(g: Poly, cand: ExactScalar | None, ball: ComplexBall, prec: int):
    if cand is None:
        return None
    if not eval_poly(g, cand).is_zero():
        return None
    fine = _exact_ball(cand, prec + 32)
    if not ball.contains(fine):
        return None
    return cand


def _exact_ball(x: ExactScalar, prec: int) -> ComplexBall:
    if x.is_rational():
        return ComplexBall.exact(x.coords[0], 0, prec)
    return x.embed(prec)


# --------------------------------------------------------------- isolation
def _isolate_factor(g: Poly, mult: int, prec: int):
    """Certified enclosures for the roots of a squarefree factor, or None."""
    if g.degree == 1:
        r = -g.coeffs[0] / g.coeffs[1]
        return [RootEnclosure(_exact_ball(r, prec), mult, r, g)]
    ctx = _context(prec + 24)
    coeffs = _approx_coeffs(g, ctx, prec + 24)
    approx = _aberth(coeffs, ctx)
    cballs = coefficient_balls(g, prec + 32)
    out = []
    for z in approx:
        z = _newton_polish(coeffs, z, ctx)
        ball = krawczyk(cballs, ComplexBall.from_mpc(z, 0, prec + 32), prec)
        if ball is None:
            return None
        exact = _certify_exact(g, _guess_exact(g, z, prec), ball, prec)
        if exact is not None:
            ball = _exact_ball(exact, prec)
        out.append(RootEnclosure(ball, mult, exact, g))
    if not _pairwise_disjoint([e.ball for e in out]):
        return None
    return out


def _pairwise_disjoint(balls) -> bool:
    for i in range(len(balls)):
        for j in range(i + 1, len(balls)):
            if balls[i].overlaps(balls[j]):
                return False
    return True


def isolate_roots(P: Poly, target_radius=DEFAULT_TARGET, *, precision: int = DEFAULT_PRECISION,
                  max_precision: int = DEFAULT_MAX_PRECISION) -> IsolationResult:
    """Disjoint certified enclosures of every distinct root of ``P``.

    Multiplicities come from the squarefree decomposition.  Raises
    :class:`PrecisionExhausted` when ``max_precision`` bits do not suffice.
    """
    if P.degree < 1:
        raise ValueError("cannot isolate the roots of a constant polynomial")
    target_radius = Fraction(target_radius)
    parts = squarefree_decomposition(P)
    prec = precision
    while prec <= max_precision:
        encl = []
        for g, m in parts:
            got = _isolate_factor(g, m, prec)
            if got is None:
                break
            encl.extend(got)
        else:
            balls = [e.ball for e in encl]
            if _pairwise_disjoint(balls) and all(b.radius <= target_radius for b in balls):
                encl.sort(key=_sort_key)
                total = sum(e.multiplicity for e in encl)
                if total != P.degree:
                    raise AssertionError("multiplicities do not add up to the degree")
                return IsolationResult(tuple(encl), P.degree, prec)
        prec *= 2
    raise PrecisionExhausted(f"could not isolate roots of degree-{P.degree} polynomial "
                             f"within {max_precision} bits")


def _sort_key(e: RootEnclosure):
    return (e.ball.mid_re, e.ball.mid_im)


def refine(e: RootEnclosure, P: Poly | None, new_radius, *,
           max_precision: int = DEFAULT_MAX_PRECISION) -> RootEnclosure:
    """Shrink an enclosure below ``new_radius``; the result lies inside the old ball."""
    new_radius = Fraction(new_radius)
    if e.exact_value is not None:
        prec = e.ball.precision_bits
        while True:
            ball = _exact_ball(e.exact_value, prec)
            if ball.radius <= new_radius or prec > max_precision:
                break
            prec *= 2
        if ball.radius > new_radius:
            raise PrecisionExhausted("exact root could not be embedded finely enough")
        return replace(e, ball=ball)
    g = e.factor
    if g is None:
        if P is None:
            raise ValueError("refinement needs the source polynomial")
        g = _factor_containing(P, e)
    prec = max(e.ball.precision_bits * 2, 64)
    while prec <= max_precision:
        ctx = _context(prec + 24)
        coeffs = _approx_coeffs(g, ctx, prec + 24)
        z = _newton_polish(coeffs, e.ball.to_mpc(ctx), ctx, steps=12)
        cballs = coefficient_balls(g, prec + 32)
        ball = krawczyk(cballs, ComplexBall.from_mpc(z, 0, prec + 32), prec)
        if ball is not None and ball.radius <= new_radius and e.ball.contains(ball):
            return replace(e, ball=ball)
        prec *= 2
    raise PrecisionExhausted("refinement exceeded the precision ceiling")


def _factor_containing(P: Poly, e: RootEnclosure) -> Poly:
    for g, m in squarefree_decomposition(P):
        if m == e.multiplicity:
            return g
    raise ValueError("enclosure does not belong to this polynomial")


# -------------------------------------------------------------- comparison
def exact_re_is_zero(x: ExactScalar) -> bool | None:
    """Exact test Re(x) = 0; None when the field has no multiquadratic form."""
    return _part_is_zero(x, real=True)


def exact_im_is_zero(x: ExactScalar) -> bool | None:
    return _part_is_zero(x, real=False)


def _part_is_zero(x: ExactScalar, real: bool):
    if x.is_rational():
        return x.coords[0] == 0 if real else True
    field = x.field
    if field.mq is None:
        return None
    for mask, c in to_mq(x).items():
        neg = sum(1 for j, b in enumerate(field.mq.radicands) if mask >> j & 1 and b < 0)
        is_real_basis = neg % 2 == 0
        if c and is_real_basis == real:
            return False
    return True


def _sign_interval(lo: Fraction, hi: Fraction) -> int | None:
    if lo > 0:
        return 1
    if hi < 0:
        return -1
    return None


def certified_compare(a, b, *, poly_a: Poly | None = None, poly_b: Poly | None = None,
                      max_precision: int = DEFAULT_MAX_PRECISION) -> Ordering:
    """Lexicographic (Re, Im) comparison with certified answers only.

    ``a`` and ``b`` may be :class:`RootEnclosure`, :class:`ComplexBall` or
    :class:`ExactScalar`.  Enclosures are refined (up to ``max_precision``)
    while undecided; Equal is returned only for equal exact values.
    """
    xa = _exact_of(a)
    xb = _exact_of(b)
    if xa is not None and xb is not None:
        try:
            d = xa - xb
        except ValueError:
            d = None
        if d is not None:
            if d.is_zero():
                return Ordering.EQUAL
            return _compare_exact_difference(d, max_precision)
    ea, eb = a, b
    while True:
        ba, bb = _ball_of(ea), _ball_of(eb)
        s = _sign_interval(ba.mid_re - bb.mid_re - ba.radius - bb.radius,
                           ba.mid_re - bb.mid_re + ba.radius + bb.radius)
        if s is not None:
            return Ordering.GREATER if s > 0 else Ordering.LESS
        if not (isinstance(ea, RootEnclosure) or isinstance(eb, RootEnclosure)):
            return Ordering.UNKNOWN
        radius = max(ba.radius, bb.radius) / 16
        if radius == 0:
            return Ordering.UNKNOWN
        try:
            if isinstance(ea, RootEnclosure) and ea.ball.radius:
                ea = refine(ea, poly_a, radius, max_precision=max_precision)
            if isinstance(eb, RootEnclosure) and eb.ball.radius:
                eb = refine(eb, poly_b, radius, max_precision=max_precision)
        except PrecisionExhausted:
            return Ordering.UNKNOWN


def _compare_exact_difference(d: ExactScalar, max_precision: int) -> Ordering:
    """Order of d against 0: Re first, then Im, using exact zero tests."""
    for real in (True, False):
        zero = _part_is_zero(d, real)
        if zero:
            continue
        prec = 64
        while prec <= max_precision:
            ball = _exact_ball(d, prec)
            lo, hi = ball.re_interval() if real else ball.im_interval()
            s = _sign_interval(lo, hi)
            if s is not None:
                return Ordering.GREATER if s > 0 else Ordering.LESS
            prec *= 2
        return Ordering.UNKNOWN
    return Ordering.EQUAL


def _exact_of(x):
    if isinstance(x, ExactScalar):
        return x
    if isinstance(x, RootEnclosure):
        return x.exact_value
    return None


def _ball_of(x) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    if isinstance(x, RootEnclosure):
        return x.ball
    return _exact_ball(x, 128)
