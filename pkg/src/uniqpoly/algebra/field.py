"""Exact scalars: rationals and elements of a single number field Q(theta).

A :class:`NumberField` is given by the monic minimal polynomial of a
primitive element ``theta`` and a certified complex embedding of ``theta``.
Elements are coordinate vectors in the power basis ``1, theta, ...``.  Zero
testing is coordinate-wise, so equality is a decision procedure.

Fields generated by ``i`` and square roots of rationals are built by
:func:`multiquadratic_field`, which also records the multiquadratic basis so
elements can be printed back in the input grammar.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

import mpmath

from .ball import ComplexBall

__all__ = [
    "FieldMismatchError",
    "NumberField",
    "ExactScalar",
    "QQ",
    "multiquadratic_field",
    "squarefree_part",
    "as_scalar",
    "sqrt_in_field",
    "to_mq",
    "render_scalar",
    "subfield_for",
    "move_to_subfield",
    "common_field",
    "krawczyk",
]


class FieldMismatchError(ValueError):
    """Operands live in different number fields."""


# --------------------------------------------------------------------------
# dense polynomials over Q as lists (low degree first); only used internally
# --------------------------------------------------------------------------
def _qtrim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _qmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _qdivmod(a, b):
    a = _qtrim(a)
    b = _qtrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    lead = b[-1]
    while len(a) >= len(b):
        c = a[-1] / lead
        k = len(a) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            a[k + i] -= c * y
        a.pop()
        a = _qtrim(a)
    return q, a


def _qinverse_mod(a, m):
    """Inverse of a modulo m in Q[x]/(m) via extended Euclid."""
    r0, r1 = _qtrim(m), _qtrim(a)
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _qdivmod(r0, r1)
        r0, r1 = r1, r
        qs = _qmul(q, s1)
        n = max(len(s0), len(qs))
        s_new = [(s0[i] if i < len(s0) else 0) - (qs[i] if i < len(qs) else 0) for i in range(n)]
        s0, s1 = s1, _qtrim(s_new)
    if len(r0) != 1:
        raise ZeroDivisionError("element is not invertible (minimal polynomial reducible?)")
    c = r0[0]
    return [x / c for x in s0]


# --------------------------------------------------------------------------
class NumberField:
    """Q(theta) for theta a root of ``minpoly`` selected by ``approx``.

    ``minpoly`` lists coefficients low degree first and must be monic.  The
    embedding of theta is refined on demand by Krawczyk iteration, which
    certifies a unique root inside the returned ball.
    """

    def __init__(self, minpoly, approx=0, name: str | None = None, *, check_irreducible: bool = True):
        mp = tuple(Fraction(c) for c in minpoly)
        if len(mp) < 2 or mp[-1] != 1:
            raise ValueError("minimal polynomial must be monic of degree >= 1")
        if check_irreducible and len(mp) > 2:
            import sympy

            x = sympy.Symbol("x")
            if not sympy.Poly(list(reversed(mp)), x, domain="QQ").is_irreducible:
                raise ValueError("minimal polynomial is reducible over Q")
        self.minpoly = mp
        self.degree = len(mp) - 1
        z = complex(approx)
        self.approx = (Fraction(z.real), Fraction(z.imag))
        self.name = name or ("QQ" if self.degree == 1 else f"Q(theta), deg {self.degree}")
        self.mq = None  # multiquadratic metadata, set by multiquadratic_field
        self._balls: dict[int, ComplexBall] = {}
        self._key = (self.minpoly, self._canonical_root_tag())

    def _canonical_root_tag(self):
        if self.degree == 1:
            return (-self.minpoly[0], Fraction(0))
        # certified ball at a fixed precision; its rounded centre identifies the root
        b = self.theta_ball(96)
        return (round(b.mid_re * 2 ** 48), round(b.mid_im * 2 ** 48))

    def __eq__(self, other):
        return isinstance(other, NumberField) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"NumberField({self.name})"

    @property
    def is_rational(self) -> bool:
        return self.degree == 1

    # ------------------------------------------------------------ embedding
    def theta_ball(self, prec: int) -> ComplexBall:
        """Certified ball around the embedded primitive element."""
        if prec in self._balls:
            return self._balls[prec]
        if self.degree == 1:
            ball = ComplexBall.exact(-self.minpoly[0], 0, prec)
        else:
            ball = _krawczyk_refine(self.minpoly, self.approx, prec)
        self._balls[prec] = ball
        return ball

    # ---------------------------------------------------------- constructors
    def __call__(self, coords) -> "ExactScalar":
        if isinstance(coords, ExactScalar):
            return coords.promote(self)
        if isinstance(coords, (int, Fraction)):
            return ExactScalar(self, (Fraction(coords),) + (Fraction(0),) * (self.degree - 1))
        return ExactScalar(self, tuple(Fraction(c) for c in coords))

    def zero(self) -> "ExactScalar":
        return self(0)

    def one(self) -> "ExactScalar":
        return self(1)

    def theta(self) -> "ExactScalar":
        if self.degree == 1:
            return self(-self.minpoly[0])
        return self([0, 1] + [0] * (self.degree - 2))


def _krawczyk_refine(minpoly, approx, prec: int) -> ComplexBall:
    """Newton-polish ``approx`` and certify a unique root of ``minpoly``."""
    ctx = mpmath.MPContext()
    ctx.prec = prec + 20
    coeffs = [ctx.mpf(c.numerator) / c.denominator for c in minpoly]
    x = ctx.mpc(ctx.mpf(approx[0].numerator) / approx[0].denominator,
                ctx.mpf(approx[1].numerator) / approx[1].denominator)

    def f_df(x):
        f = ctx.mpc(0)
        df = ctx.mpc(0)
        for c in reversed(coeffs):
            df = df * x + f
            f = f * x + c
        return f, df

    tol = ctx.mpf(2) ** (-prec - 10)
    for _ in range(200):
        f, df = f_df(x)
        if df == 0:
            x += ctx.mpf(2) ** (-prec // 2)
            continue
        step = f / df
        x -= step
        if abs(step) <= tol * max(1, abs(x)):
            break
    cball = [ComplexBall.exact(c, 0, prec + 20) for c in minpoly]
    center = ComplexBall.from_mpc(x, 0, prec + 20)
    ball = krawczyk(cball, center, prec)
    if ball is None:
        raise ArithmeticError("could not certify the field embedding; bad approximation?")
    return ball


def krawczyk(coeff_balls, center: ComplexBall, prec: int, radius=None):
    """Certify a unique root of the polynomial near ``center``.

    ``coeff_balls`` encloses the coefficients (low degree first).  Returns a
    ball containing exactly one root, or ``None`` if the test fails.  With
    Y ~ 1/f'(x), if K(B) = x - Y f(x) + (1 - Y f'(B))(B - x) lies inside the
    interior of B, f has a unique zero in B, and that zero lies in K(B).
    """
    prec2 = prec + 16
    x = ComplexBall.exact(center.mid_re, center.mid_im, prec2)
    fx, dfx = _horner_pair(coeff_balls, x)
    if dfx.contains_zero():
        return None
    y_mid = ComplexBall.exact(*_approx_inverse(dfx), prec2)
    corr = y_mid * fx
    est = corr.abs_upper()
    tiny = Fraction(1, 1 << prec) * max(Fraction(1), x.abs_upper())
    r = radius if radius is not None else max(2 * est, tiny)
    for _ in range(6):
        box = ComplexBall(x.mid_re, x.mid_im, r, prec2, exact=True)
        _, dfb = _horner_pair(coeff_balls, box)
        one_minus = ComplexBall.exact(1, 0, prec2) - y_mid * dfb
        k = x - corr + one_minus * ComplexBall(0, 0, r, prec2, exact=True)
        if box.contains_interior(k):
            return ComplexBall(k.mid_re, k.mid_im, k.radius, prec)
        r *= 8
    return None


def _approx_inverse(b: ComplexBall):
    m2 = b.mid_abs2()
    # dyadic approximation of 1/mid is enough: Krawczyk is valid for any Y
    inv_re = b.mid_re / m2
    inv_im = -b.mid_im / m2
    rb = ComplexBall(inv_re, inv_im, 0, b.precision_bits)
    return rb.mid_re, rb.mid_im


def _horner_pair(coeffs, x: ComplexBall):
    f = ComplexBall.exact(0, 0, x.precision_bits)
    df = ComplexBall.exact(0, 0, x.precision_bits)
    for c in reversed(coeffs):
        df = df * x + f
        f = f * x + c
    return f, df


# --------------------------------------------------------------------------
class ExactScalar:
    """Element of a :class:`NumberField`, immutable."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords):
        coords = tuple(coords)
        if len(coords) != field.degree:
            raise ValueError("coordinate vector length must equal the field degree")
        self.field = field
        self.coords = coords

    # ------------------------------------------------------------ helpers
    def promote(self, field: NumberField) -> "ExactScalar":
        if self.field is field or self.field == field:
            return self if self.field is field else ExactScalar(field, self.coords)
        if self.field.degree == 1:
            return field(self.coords[0])
        if field.degree == 1 and self.is_rational():
            return field(self.coords[0])
        raise FieldMismatchError(f"cannot move an element of {self.field} into {field}")

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("not a rational number")
        return self.coords[0]

    def _unify(self, other):
        if isinstance(other, ExactScalar):
            if other.field is self.field:
                return self, other
            if other.field.degree == 1:
                return self, other.promote(self.field)
            if self.field.degree == 1:
                return self.promote(other.field), other
            if other.field == self.field:
                return self, ExactScalar(self.field, other.coords)
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if isinstance(other, (int, Fraction)):
            return self, self.field(other)
        return None, None

    def __repr__(self):
        return f"ExactScalar({self})"

    def __str__(self):
        return render_scalar(self)

    def __hash__(self):
        if self.is_rational():
            return hash(self.coords[0])
        return hash((self.field, self.coords))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coords[0] == other
        if not isinstance(other, ExactScalar):
            return NotImplemented
        try:
            a, b = self._unify(other)
        except FieldMismatchError:
            return False
        return a.coords == b.coords

    # --------------------------------------------------------- arithmetic
    def __add__(self, other):
        a, b = self._unify(other)
        if a is None:
            return NotImplemented
        return ExactScalar(a.field, tuple(x + y for x, y in zip(a.coords, b.coords)))

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar(self.field, tuple(-x for x in self.coords))

    def __sub__(self, other):
        a, b = self._unify(other)
        if a is None:
            return NotImplemented
        return ExactScalar(a.field, tuple(x - y for x, y in zip(a.coords, b.coords)))

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        a, b = self._unify(other)
        if a is None:
            return NotImplemented
        field = a.field
        if field.degree == 1:
            return ExactScalar(field, (a.coords[0] * b.coords[0],))
        if b.is_rational():
            c = b.coords[0]
            return ExactScalar(field, tuple(x * c for x in a.coords))
        if a.is_rational():
            c = a.coords[0]
            return ExactScalar(field, tuple(x * c for x in b.coords))
        _, r = _qdivmod(_qmul(a.coords, b.coords), field.minpoly)
        r = list(r) + [Fraction(0)] * (field.degree - len(r))
        return ExactScalar(field, r)

    __rmul__ = __mul__

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("division by zero in number field")
        if self.is_rational():
            return self.field(1 / self.coords[0])
        inv = _qinverse_mod(self.coords, self.field.minpoly)
        inv = list(inv) + [Fraction(0)] * (self.field.degree - len(inv))
        return ExactScalar(self.field, inv)

    def __truediv__(self, other):
        a, b = self._unify(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._unify(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        out = self.field.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ---------------------------------------------------------- embedding
    def embed(self, prec: int = 128) -> ComplexBall:
        """Certified ball containing the complex embedding of this element."""
        if self.is_rational():
            c = self.coords[0]
            return ComplexBall(c, 0, 0, prec)
        th = self.field.theta_ball(prec + 16)
        acc = ComplexBall.exact(0, 0, prec + 16)
        for c in reversed(self.coords):
            acc = acc * th + c
        return ComplexBall(acc.mid_re, acc.mid_im, acc.radius, prec)

    def to_mpc(self, ctx):
        return self.embed(ctx.prec + 10).to_mpc(ctx)


QQ = NumberField([0, 1], 0, "QQ", check_irreducible=False)


def as_scalar(x, field: NumberField = QQ) -> ExactScalar:
    if isinstance(x, ExactScalar):
        return x.promote(field) if x.field != field and x.field.degree == 1 else x
    return field(Fraction(x))


# --------------------------------------------------------------------------
# multiquadratic fields Q(sqrt(e_1), ..., sqrt(e_m))
# --------------------------------------------------------------------------
def _small_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    if n < 2:
        return out
    if n < 10 ** 12:
        p = 2
        while p * p <= n:
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
            p += 1 if p == 2 else 2
        if n > 1:
            out[n] = out.get(n, 0) + 1
        return out
    import sympy

    return dict(sympy.factorint(n))


def squarefree_part(r) -> tuple[int, Fraction]:
    """Write a nonzero rational r as s**2 * e with e a squarefree integer.

    Returns ``(e, s)`` with s > 0 rational.  The sign of r is kept in e.
    """
    r = Fraction(r)
    if r == 0:
        raise ValueError("zero has no squarefree part")
    sign = -1 if r < 0 else 1
    n = abs(r.numerator) * r.denominator  # sqrt(a/b) = sqrt(a*b)/b
    e, s = 1, 1
    for p, k in _small_factor(n).items():
        s *= p ** (k // 2)
        if k % 2:
            e *= p
    return sign * e, Fraction(s, r.denominator)


def _prime_vector(e: int) -> frozenset:
    ps = set(_small_factor(abs(e)))
    if e < 0:
        ps.add(-1)
    return frozenset(ps)


class _MQInfo:
    """Bookkeeping for a multiquadratic field.

    ``radicands`` are independent squarefree integers b_1..b_m; the basis
    element for bitmask S is beta_S = prod_{j in S} sqrt(b_j) under the
    embedding sqrt(b) > 0 for b > 0 and sqrt(b) = i*sqrt(|b|) for b < 0.
    """

    def __init__(self, radicands, theta_to_basis_rows, basis_to_theta):
        self.radicands = tuple(radicands)
        self.theta_coords = theta_to_basis_rows  # coords of beta_S in the theta basis
        self.basis_coords = basis_to_theta      # rows: theta^k in the beta basis

    def square(self, mask: int) -> int:
        out = 1
        for j, b in enumerate(self.radicands):
            if mask >> j & 1:
                out *= b
        return out


def _mq_mul(x: dict, y: dict, radicands) -> dict:
    out: dict[int, Fraction] = {}
    for s, a in x.items():
        for t, b in y.items():
            c = a * b
            common = s & t
            for j, e in enumerate(radicands):
                if common >> j & 1:
                    c *= e
            k = s ^ t
            out[k] = out.get(k, 0) + c
    return {k: v for k, v in out.items() if v}


def _solve_rational(matrix, rhs):
    """Solve matrix * x = rhs exactly (square, nonsingular)."""
    n = len(matrix)
    a = [list(row) + [rhs[i]] for i, row in enumerate(matrix)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [v / p for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def independent_radicands(values) -> list[int]:
    """Greedy GF(2)-independent subset of squarefree integers (order kept)."""
    pivots: dict[int, frozenset] = {}
    chosen = []
    for e in values:
        v = set(_prime_vector(e))
        while v:
            p = min(v, key=_key_prime)
            if p not in pivots:
                break
            v ^= pivots[p]
        if v:
            pivots[min(v, key=_key_prime)] = frozenset(v)
            chosen.append(e)
    return chosen


def _key_prime(p):
    return -1 if p == -1 else p


def multiquadratic_field(radicands) -> NumberField:
    """Q(sqrt(b) for b in radicands) with primitive element theta = sum sqrt(b_j).

    ``radicands`` are squarefree integers (``-1`` stands for ``i``); dependent
    ones are dropped.  Returns :data:`QQ` when nothing remains.
    """
    rads = independent_radicands(sorted(set(int(e) for e in radicands), key=lambda e: (abs(e), e)))
    if not rads:
        return QQ
    m = len(rads)
    n = 1 << m
    # minimal polynomial: prod over signs (x - sum eps_j sqrt(b_j))
    poly = [Fraction(0), Fraction(1)]  # x
    for b in rads:
        # g(x - s) g(x + s) = A(x)^2 - b B(x)^2, with s^2 = b
        a_part = [Fraction(0)] * len(poly)
        b_part = [Fraction(0)] * len(poly)
        for k, c in enumerate(poly):
            # (x - s)^k = sum_j C(k,j) x^(k-j) (-s)^j
            for j in range(k + 1):
                coef = c * _binom(k, j) * (-1) ** j
                if j % 2 == 0:
                    a_part[k - j] += coef * Fraction(b) ** (j // 2)
                else:
                    b_part[k - j] += coef * Fraction(b) ** (j // 2)
        sq = _qmul(a_part, a_part)
        bsq = [b * c for c in _qmul(b_part, b_part)]
        size = max(len(sq), len(bsq))
        poly = _qtrim([(sq[i] if i < len(sq) else 0) - (bsq[i] if i < len(bsq) else 0)
                       for i in range(size)])
    # theta^k in the multiquadratic basis
    theta = {1 << j: Fraction(1) for j in range(m)}
    powers = [{0: Fraction(1)}]
    for _ in range(1, n):
        powers.append(_mq_mul(powers[-1], theta, rads))
    # matrix with columns theta^k: rows indexed by mask
    mat = [[powers[k].get(mask, Fraction(0)) for k in range(n)] for mask in range(n)]
    theta_coords = {}
    for mask in range(n):
        rhs = [Fraction(1) if r == mask else Fraction(0) for r in range(n)]
        theta_coords[mask] = tuple(_solve_rational(mat, rhs))
    approx = 0j
    for b in rads:
        approx += complex(0, abs(b) ** 0.5) if b < 0 else abs(b) ** 0.5
    name = "Q(" + ", ".join("i" if b == -1 else f"sqrt({b})" for b in rads) + ")"
    field = NumberField(poly, approx, name, check_irreducible=False)
    field.mq = _MQInfo(rads, theta_coords, [powers[k] for k in range(n)])
    return field


def _binom(n, k):
    from math import comb

    return comb(n, k)


def mq_basis_element(field: NumberField, mask: int) -> ExactScalar:
    return ExactScalar(field, field.mq.theta_coords[mask])


def sqrt_in_field(field: NumberField, r) -> ExactScalar:
    """sqrt(r) for rational r (principal branch: i*sqrt(|r|) when r < 0)."""
    r = Fraction(r)
    if r == 0:
        return field(0)
    e, s = squarefree_part(r)
    if e == 1:
        return field(s)
    if field.mq is None:
        raise FieldMismatchError(f"sqrt({r}) is not available in {field}")
    rads = field.mq.radicands
    target = _prime_vector(e)
    # find mask S with prod b_j = e * w^2
    for mask in range(1 << len(rads)):
        prod = field.mq.square(mask)
        if _prime_vector(prod) == target:
            w2 = Fraction(prod, e)
            w = Fraction(isqrt(w2.numerator), isqrt(w2.denominator))
            neg = sum(1 for j, b in enumerate(rads) if mask >> j & 1 and b < 0)
            sign = (-1) ** ((neg - (1 if e < 0 else 0)) // 2)
            return mq_basis_element(field, mask) * (sign * s / w)
    raise FieldMismatchError(f"sqrt({r}) is not in {field}")


def to_mq(x: ExactScalar) -> dict[int, Fraction]:
    """Coordinates of x in the multiquadratic basis of its field."""
    field = x.field
    if field.degree == 1:
        return {0: x.coords[0]} if x.coords[0] else {}
    if field.mq is None:
        raise ValueError("field has no multiquadratic description")
    out: dict[int, Fraction] = {}
    for k, c in enumerate(x.coords):
        if c:
            for mask, v in field.mq.basis_coords[k].items():
                out[mask] = out.get(mask, 0) + c * v
    return {k: v for k, v in out.items() if v}


def render_scalar(x: ExactScalar) -> str:
    """Canonical text of an exact scalar in the input grammar."""
    field = x.field
    if x.is_rational():
        return str(x.coords[0])
    if field.mq is None:
        terms = [f"{c}*theta^{k}" if k else str(c) for k, c in enumerate(x.coords) if c]
        return " + ".join(terms)
    parts = []
    for mask, c in sorted(to_mq(x).items()):
        if mask == 0:
            parts.append((c, ""))
            continue
        e = field.mq.square(mask)
        neg = sum(1 for j, b in enumerate(field.mq.radicands) if mask >> j & 1 and b < 0)
        # beta_S = i^neg * sqrt(|e|)
        unit = neg % 4
        coef = c * (1 if unit in (0, 1) else -1)
        sym = ("i" if unit % 2 else "")
        mag = abs(e)
        if mag != 1:
            sym = (sym + "*" if sym else "") + f"sqrt({mag})"
        parts.append((coef, sym))
    out = ""
    for coef, sym in parts:
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        if sym == "":
            body = str(mag)
        elif mag == 1:
            body = sym
        else:
            body = f"{mag}*{sym}"
        if not out:
            out = ("-" if sign == "-" else "") + body
        else:
            out += f" {sign} {body}"
    return out


def subfield_for(values) -> NumberField:
    """Smallest multiquadratic subfield containing the given scalars."""
    values = list(values)
    fields = {v.field for v in values if not v.is_rational()}
    if not fields:
        return QQ
    if len(fields) > 1:
        raise FieldMismatchError("values from several fields")
    field = fields.pop()
    if field.mq is None:
        return field
    masks = set()
    for v in values:
        masks.update(k for k in to_mq(v) if k)
    # GF(2) span basis of the support masks
    top: dict[int, int] = {}
    for mk in sorted(masks):
        v = mk
        while v and v.bit_length() in top:
            v ^= top[v.bit_length()]
        if v:
            top[v.bit_length()] = v
    basis = [top[k] for k in sorted(top)]
    if len(basis) == len(field.mq.radicands):
        return field
    new_rads = [squarefree_part(field.mq.square(b))[0] for b in basis]
    return multiquadratic_field(new_rads)


def move_to_subfield(x: ExactScalar, sub: NumberField) -> ExactScalar:
    """Re-express x in the coordinates of ``sub``, any multiquadratic field containing it."""
    if x.field is sub or x.field == sub:
        return x if x.field is sub else ExactScalar(sub, x.coords)
    if x.is_rational():
        return sub(x.coords[0])
    src = x.field
    out = sub(0)
    for mask, c in to_mq(x).items():
        e = src.mq.square(mask)
        neg = sum(1 for j, b in enumerate(src.mq.radicands) if mask >> j & 1 and b < 0)
        # beta_S = i^neg sqrt(|e|); note sqrt_in_field(e) = i^[e<0] sqrt(|e|)
        val = sqrt_in_field(sub, e)
        shift = neg - (1 if e < 0 else 0)
        out = out + val * (c * (-1) ** (shift // 2))
    return out


def common_field(values) -> NumberField:
    fields = {v.field for v in values if isinstance(v, ExactScalar) and not v.field.is_rational}
    if len(fields) > 1:
        raise FieldMismatchError("values from several fields")
    return fields.pop() if fields else QQ

