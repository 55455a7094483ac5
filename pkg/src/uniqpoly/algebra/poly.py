"""Dense univariate polynomials over an exact scalar field."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .ball import ComplexBall
from .field import QQ, ExactScalar, FieldMismatchError, NumberField

__all__ = [
    "Poly",
    "derivative",
    "poly_gcd",
    "squarefree_decomposition",
    "resultant",
    "critical_value_poly",
    "eval_poly",
    "squarefree_part",
    "coefficient_balls",
    "render_poly",
]


def _scalar(c, field: NumberField) -> ExactScalar:
    if isinstance(c, ExactScalar):
        return c.promote(field) if c.field is not field else c
    return field(Fraction(c))


class Poly:
    """Immutable dense polynomial; ``coeffs[k]`` multiplies ``var**k``.

    All coefficients share one :class:`NumberField`.  The zero polynomial has
    an empty coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs", "field", "var")

    def __init__(self, coeffs: Iterable = (), field: NumberField | None = None, var: str = "z"):
        coeffs = list(coeffs)
        if field is None:
            fields = {c.field for c in coeffs if isinstance(c, ExactScalar) and not c.field.is_rational}
            if len(fields) > 1:
                raise FieldMismatchError("coefficients from different number fields")
            field = fields.pop() if fields else QQ
        cs = [_scalar(c, field) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs = tuple(cs)
        self.field = field
        self.var = var

    # ---------------------------------------------------------------- basics
    @classmethod
    def constant(cls, c, field: NumberField | None = None, var: str = "z") -> "Poly":
        return cls([c], field, var)

    @classmethod
    def x(cls, field: NumberField = QQ, var: str = "z") -> "Poly":
        return cls([0, 1], field, var)

    @classmethod
    def from_roots(cls, roots, lead=1, var: str = "z") -> "Poly":
        out = cls([lead], None, var)
        for r in roots:
            out = out * cls([-_as_exact(r), 1], None, var)
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> ExactScalar:
        if not self.coeffs:
            return self.field(0)
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, k: int) -> ExactScalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.field(0)

    def with_var(self, var: str) -> "Poly":
        return Poly(self.coeffs, self.field, var)

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        inv = self.lc.inverse()
        return Poly([c * inv for c in self.coeffs], self.field, self.var)

    def in_field(self, field: NumberField) -> "Poly":
        return Poly([c.promote(field) for c in self.coeffs], field, self.var)

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        return render_poly(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, ExactScalar)):
            other = Poly([other], None, self.var)
        if not isinstance(other, Poly):
            return NotImplemented
        return len(self.coeffs) == len(other.coeffs) and all(
            a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self) -> int:
        return hash(tuple(hash(c) for c in self.coeffs))

    # ------------------------------------------------------------ arithmetic
    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.field is self.field:
                return self, other
            if other.field.is_rational:
                return self, other.in_field(self.field)
            if self.field.is_rational:
                return self.in_field(other.field), other
            if other.field == self.field:
                return self, Poly(other.coeffs, self.field, self.var)
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if isinstance(other, (int, Fraction)):
            return self, Poly([other], self.field, self.var)
        if isinstance(other, ExactScalar):
            p = Poly([other], None, self.var)
            return self._coerce(p)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly([a.coeff(k) + b.coeff(k) for k in range(n)], a.field, a.var)

    __radd__ = __add__

    def __neg__(self):
        return Poly([-c for c in self.coeffs], self.field, self.var)

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        n = max(len(a.coeffs), len(b.coeffs))
        return Poly([a.coeff(k) - b.coeff(k) for k in range(n)], a.field, a.var)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if a.is_zero() or b.is_zero():
            return Poly([], a.field, a.var)
        zero = a.field(0)
        out = [zero] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x.is_zero():
                continue
            for j, y in enumerate(b.coeffs):
                out[i + j] = out[i + j] + x * y
        return Poly(out, a.field, a.var)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly([1], self.field, self.var)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(a.coeffs)
        db = b.degree
        inv = b.lc.inverse()
        quot = [a.field(0)] * max(0, len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c.is_zero():
                continue
            c = c * inv
            quot[k - db] = c
            for j, y in enumerate(b.coeffs):
                rem[k - db + j] = rem[k - db + j] - c * y
        return Poly(quot, a.field, a.var), Poly(rem[:db], a.field, a.var)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other) -> "Poly":
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError("polynomial division is not exact")
        return q

    def scale(self, c) -> "Poly":
        return self * Poly([c], None, self.var)

    def __call__(self, x):
        return eval_poly(self, x)

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(z))."""
        out = Poly([], self.field, inner.var)
        for c in reversed(self.coeffs):
            out = out * inner + Poly([c], self.field, inner.var)
        return out

    def derivative(self) -> "Poly":
        return derivative(self)


def _as_exact(x):
    return x if isinstance(x, ExactScalar) else QQ(Fraction(x))


def render_poly(p: Poly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c.is_zero():
            continue
        mono = "" if k == 0 else (p.var if k == 1 else f"{p.var}^{k}")
        cs = str(c)
        if not c.is_rational():
            cs = f"({cs})"
            term = cs if not mono else f"{cs}*{mono}"
            sign = "+"
        else:
            v = c.coords[0]
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if mono:
                term = mono if mag == 1 else f"{mag}*{mono}"
            else:
                term = str(mag)
        parts.append((sign, term))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, term in parts[1:]:
        out += f" {sign} {term}"
    return out


# ---------------------------------------------------------------- operations
def derivative(p: Poly) -> Poly:
    """Formal derivative."""
    return Poly([c * k for k, c in enumerate(p.coeffs)][1:], p.field, p.var)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor (Euclid over the coefficient field)."""
    a, b = a._coerce(b)
    if a.is_zero() and b.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, a % b
        if not b.is_zero():
            b = b.monic()
    return a.monic()


def squarefree_decomposition(p: Poly) -> list[tuple[Poly, int]]:
    """Yun's algorithm: pairwise coprime monic squarefree factors.

    Returns ``[(factor, multiplicity), ...]`` ordered by multiplicity; the
    input equals ``p.lc * prod(factor**multiplicity)``.
    """
    if p.is_zero():
        raise ValueError("squarefree decomposition of the zero polynomial")
    if p.degree == 0:
        return []
    dp = derivative(p)
    a = poly_gcd(p, dp)
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - derivative(b)
    out = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        b = b.exact_div(a)
        c = d.exact_div(a)
        d = c - derivative(b)
        if a.degree > 0:
            out.append((a.monic(), i))
        i += 1
    return out


def squarefree_part(p: Poly) -> Poly:
    out = Poly([1], p.field, p.var)
    for f, _ in squarefree_decomposition(p):
        out = out * f
    return out


def resultant(a: Poly, b: Poly) -> ExactScalar:
    """Resultant Res(a, b) in the main variable.

    Convention: the determinant of the Sylvester matrix whose first
    ``deg b`` rows carry the coefficients of ``a``, i.e.
    ``Res(a, b) = lc(a)**deg(b) * prod(b(alpha) for roots alpha of a)``.
    """
    a, b = a._coerce(b)
    if a.is_zero() or b.is_zero():
        raise ValueError("resultant with the zero polynomial")
    field = a.field
    acc = field(1)
    while True:
        m, n = a.degree, b.degree
        if n == 0:
            return acc * b.lc ** m
        if m == 0:
            return acc * a.lc ** n
        r = a % b
        if r.is_zero():
            return field(0)
        sign = -1 if (m * n) % 2 else 1
        acc = acc * (b.lc ** (m - r.degree)) * sign
        a, b = b, r


def critical_value_poly(p: Poly) -> Poly:
    """D(y) = Res_x(P(x) - y, P'(x)) as a polynomial in y.

    D(y) = c * prod_i (P(d_i) - y)**q_i over the critical points d_i of P
    with multiplicities q_i in P'.  Computed by exact interpolation at the
    nodes y = 0, 1, ..., deg P - 1.
    """
    n = p.degree
    if n < 2:
        raise ValueError("critical value polynomial needs degree >= 2")
    dp = derivative(p)
    field = p.field
    nodes = list(range(n))
    values = [resultant(p - Poly([y], field), dp) for y in nodes]
    return _interpolate(nodes, values, field).with_var("y")


def _interpolate(xs, ys, field) -> Poly:
    """Newton divided differences over the field, returned in monomial form."""
    k = len(xs)
    coef = list(ys)
    for j in range(1, k):
        for i in range(k - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    out = Poly([coef[-1]], field)
    for i in range(k - 2, -1, -1):
        out = out * Poly([-xs[i], 1], field) + Poly([coef[i]], field)
    return out


def eval_poly(p: Poly, x):
    """Evaluate at an exact point (exact result) or at a ball (enclosure)."""
    if isinstance(x, ComplexBall):
        prec = x.precision_bits
        acc = ComplexBall.exact(0, 0, prec)
        for c in reversed(p.coeffs):
            acc = acc * x + (c.coords[0] if c.is_rational() else c.embed(prec))
        return acc
    if not isinstance(x, ExactScalar):
        x = QQ(Fraction(x))
    acc = p.field(0) if x.field.is_rational else x.field(0)
    if not p.coeffs:
        return acc
    for c in reversed(p.coeffs):
        acc = acc * x + c
    return acc


def coefficient_balls(p: Poly, prec: int) -> list[ComplexBall]:
    return [ComplexBall(c.coords[0], 0, 0, prec) if c.is_rational() else c.embed(prec)
            for c in p.coeffs]
