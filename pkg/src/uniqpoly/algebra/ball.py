"""Complex ball arithmetic with exact dyadic midpoints.

A ball is a closed disk ``{z : |z - mid| <= radius}``.  Midpoints and radii
are :class:`fractions.Fraction` values, so every bound computed here is an
exact rational statement.  After each operation the midpoint is rounded to
``precision_bits`` significant bits and the rounding error is added to the
radius; radii are rounded upward to a short mantissa.  No floating point is
involved in any containment claim.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt

__all__ = ["ComplexBall", "sqrt_lower", "sqrt_upper"]

_RAD_BITS = 32
_ZERO = Fraction(0)


def _round_dyadic(x: Fraction, shift: int) -> Fraction:
    """Round ``x`` to the nearest multiple of ``2**-shift`` (ties toward floor)."""
    if shift >= 0:
        num = x.numerator << shift
        q, r = divmod(num, x.denominator)
        if 2 * r > x.denominator:
            q += 1
        return Fraction(q, 1 << shift)
    scale = 1 << -shift
    q, r = divmod(x.numerator, x.denominator * scale)
    if 2 * r > x.denominator * scale:
        q += 1
    return Fraction(q * scale)


def _log2_floor(x: Fraction) -> int:
    """floor(log2(|x|)) for nonzero x, exactly."""
    x = abs(x)
    e = x.numerator.bit_length() - x.denominator.bit_length()
    # 2**e <= x < 2**(e+1) after at most one correction
    if e >= 0:
        if x.numerator < x.denominator << e:
            e -= 1
    elif x.numerator << -e < x.denominator:
        e -= 1
    return e


def _round_up(r: Fraction) -> Fraction:
    """Round a nonnegative value up to a ``_RAD_BITS``-bit mantissa."""
    if r == 0:
        return _ZERO
    shift = _RAD_BITS - _log2_floor(r)
    if shift >= 0:
        num = r.numerator << shift
        q = -(-num // r.denominator)
        return Fraction(q, 1 << shift)
    scale = 1 << -shift
    q = -(-r.numerator // (r.denominator * scale))
    return Fraction(q * scale)


def sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound of sqrt(x), x >= 0, relative accuracy ~2**-bits."""
    if x <= 0:
        return _ZERO
    k = max(0, bits - _log2_floor(x) // 2)
    num = x.numerator << (2 * k)
    s = isqrt(num // x.denominator)
    while s * s * x.denominator < num:
        s += 1
    return Fraction(s, 1 << k)


def sqrt_lower(x: Fraction, bits: int = 64) -> Fraction:
    """Rational lower bound of sqrt(x), x >= 0."""
    if x <= 0:
        return _ZERO
    k = max(0, bits - _log2_floor(x) // 2)
    num = x.numerator << (2 * k)
    s = isqrt(num // x.denominator)
    return Fraction(s, 1 << k)


class ComplexBall:
    """Disk in the complex plane, certified to contain an exact value."""

    __slots__ = ("mid_re", "mid_im", "radius", "precision_bits")

    def __init__(self, re=0, im=0, radius=0, precision_bits: int = 128, *, exact: bool = False):
        re = Fraction(re)
        im = Fraction(im)
        radius = Fraction(radius)
        if radius < 0:
            raise ValueError("negative radius")
        if precision_bits < 2:
            raise ValueError("precision must be at least 2 bits")
        if not exact:
            re, im, err = self._round_mid(re, im, precision_bits)
            radius = _round_up(radius + err)
        self.mid_re = re
        self.mid_im = im
        self.radius = radius
        self.precision_bits = precision_bits

    @staticmethod
    def _round_mid(re: Fraction, im: Fraction, prec: int):
        big = max(abs(re), abs(im))
        if big == 0:
            return re, im, _ZERO
        shift = prec - 1 - _log2_floor(big)
        if shift >= 0 and re.denominator <= (1 << shift) and im.denominator <= (1 << shift) \
                and (1 << shift) % re.denominator == 0 and (1 << shift) % im.denominator == 0:
            return re, im, _ZERO
        r2 = _round_dyadic(re, shift)
        i2 = _round_dyadic(im, shift)
        dr = abs(re - r2)
        di = abs(im - i2)
        # |error| <= dr + di; cheaper than a square root and still exact
        return r2, i2, dr + di

    # ------------------------------------------------------------------ basics
    @classmethod
    def exact(cls, re=0, im=0, precision_bits: int = 128) -> "ComplexBall":
        """Ball of radius zero at a given rational point (no rounding)."""
        return cls(re, im, 0, precision_bits, exact=True)

    @classmethod
    def from_mpc(cls, z, radius=0, precision_bits: int = 128) -> "ComplexBall":
        """Ball centred at an mpmath number, converted exactly."""
        return cls(_mpf_to_fraction(z.real), _mpf_to_fraction(z.imag), radius,
                   precision_bits, exact=True)

    def __repr__(self) -> str:
        return (f"ComplexBall({float(self.mid_re):.6g}{float(self.mid_im):+.6g}j "
                f"+/- {float(self.radius):.3g})")

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexBall):
            return NotImplemented
        return (self.mid_re, self.mid_im, self.radius, self.precision_bits) == \
            (other.mid_re, other.mid_im, other.radius, other.precision_bits)

    def __hash__(self) -> int:
        return hash((self.mid_re, self.mid_im, self.radius))

    @property
    def mid(self) -> complex:
        return complex(float(self.mid_re), float(self.mid_im))

    def with_precision(self, prec: int) -> "ComplexBall":
        return ComplexBall(self.mid_re, self.mid_im, self.radius, prec)

    def abs_upper(self) -> Fraction:
        return sqrt_upper(self.mid_re ** 2 + self.mid_im ** 2) + self.radius

    def abs_lower(self) -> Fraction:
        return max(_ZERO, sqrt_lower(self.mid_re ** 2 + self.mid_im ** 2) - self.radius)

    def mid_abs2(self) -> Fraction:
        return self.mid_re ** 2 + self.mid_im ** 2

    def re_interval(self) -> tuple[Fraction, Fraction]:
        return self.mid_re - self.radius, self.mid_re + self.radius

    def im_interval(self) -> tuple[Fraction, Fraction]:
        return self.mid_im - self.radius, self.mid_im + self.radius

    # ----------------------------------------------------------- set relations
    def _dist2(self, other: "ComplexBall") -> Fraction:
        return (self.mid_re - other.mid_re) ** 2 + (self.mid_im - other.mid_im) ** 2

    def overlaps(self, other: "ComplexBall") -> bool:
        return self._dist2(other) <= (self.radius + other.radius) ** 2

    def disjoint(self, other: "ComplexBall") -> bool:
        return not self.overlaps(other)

    def contains(self, other: "ComplexBall") -> bool:
        """True when ``other`` is a subset of this ball."""
        slack = self.radius - other.radius
        return slack >= 0 and self._dist2(other) <= slack ** 2

    def contains_interior(self, other: "ComplexBall") -> bool:
        slack = self.radius - other.radius
        return slack > 0 and self._dist2(other) < slack ** 2

    def contains_point(self, re, im=0) -> bool:
        return (self.mid_re - re) ** 2 + (self.mid_im - im) ** 2 <= self.radius ** 2

    def contains_zero(self) -> bool:
        return self.mid_abs2() <= self.radius ** 2

    # ------------------------------------------------------------- arithmetic
    def _coerce(self, other) -> "ComplexBall":
        if isinstance(other, ComplexBall):
            return other
        if isinstance(other, (int, Fraction)):
            return ComplexBall(other, 0, 0, self.precision_bits, exact=True)
        if isinstance(other, complex):
            return ComplexBall(Fraction(other.real), Fraction(other.imag), 0,
                               self.precision_bits, exact=True)
        return NotImplemented

    def _prec(self, other: "ComplexBall") -> int:
        return min(self.precision_bits, other.precision_bits)

    def __neg__(self) -> "ComplexBall":
        return ComplexBall(-self.mid_re, -self.mid_im, self.radius, self.precision_bits, exact=True)

    def __add__(self, other) -> "ComplexBall":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ComplexBall(self.mid_re + other.mid_re, self.mid_im + other.mid_im,
                           self.radius + other.radius, self._prec(other))

    __radd__ = __add__

    def __sub__(self, other) -> "ComplexBall":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return ComplexBall(self.mid_re - other.mid_re, self.mid_im - other.mid_im,
                           self.radius + other.radius, self._prec(other))

    def __rsub__(self, other) -> "ComplexBall":
        return (-self).__add__(other)

    def __mul__(self, other) -> "ComplexBall":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.mid_re, self.mid_im, other.mid_re, other.mid_im
        re = a * c - b * d
        im = a * d + b * c
        rad = _ZERO
        if self.radius or other.radius:
            rad = (self.abs_upper() - self.radius) * other.radius \
                + (other.abs_upper() - other.radius) * self.radius \
                + self.radius * other.radius
        return ComplexBall(re, im, rad, self._prec(other))

    __rmul__ = __mul__

    def inverse(self) -> "ComplexBall":
        m2 = self.mid_abs2()
        if m2 <= self.radius ** 2:
            raise ZeroDivisionError("ball contains zero")
        re = self.mid_re / m2
        im = -self.mid_im / m2
        rad = _ZERO
        if self.radius:
            lo = sqrt_lower(m2)
            if lo <= self.radius:
                raise ZeroDivisionError("ball too close to zero")
            # |1/z - 1/m| <= r / (|m| (|m| - r))
            rad = self.radius / (lo * (lo - self.radius))
        return ComplexBall(re, im, rad, self.precision_bits)

    def __truediv__(self, other) -> "ComplexBall":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ComplexBall":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "ComplexBall":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        out = ComplexBall.exact(1, 0, self.precision_bits)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def conjugate(self) -> "ComplexBall":
        return ComplexBall(self.mid_re, -self.mid_im, self.radius, self.precision_bits, exact=True)

    def union(self, other: "ComplexBall") -> "ComplexBall":
        """Smallest-ish ball containing both operands (centred at self)."""
        d = sqrt_upper(self._dist2(other))
        return ComplexBall(self.mid_re, self.mid_im,
                           max(self.radius, d + other.radius), self._prec(other))

    def to_mpc(self, ctx):
        return ctx.mpc(ctx.mpf(self.mid_re.numerator) / self.mid_re.denominator,
                       ctx.mpf(self.mid_im.numerator) / self.mid_im.denominator)

    # ------------------------------------------------------------ serialization
    def to_json(self) -> dict:
        return {"re": str(self.mid_re), "im": str(self.mid_im),
                "rad": str(self.radius), "prec": self.precision_bits}

    @classmethod
    def from_json(cls, doc: dict) -> "ComplexBall":
        return cls(Fraction(doc["re"]), Fraction(doc["im"]), Fraction(doc["rad"]),
                   int(doc["prec"]), exact=True)


def _mpf_to_fraction(x) -> Fraction:
    """Exact value of an mpmath real (sign, mantissa, exponent)."""
    raw = getattr(x, "_mpf_", None)
    if raw is None:
        return Fraction(x)
    sign, man, exp, _ = raw
    if man == 0:
        if exp != 0:
            raise ValueError("cannot convert an infinite or NaN value")
        return _ZERO
    val = Fraction(man << exp) if exp >= 0 else Fraction(man, 1 << -exp)
    return -val if sign else val
