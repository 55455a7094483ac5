"""Exact parser for the polynomial input grammar.

Accepted tokens: integer literals, ``i``, ``sqrt(<positive rational>)``, one
variable name (``z`` by default), ``+ - * /``, ``^`` or ``**`` with integer
exponents, parentheses.  Juxtaposition means multiplication (``2z``,
``3(z+1)``, ``i sqrt(95)``).  Decimal points are rejected.

All radicals are collected first and the expression is evaluated in the
multiquadratic field they generate; the coefficients are then moved to the
smallest subfield that actually contains them.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .field import QQ, NumberField, multiquadratic_field, move_to_subfield, sqrt_in_field, \
    squarefree_part, subfield_for
from .poly import Poly
from .ratfunc import RationalFunction

__all__ = ["ParseError", "parse_poly", "parse_rational_function", "parse_scalar"]


class ParseError(ValueError):
    """Input text does not follow the grammar."""


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_]+)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        if m.group(1):
            if m.end() < len(text) and text[m.end()] == ".":
                raise ParseError("floating-point literals are not allowed")
            out.append(("num", int(m.group(1))))
        elif m.group(2):
            out.append(("name", m.group(2)))
        else:
            out.append(("op", "^" if m.group(3) == "**" else m.group(3)))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


# AST nodes are tuples: ("num", n) ("i",) ("sqrt", node) ("var",)
# ("add"|"sub"|"mul"|"div", a, b) ("neg", a) ("pow", a, k)
class _Parser:
    def __init__(self, tokens, var: str):
        self.toks = tokens
        self.pos = 0
        self.var = var

    def peek(self):
        return self.toks[self.pos] if self.pos < len(self.toks) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def expect(self, op):
        kind, val = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}, found {val!r}")

    def parse(self):
        if not self.toks:
            raise ParseError("empty expression")
        node = self.expr()
        if self.pos != len(self.toks):
            raise ParseError(f"unexpected token {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            _, op = self.take()
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.unary()
        while True:
            kind, val = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                node = ("mul" if val == "*" else "div", node, self.unary())
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                node = ("mul", node, self.power())
            else:
                return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            kind, val = self.take()
            if kind != "num":
                raise ParseError("exponent must be an integer literal")
            return ("pow", base, sign * val)
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("num", val)
        if kind == "name":
            if val == self.var:
                return ("var",)
            if val == "i":
                return ("i",)
            if val == "sqrt":
                self.expect("(")
                inner = self.expr()
                self.expect(")")
                return ("sqrt", inner)
            raise ParseError(f"unknown name {val!r} (variable is {self.var!r})")
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ParseError(f"unexpected token {val!r}" if val else "unexpected end of input")


def _const_rational(node) -> Fraction:
    """Evaluate a radical-free constant subexpression over Q."""
    tag = node[0]
    if tag == "num":
        return Fraction(node[1])
    if tag == "neg":
        return -_const_rational(node[1])
    if tag in ("add", "sub", "mul", "div"):
        a, b = _const_rational(node[1]), _const_rational(node[2])
        if tag == "add":
            return a + b
        if tag == "sub":
            return a - b
        if tag == "mul":
            return a * b
        if b == 0:
            raise ParseError("division by zero")
        return a / b
    if tag == "pow":
        a = _const_rational(node[1])
        if a == 0 and node[2] < 0:
            raise ParseError("division by zero")
        return a ** node[2]
    raise ParseError("sqrt argument must be a rational constant")


def _radicands(node, acc: set):
    tag = node[0]
    if tag == "i":
        acc.add(-1)
    elif tag == "sqrt":
        r = _const_rational(node[1])
        if r <= 0:
            raise ParseError("sqrt argument must be a positive rational")
        e, _ = squarefree_part(r)
        if e != 1:
            acc.add(e)
    else:
        for child in node[1:]:
            if isinstance(child, tuple):
                _radicands(child, acc)


def _evaluate(node, field: NumberField, var: str):
    """Evaluate to a RationalFunction over ``field``."""
    tag = node[0]
    one = Poly([1], field, var)
    if tag == "num":
        return RationalFunction(Poly([node[1]], field, var))
    if tag == "var":
        return RationalFunction(Poly([0, 1], field, var))
    if tag == "i":
        return RationalFunction(one.scale(sqrt_in_field(field, -1)))
    if tag == "sqrt":
        return RationalFunction(one.scale(sqrt_in_field(field, _const_rational(node[1]))))
    if tag == "neg":
        return -_evaluate(node[1], field, var)
    if tag == "pow":
        base = _evaluate(node[1], field, var)
        if node[2] < 0 and base.is_zero():
            raise ParseError("division by zero")
        return base ** node[2]
    a = _evaluate(node[1], field, var)
    b = _evaluate(node[2], field, var)
    if tag == "add":
        return a + b
    if tag == "sub":
        return a - b
    if tag == "mul":
        return a * b
    if b.is_zero():
        raise ParseError("division by zero")
    return a / b


def _shrink_poly(p: Poly) -> Poly:
    sub = subfield_for(p.coeffs)
    if sub is p.field:
        return p
    return Poly([move_to_subfield(c, sub) for c in p.coeffs], sub, p.var)


def parse_rational_function(text: str, var: str = "u") -> RationalFunction:
    tree = _Parser(_tokenize(text), var).parse()
    rads: set = set()
    _radicands(tree, rads)
    field = multiquadratic_field(rads) if rads else QQ
    rf = _evaluate(tree, field, var)
    num = _shrink_poly(rf.num)
    den = _shrink_poly(rf.den)
    if not num.field.is_rational and not den.field.is_rational and num.field != den.field:
        # fall back to the joint subfield
        sub = subfield_for(list(rf.num.coeffs) + list(rf.den.coeffs))
        num = Poly([move_to_subfield(c, sub) for c in rf.num.coeffs], sub, var)
        den = Poly([move_to_subfield(c, sub) for c in rf.den.coeffs], sub, var)
    return RationalFunction(num, den)


def parse_poly(text: str, var: str = "z") -> Poly:
    """Parse a polynomial; division is allowed only by nonzero constants."""
    rf = parse_rational_function(text, var)
    if rf.den.degree > 0:
        raise ParseError("expression is not a polynomial")
    return rf.num


def parse_scalar(text: str):
    """Parse a constant expression to an exact scalar."""
    p = parse_poly(text, var="z")
    if p.degree > 0:
        raise ParseError("expected a constant")
    return p.coeff(0)
