"""Theorem engine: uniqueness verdicts with replayable certificates.

A verdict answers one query, a pair (field, function class) with field
Complex or Padic (an algebraically closed complete non-archimedean field of
characteristic zero) and class Meromorphic or Entire.  Rules run in a fixed
priority order; the first decisive rule wins.  Every condition a rule
evaluates is recorded as ``lhs rel rhs`` in plain text, with exact values
written in the input grammar and interval values as ``ball(re, im, rad)``.
Replaying a certificate re-parses these strings and re-evaluates the same
relation, so the outcome can be checked independently of the engine.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd, isqrt

from .algebra.ball import ComplexBall
from .algebra.field import ExactScalar, QQ, multiquadratic_field, render_scalar, sqrt_in_field, \
    squarefree_part as rational_squarefree_part
from .algebra.parse import ParseError, parse_scalar
from .algebra.poly import Poly, derivative, eval_poly, squarefree_decomposition
from .identity import WitnessPair, tt8_witness, verify_pair
from .roots import DEFAULT_MAX_PRECISION, DEFAULT_PRECISION, Ordering, PrecisionExhausted, \
    _compare_exact_difference, exact_im_is_zero, isolate_roots, refine
from .structure import ConsistencyError, CriticalPoint, StructureReport

__all__ = [
    "FieldKind", "FunctionClass", "Status", "Query", "Condition", "Ruling", "Verdict",
    "URSReport", "decide", "decide_all", "check_thm_A", "check_thm_B", "check_quartic",
    "check_thresholds", "check_thm_3_5", "check_thm_3_6", "check_thm_3_7", "check_tt8",
    "urs_check", "evaluate_relation", "replay_certificate", "quartic_invariant",
]

VERDICT_SCHEMA = "verdict.v1"
URS_SCHEMA = "urs.v1"


class FieldKind(str, enum.Enum):
    COMPLEX = "Complex"
    PADIC = "Padic"


class FunctionClass(str, enum.Enum):
    MEROMORPHIC = "Meromorphic"
    ENTIRE = "Entire"


class Status(str, enum.Enum):
    PROVEN = "Proven"
    REFUTED = "Refuted"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class Query:
    field: FieldKind = FieldKind.COMPLEX
    function_class: FunctionClass = FunctionClass.MEROMORPHIC

    @classmethod
    def of(cls, field: str, function_class: str) -> "Query":
        return cls(FieldKind(field.capitalize()), FunctionClass(function_class.capitalize()))

    @property
    def complex(self) -> bool:
        return self.field is FieldKind.COMPLEX

    @property
    def entire(self) -> bool:
        return self.function_class is FunctionClass.ENTIRE


# ------------------------------------------------------------------ conditions
_BALL = re.compile(r"^ball\(\s*([^,]+),\s*([^,]+),\s*([^)]+)\)$")
_INT = re.compile(r"^-?\d+$")
_RELS = ("==", "!=", "<", "<=", ">", ">=")


def _text(v) -> str:
    """Canonical text of a condition operand."""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, ExactScalar):
        return render_scalar(v)
    if isinstance(v, ComplexBall):
        return f"ball({v.mid_re}, {v.mid_im}, {v.radius})"
    raise TypeError(f"cannot render {type(v).__name__}")


def _operand(text: str):
    text = text.strip()
    if text in ("true", "false"):
        return text == "true"
    if _INT.match(text):
        return int(text)
    m = _BALL.match(text)
    if m:
        re_, im_, rad = (Fraction(g.strip()) for g in m.groups())
        return ComplexBall(re_, im_, rad, 128, exact=True)
    return parse_scalar(text)


def _real_sign(x: ExactScalar) -> int | None:
    """Sign of a real algebraic number; None when it is not certifiably real."""
    if exact_im_is_zero(x) is not True:
        return None
    if x.is_zero():
        return 0
    o = _compare_exact_difference(x, DEFAULT_MAX_PRECISION)
    return {Ordering.GREATER: 1, Ordering.LESS: -1}.get(o)


def evaluate_relation(lhs: str, rel: str, rhs: str) -> bool | None:
    """Evaluate ``lhs rel rhs`` from its text form.

    Exact operands are compared exactly.  When a ball is involved only ``!=``
    is supported, and it is True when the difference ball excludes zero and
    None (undecided) otherwise.
    """
    if rel not in _RELS:
        raise ValueError(f"unknown relation {rel!r}")
    a, b = _operand(lhs), _operand(rhs)
    if isinstance(a, bool) or isinstance(b, bool):
        if rel not in ("==", "!="):
            raise ValueError("booleans support only == and !=")
        return (a == b) if rel == "==" else (a != b)
    if isinstance(a, int) and isinstance(b, int):
        return {"==": a == b, "!=": a != b, "<": a < b, "<=": a <= b,
                ">": a > b, ">=": a >= b}[rel]
    if isinstance(a, ComplexBall) or isinstance(b, ComplexBall):
        if rel != "!=":
            raise ValueError("interval operands support only !=")
        da = a if isinstance(a, ComplexBall) else _as_exact(a).embed(256)
        db = b if isinstance(b, ComplexBall) else _as_exact(b).embed(256)
        return True if not (da - db).contains_zero() else None
    d = _as_exact(a) - _as_exact(b)
    if rel in ("==", "!="):
        return d.is_zero() == (rel == "==")
    s = _real_sign(d)
    if s is None:
        return None
    return {"<": s < 0, "<=": s <= 0, ">": s > 0, ">=": s >= 0}[rel]


def _as_exact(x) -> ExactScalar:
    return x if isinstance(x, ExactScalar) else QQ(Fraction(x))


@dataclass(frozen=True)
class Condition:
    name: str
    lhs: str
    rel: str
    rhs: str
    ok: bool | None

    @classmethod
    def make(cls, name: str, lhs, rel: str, rhs) -> "Condition":
        a, b = _text(lhs), _text(rhs)
        return cls(name, a, rel, b, evaluate_relation(a, rel, b))

    @property
    def value(self) -> str:
        return f"{self.lhs} {self.rel} {self.rhs}"

    def replay(self) -> bool | None:
        return evaluate_relation(self.lhs, self.rel, self.rhs)

    def to_json(self) -> dict:
        return {"condition": self.name, "value": self.value, "ok": self.ok,
                "lhs": self.lhs, "rel": self.rel, "rhs": self.rhs}

    @classmethod
    def from_json(cls, doc: dict) -> "Condition":
        return cls(doc["condition"], doc["lhs"], doc["rel"], doc["rhs"], doc["ok"])


@dataclass
class Ruling:
    """Outcome of one rule: Proven, Refuted, Unknown, or None for inapplicable."""

    theorem: str
    status: Status | None
    conditions: list = dc_field(default_factory=list)
    witness: WitnessPair | None = None
    note: str = ""

    @property
    def first_failure(self) -> Condition | None:
        for c in self.conditions:
            if c.ok is not True:
                return c
        return None


class _Inapplicable(Exception):
    pass


class _Trace:
    """Accumulates conditions; ``need`` aborts the rule on a failed precondition."""

    def __init__(self, theorem: str):
        self.theorem = theorem
        self.conditions: list = []

    def add(self, name, lhs, rel, rhs) -> bool | None:
        c = Condition.make(name, lhs, rel, rhs)
        self.conditions.append(c)
        return c.ok

    def need(self, name, lhs, rel, rhs) -> None:
        if self.add(name, lhs, rel, rhs) is not True:
            raise _Inapplicable

    def ruling(self, status, **kw) -> Ruling:
        return Ruling(self.theorem, status, list(self.conditions), **kw)


def _run(theorem: str, body) -> Ruling:
    tr = _Trace(theorem)
    try:
        return body(tr)
    except _Inapplicable:
        return tr.ruling(None)


@dataclass(frozen=True)
class Verdict:
    status: Status
    theorem: str | None
    query: Query
    certificate: tuple = ()
    witness: WitnessPair | None = None
    attempts: tuple = ()  # (theorem, first failing Condition or None, note)
    notes: tuple = ()

    def to_json(self) -> dict:
        doc = {
            "schema": VERDICT_SCHEMA,
            "status": self.status.value,
            "theorem": self.theorem,
            "field": self.query.field.value,
            "class": self.query.function_class.value,
            "certificate": [c.to_json() for c in self.certificate],
        }
        if self.witness is not None:
            doc["witness"] = self.witness.to_json()
        doc["attempts"] = [
            {"theorem": th, "failed": (c.to_json() if c is not None else None), "note": note}
            for th, c, note in self.attempts
        ]
        doc["notes"] = list(self.notes)
        return doc


def replay_certificate(doc: dict) -> bool:
    """Re-evaluate every certificate entry of a verdict document."""
    for entry in doc.get("certificate", []):
        if evaluate_relation(entry["lhs"], entry["rel"], entry["rhs"]) != entry["ok"]:
            return False
    return True


# --------------------------------------------------------------- helpers
def _monic_coeffs(P: Poly) -> list:
    return list(P.monic().coeffs)


def quartic_invariant(P: Poly) -> ExactScalar:
    """a3^3/8 - a2*a3/2 + a1 for the monic normalization of a quartic."""
    if P.degree != 4:
        raise ValueError("quartic invariant needs degree 4")
    a0, a1, a2, a3, _ = _monic_coeffs(P)
    return a3 ** 3 / 8 - a2 * a3 / 2 + a1


def _qs(r: StructureReport) -> list:
    return [m.q for m in r.points]


def _to_ball(x, prec: int) -> ComplexBall:
    if isinstance(x, ComplexBall):
        return x
    return _as_exact(x).embed(prec)


def _point_at(cp: CriticalPoint, prec: int):
    """Exact value of a critical point, or a ball of radius at most 2^-prec."""
    if cp.point is not None:
        return cp.point
    e = cp.root
    if e.ball.radius > Fraction(1, 1 << prec):
        e = refine(e, None, Fraction(1, 1 << prec))
    return e.ball.with_precision(max(e.ball.precision_bits, prec + 32))


def _nonzero(compute, precision: int, max_precision: int):
    """Evaluate ``compute(prec)`` until it is exact or a ball excluding zero."""
    prec = precision
    value = None
    while prec <= max_precision:
        try:
            value = compute(prec)
        except (PrecisionExhausted, ZeroDivisionError):
            value = None
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, ComplexBall) and not value.contains_zero():
            return value
        prec *= 2
    return value if value is not None else ComplexBall(0, 0, 1, 2, exact=True)


def _mixed(values, prec: int):
    """Return the values unchanged if all are exact, else all as balls."""
    if all(isinstance(v, ExactScalar) for v in values):
        return list(values)
    return [_to_ball(v, prec) for v in values]


class _Cofactor:
    """Q = P' / prod (z - d)^q over chosen critical points, and its derivative.

    Exact polynomial division when every chosen point is exact; otherwise Q is
    evaluated as lc(P') times the product over the remaining roots of P'.
    """

    def __init__(self, P: Poly, r: StructureReport, chosen: list):
        self.dP = derivative(P)
        self.chosen = chosen
        ids = {id(c) for c in chosen}
        self.others = [m for m in r.points if id(m) not in ids]
        self.Q = None
        if all(c.point is not None for c in chosen):
            div = Poly([1], self.dP.field, self.dP.var)
            for c in chosen:
                div = div * Poly([-c.point, 1], None, self.dP.var) ** c.q
            self.Q = self.dP.exact_div(div)
            self.dQ = derivative(self.Q)

    @property
    def degree(self) -> int:
        return self.dP.degree - sum(c.q for c in self.chosen)

    def value(self, x, prec: int):
        if self.Q is not None:
            return eval_poly(self.Q, x)
        return self._product(x, prec)[0]

    def deriv(self, x, prec: int):
        if self.Q is not None:
            return eval_poly(self.dQ, x)
        q, logd = self._product(x, prec)
        return q * logd

    def _product(self, x, prec: int):
        xb = _to_ball(x, prec)
        out = self.dP.lc.embed(prec)
        logd = ComplexBall.exact(0, 0, prec)
        for m in self.others:
            diff = xb - _to_ball(_point_at(m, prec), prec)
            out = out * diff ** m.q
            logd = logd + ComplexBall.exact(m.q, 0, prec) / diff
        return out, logd


# ------------------------------------------------------------- basic rules
def check_thm_A(r: StructureReport) -> Ruling:
    """CIP over the complex numbers with P squarefree: iff rule on pair products."""
    def body(tr: _Trace):
        tr.need("P is CIP", r.is_cip, "==", True)
        tr.need("P has simple zeros only", r.p_squarefree, "==", True)
        qs = _qs(r)
        pairs = sum(a * b for a, b in itertools.combinations(qs, 2))
        ok = tr.add("sum_{l<m} q_l q_m > sum_l q_l", pairs, ">", sum(qs))
        return tr.ruling(Status.PROVEN if ok else Status.REFUTED)
    return _run("ThmA", body)


def check_thm_B(r: StructureReport) -> Ruling:
    """CIP over a non-archimedean field: k >= 3, or k = 2 with min q >= 2."""
    def body(tr: _Trace):
        tr.need("P is CIP", r.is_cip, "==", True)
        if tr.add("k >= 3", r.k, ">=", 3):
            return tr.ruling(Status.PROVEN)
        # the failed k >= 3 entry is kept; it documents why the second branch ran
        if r.k == 2:
            ok = tr.add("k == 2 and min q >= 2", min(_qs(r)), ">=", 2)
        else:
            ok = tr.add("k == 2", r.k, "==", 2)
        return tr.ruling(Status.PROVEN if ok else Status.REFUTED)
    return _run("ThmB", body)


def check_quartic(P: Poly, r: StructureReport, q: Query) -> Ruling:
    """Quartics: never UPM over C; UPE over C iff the invariant I is nonzero."""
    if not q.entire:
        def mero(tr: _Trace):
            tr.need("field is complex", q.complex, "==", True)
            tr.need("degree == 4", P.degree, "==", 4)
            return tr.ruling(Status.REFUTED)
        return _run("ThmC", mero)

    def body(tr: _Trace):
        tr.need("field is complex", q.complex, "==", True)
        tr.need("degree == 4", P.degree, "==", 4)
        tr.need("k >= 2", r.k, ">=", 2)
        I = quartic_invariant(P)
        nonzero = tr.add("I = a3^3/8 - a2*a3/2 + a1 != 0", I, "!=", 0)
        if nonzero == r.is_cip:
            tr.add("P is CIP", r.is_cip, "==", bool(nonzero))
        else:
            raise ConsistencyError("quartic invariant disagrees with the CIP flag")
        if not nonzero:
            a0, a1, a2, a3, _ = _monic_coeffs(P)
            lc = P.lc
            shared = (a0 - (a3 * a3 - 4 * a2) ** 2 / 64) * lc
            col = next(c for c in r.columns if len(c) > 1)
            if col.exact_value is not None:
                val = col.exact_value
            else:
                val = eval_poly(P, col.members[0].point) if col.members[0].point is not None else None
            if val is None:
                if not col.class_value.overlaps(shared.embed(col.class_value.precision_bits)):
                    raise ConsistencyError("shared quartic critical value mismatch")
            elif tr.add("shared value == lc*(a0 - (a3^2 - 4 a2)^2/64)", val, "==", shared) is not True:
                raise ConsistencyError("shared quartic critical value mismatch")
        return tr.ruling(Status.PROVEN if nonzero else Status.REFUTED)
    return _run("Thm_tt7", body)


_THRESHOLDS = {
    # (field, entire) -> list of (theorem id, t minimum, t' minimum)
    (FieldKind.PADIC, False): [("Thm3_3", 3, 3), ("Thm3_1", 1, 5)],
    (FieldKind.PADIC, True): [("Thm3_3", 3, 3), ("Thm3_1", 1, 4)],
    (FieldKind.COMPLEX, False): [("Thm3_4", 3, 4), ("Thm3_2", 1, 6)],
    (FieldKind.COMPLEX, True): [("Thm3_4", 3, 4), ("Thm3_2", 1, 5)],
}


def check_thresholds(r: StructureReport, q: Query) -> list:
    """Threshold rules on (t, t'); one ruling per applicable theorem, cheapest first."""
    out = []
    for theorem, tmin, tpmin in _THRESHOLDS[(q.field, q.entire)]:
        def body(tr: _Trace, tmin=tmin, tpmin=tpmin):
            tr.need("P has simple zeros only", r.p_squarefree, "==", True)
            tr.need(f"t >= {tmin}", r.t, ">=", tmin)
            tr.need(f"t' >= {tpmin}", r.t_prime, ">=", tpmin)
            return tr.ruling(Status.PROVEN)
        out.append(_run(theorem, body))
    return out


# ------------------------------------------------------- three-point rules
def _h2_columns(r: StructureReport) -> list:
    """(column index, point with the largest q in the column) for nonempty B_H2."""
    out = []
    for ci, (col, der) in enumerate(zip(r.columns, r.derived)):
        if der.B_H2:
            top = max(col.members, key=lambda m: m.q)
            out.append((ci, top))
    return out


def check_thm_3_5(P: Poly, r: StructureReport, *, precision: int = DEFAULT_PRECISION,
                  max_precision: int = DEFAULT_MAX_PRECISION) -> Ruling:
    """Three columns with a dominant point of multiplicity at least 2.

    Every 3-subset of columns with nonempty B_H2 and every choice of the
    index carrying the largest q is tried; the first choice meeting all
    conditions proves the claim.
    """
    first_fail = None
    cands = _h2_columns(r)
    for triple in itertools.combinations(cands, 3):
        pts = [p for _, p in triple]
        qmax = max(p.q for p in pts)
        for lead in range(3):
            if pts[lead].q != qmax:
                continue
            order = [pts[lead]] + [p for j, p in enumerate(pts) if j != lead]
            ruling = _run("Thm3_5", lambda tr: _thm_3_5_choice(tr, P, r, order, precision,
                                                               max_precision))
            if ruling.status is Status.PROVEN:
                return ruling
            if first_fail is None:
                first_fail = ruling
    if first_fail is not None:
        return first_fail

    def body(tr: _Trace):
        tr.need("P has simple zeros only", r.p_squarefree, "==", True)
        tr.need("t >= 3", r.t, ">=", 3)
        return tr.ruling(None)
    return _run("Thm3_5", body)


def _thm_3_5_choice(tr: _Trace, P, r, order, precision, max_precision) -> Ruling:
    d1, d2, d3 = order
    tr.need("P has simple zeros only", r.p_squarefree, "==", True)
    tr.need("t >= 3", r.t, ">=", 3)
    tr.need("max(q_1, q_2, q_3) >= 2", d1.q, ">=", 2)
    if tr.add("min(q_1, q_2, q_3) >= 2", min(d.q for d in order), ">=", 2):
        return tr.ruling(Status.PROVEN)
    tr.conditions.pop()
    if r.is_cip:
        tr.add("P is CIP", r.is_cip, "==", True)
        return tr.ruling(Status.PROVEN)
    tr.add("P is NCIP", r.is_cip, "==", False)
    if tr.add("t' >= 4", r.t_prime, ">=", 4):
        return tr.ruling(Status.PROVEN)
    tr.conditions.pop()
    tr.need("t' == 3", r.t_prime, "==", 3)
    cof = _Cofactor(P, r, list(order))
    q1 = d1.q
    for i, j in ((2, 3), (3, 2)):
        di, dj = order[i - 1], order[j - 1]
        qi = di.q

        def compute(prec, di=di, dj=dj, qi=qi):
            x1, xi, xj = _mixed([_point_at(p, prec) for p in (d1, di, dj)], prec)
            lhs = cof.deriv(xj, prec) * (xj - x1) * (xj - xi)
            rhs = cof.value(xi, prec) * (xi * (1 + q1) + x1 * (1 + qi) - xj * (2 + q1 + qi))
            return lhs - rhs
        v = _nonzero(compute, precision, max_precision)
        tr.need(f"Q'(d_{j})/Q(d_{i}) != [d_{i}(1+q_1)+d_1(1+q_{i})-(2+q_1+q_{i})d_{j}]"
                f"/[(d_{j}-d_1)(d_{j}-d_{i})], cross-multiplied difference", v, "!=", 0)
    return tr.ruling(Status.PROVEN)


def check_thm_3_6(P: Poly, r: StructureReport, *, precision: int = DEFAULT_PRECISION,
                  max_precision: int = DEFAULT_MAX_PRECISION) -> Ruling:
    """Three simple critical points d_1, d_2, d_3 forming the B_H2 sets."""
    def body(tr: _Trace):
        tr.need("P has simple zeros only", r.p_squarefree, "==", True)
        tr.need("P is NCIP", r.is_cip, "==", False)
        tr.need("n >= 6", r.n, ">=", 6)
        tr.need("t == 3", r.t, "==", 3)
        tr.need("t' == 3", r.t_prime, "==", 3)
        ds = [r.columns[ci].members[mi] for ci, der in enumerate(r.derived)
              for mi in range(len(r.columns[ci])) if r.columns[ci].members[mi] in der.B_H2]
        for idx, d in enumerate(ds, 1):
            tr.need(f"q(d_{idx}) == 1", d.q, "==", 1)
        cof = _Cofactor(P, r, ds)
        tr.need("deg Q >= 2", cof.degree, ">=", 2)

        def pts(prec):
            return _mixed([_point_at(d, prec) for d in ds], prec)

        # (a) Q'(d_j) != 0
        for j in range(3):
            v = _nonzero(lambda prec, j=j: cof.deriv(pts(prec)[j], prec), precision, max_precision)
            tr.need(f"Q'(d_{j + 1}) != 0", v, "!=", 0)
        # (b) Q'(d_j)/Q(d_i) != (2d_i + 2d_k - 4d_j)/((d_j - d_k)(d_j - d_i))
        for i, j, k in itertools.permutations(range(3)):
            def compute(prec, i=i, j=j, k=k):
                x = pts(prec)
                return cof.deriv(x[j], prec) * (x[j] - x[k]) * (x[j] - x[i]) \
                    - cof.value(x[i], prec) * (2 * x[i] + 2 * x[k] - 4 * x[j])
            v = _nonzero(compute, precision, max_precision)
            tr.need(f"Q'(d_{j + 1})/Q(d_{i + 1}) != (2d_{i + 1}+2d_{k + 1}-4d_{j + 1})"
                    f"/((d_{j + 1}-d_{k + 1})(d_{j + 1}-d_{i + 1})), cross-multiplied", v, "!=", 0)
        # (c) over the other preimages of each critical value
        for k in range(3):
            i, j = [x for x in range(3) if x != k]
            dk = ds[k]
            tr.need(f"d_{k + 1} is exact", dk.point is not None, "==", True)
            H = P - Poly([eval_poly(P, dk.point)], None, P.var)
            H1 = H.exact_div(Poly([-dk.point, 1], None, P.var) ** (dk.q + 1))
            xis = isolate_roots(H1, precision=precision, max_precision=max_precision) \
                if H1.degree >= 1 else []
            for xi_index, xi in enumerate(xis, 1):
                def compute(prec, xi=xi, i=i, j=j, k=k):
                    x = pts(prec)
                    if xi.exact_value is not None:
                        xv = xi.exact_value
                    else:
                        e = xi if xi.ball.radius <= Fraction(1, 1 << prec) \
                            else refine(xi, H1, Fraction(1, 1 << prec))
                        xv = e.ball
                    *x, xv = _mixed(x + [xv], prec)
                    lhs = cof.value(xv, prec) * (xv - x[i]) ** 2 * (xv - x[j]) ** 2
                    rhs = cof.value(x[k], prec) * (x[k] - x[i]) ** 2 * (x[k] - x[j]) ** 2
                    return lhs - rhs
                v = _nonzero(compute, precision, max_precision)
                tr.need(f"Q(xi)/Q(d_{k + 1}) != (d_{k + 1}-d_{i + 1})^2(d_{k + 1}-d_{j + 1})^2"
                        f"/((xi-d_{i + 1})^2(xi-d_{j + 1})^2) for xi #{xi_index} of "
                        f"P - P(d_{k + 1}), cross-multiplied", v, "!=", 0)
        # conclusion: no midpoint relation, or the derivative ratio avoids 3/(d_k - d_i)
        for i, j, k in itertools.permutations(range(3)):
            v = _nonzero(lambda prec, i=i, j=j, k=k: (lambda x: x[k] - 2 * x[i] + x[j])(pts(prec)),
                         precision, max_precision)
            label = f"d_{k + 1} != 2d_{i + 1} - d_{j + 1}"
            if tr.add(label, v, "!=", 0):
                continue

            def compute(prec, i=i, j=j, k=k):
                x = pts(prec)
                return cof.deriv(x[j], prec) * (x[k] - x[i]) - 3 * cof.value(x[j], prec)
            w = _nonzero(compute, precision, max_precision)
            tr.need(f"Q'(d_{j + 1})/Q(d_{j + 1}) != 3/(d_{k + 1}-d_{i + 1}), cross-multiplied",
                    w, "!=", 0)
        return tr.ruling(Status.PROVEN)
    return _run("Thm3_6", body)


def _band_upper(q1: int) -> ExactScalar:
    """(q1 - 2)/2 + sqrt(q1^2 - 4 q1 - 4)/2 as an exact real number."""
    disc = q1 * q1 - 4 * q1 - 4
    base = QQ(Fraction(q1 - 2, 2))
    root = isqrt(disc)
    if root * root == disc:
        return base + Fraction(root, 2)
    e, s = rational_squarefree_part(disc)
    K = multiquadratic_field([e])
    return base.promote(K) + sqrt_in_field(K, e) * (s / 2)


def check_thm_3_7(r: StructureReport, q: Query) -> Ruling:
    """Three critical points, middle multiplicity 2, with the q_3 band."""
    def body(tr: _Trace):
        tr.need("P has simple zeros only", r.p_squarefree, "==", True)
        tr.need("P is NCIP", r.is_cip, "==", False)
        tr.need("k == 3", r.k, "==", 3)
        tr.need("t == 2", r.t, "==", 2)
        tr.need("t' == 3", r.t_prime, "==", 3)
        sets = [der.B_H2 for der in r.derived if der.B_H2]
        pair = next(s for s in sets if len(s) == 2)
        single = next(s for s in sets if len(s) == 1)
        tr.need("q(d_2) == 2", single[0].q, "==", 2)
        q1 = max(m.q for m in pair)
        q3 = min(m.q for m in pair)
        tr.need("q_1 >= 6", q1, ">=", 6)
        tr.need("(q_1 - 1)/2 < q_3", Fraction(q1 - 1, 2), "<", q3)
        upper = _band_upper(q1)
        if q.complex:
            tr.need("q_3 < (q_1 - 2)/2 + sqrt(q_1^2 - 4q_1 - 4)/2", q3, "<", upper)
        else:
            tr.need("q_3 <= (q_1 - 2)/2 + sqrt(q_1^2 - 4q_1 - 4)/2", q3, "<=", upper)
        return tr.ruling(Status.PROVEN)
    return _run("Thm3_7", body)


def check_tt8(P: Poly, r: StructureReport) -> Ruling:
    """Quintic z^5 + a z^4 + b z^3 + c, NCIP with 8a^2 != 5b: explicit witness."""
    def body(tr: _Trace):
        tr.need("degree == 5", P.degree, "==", 5)
        c0, c1, c2, b3, a4, _ = _monic_coeffs(P)
        tr.need("coefficient of z^2 == 0", c2, "==", 0)
        tr.need("coefficient of z == 0", c1, "==", 0)
        tr.need("P is NCIP", r.is_cip, "==", False)
        tr.need("8a^2 != 5b", 8 * a4 * a4, "!=", 5 * b3)
        tr.need("a^2 == 4b", a4 * a4, "==", 4 * b3)
        tr.need("a != 0", a4, "!=", 0)
        w = tt8_witness(a4, c0)
        check = verify_pair(P, w.f, w.g)
        tr.need("P(f) - P(g) == 0", check.holds, "==", True)
        tr.need("f - g != 0", check.distinct, "==", True)
        return tr.ruling(Status.REFUTED, witness=WitnessPair(P, w.f, w.g, w.note))
    return _run("Thm_tt8", body)


# ----------------------------------------------------------------- engine
def _simple(theorem: str, status: Status, *conds) -> Ruling:
    tr = _Trace(theorem)
    for c in conds:
        tr.add(*c)
    return tr.ruling(status)


def decide(P: Poly, r: StructureReport, q: Query = Query(), *,
           precision: int = DEFAULT_PRECISION, max_precision: int = DEFAULT_MAX_PRECISION) -> Verdict:
    """Apply the rules in priority order and return the first decisive verdict."""
    attempts: list = []
    notes: list = []

    def done(rl: Ruling) -> Verdict:
        return Verdict(rl.status, rl.theorem, q, tuple(rl.conditions), rl.witness,
                       tuple(attempts), tuple(notes))

    def attempt(rl: Ruling, note: str = "") -> None:
        attempts.append((rl.theorem, rl.first_failure, note or rl.note))

    if r.n == 1:
        return done(_simple("Degree1", Status.PROVEN, ("degree == 1", r.n, "==", 1)))
    if r.k <= 1:
        return done(_simple("Rem1_2", Status.REFUTED, ("k <= 1", r.k, "<=", 1)))
    if q.complex and r.n in (2, 3):
        return done(_simple("LiYang_deg23", Status.REFUTED, ("field is complex", True, "==", True),
                            ("degree in {2, 3}", r.n, "<=", 3)))
    if q.complex and r.n == 4:
        return done(check_quartic(P, r, q))

    # complete rules for CIP
    if r.is_cip:
        rl = check_thm_A(r) if q.complex else check_thm_B(r)
        if rl.status is Status.PROVEN or (rl.status is Status.REFUTED and not q.entire):
            return done(rl)
        if rl.status is Status.REFUTED:
            attempt(rl, "refutes the meromorphic property only; entire case stays open")
        else:
            attempt(rl, "gate: P has a multiple zero")

    # sufficient rules; UPM proofs also settle the entire query
    if not r.p_squarefree:
        notes.append("sufficient rules are gated on P having simple zeros only")
    for rl in check_thresholds(r, q):
        if rl.status is Status.PROVEN:
            return done(rl)
        attempt(rl)
    rl = check_thm_3_7(r, q)
    if rl.status is Status.PROVEN:
        return done(rl)
    attempt(rl)
    if q.complex:
        for fn in (check_thm_3_5, check_thm_3_6):
            rl = fn(P, r, precision=precision, max_precision=max_precision)
            if rl.status is Status.PROVEN:
                return done(rl)
            attempt(rl)
        if not q.entire:
            rl = check_tt8(P, r)
            if rl.status is Status.REFUTED:
                return done(rl)
            attempt(rl)
    return Verdict(Status.UNKNOWN, None, q, (), None, tuple(attempts), tuple(notes))


def decide_all(P: Poly, r: StructureReport, **kw) -> dict:
    """Verdicts for all four queries, keyed by (field, class) values."""
    out = {}
    for f in FieldKind:
        for c in FunctionClass:
            out[(f.value, c.value)] = decide(P, r, Query(f, c), **kw)
    return out


# -------------------------------------------------------------------- URS
@dataclass(frozen=True)
class URSReport:
    applicable: bool
    reason: str
    n: int
    k: int
    p: int = 0
    m_list: tuple = ()
    conditions: tuple = ()  # ((label, bool), ...) for (i) .. (v)
    condition_hit: str | None = None
    b: tuple | None = None
    ursm_threshold_met: bool = False
    ursm_im_threshold_met: bool = False
    upm_status: str = "Unknown"
    conclusion: str = "none"
    cardinality: int = 0
    notes: tuple = ()

    def to_json(self) -> dict:
        return {
            "schema": URS_SCHEMA,
            "applicable": self.applicable,
            "reason": self.reason,
            "n": self.n,
            "k": self.k,
            "p": self.p,
            "m": list(self.m_list),
            "conditions": {label: ok for label, ok in self.conditions},
            "condition_hit": self.condition_hit,
            "b": list(self.b) if self.b is not None else None,
            "ursm_threshold_met": self.ursm_threshold_met,
            "ursm_im_threshold_met": self.ursm_im_threshold_met,
            "upm_status": self.upm_status,
            "conclusion": self.conclusion,
            "cardinality": self.cardinality,
            "notes": list(self.notes),
        }


def urs_check(P: Poly, r: StructureReport, upm: Verdict) -> URSReport:
    """Unique range set test for the zero set of P."""
    n, k = P.degree, r.k
    a0 = P.coeff(0)
    if a0.is_zero():
        return URSReport(False, "constant term is zero", n, k)
    if not r.p_squarefree:
        return URSReport(False, "P has a multiple zero, so its zero set has fewer than n points",
                         n, k)
    shifted = P - Poly([a0], None, P.var)
    m_list = sorted((e for g, e in squarefree_decomposition(shifted) for _ in range(g.degree)),
                    reverse=True)
    p = len(m_list)
    g = [gcd(m, n) for m in m_list]
    conds = {
        "i": p >= 4,
        "ii": p == 3 and any(gi == 1 and m >= 2 for m, gi in zip(m_list, g)),
        "iii": p == 3 and m_list[0] >= 2 and g[0] != 1 and m_list[1:] == [1, 1] and n >= 5,
        "iv": p == 2 and any(gi == 1 for gi in g) and n >= 5,
    }
    b = tuple(g) if p == 2 else None
    conds["v"] = p == 2 and all(gi != 1 for gi in g) and n >= 2 * sum(g) + 1
    hit = next((label for label, ok in conds.items() if ok), None)
    proven = (upm.status is Status.PROVEN and upm.query.complex and not upm.query.entire)
    t7, t13 = n >= 2 * k + 7, n >= 2 * k + 13
    notes = []
    if p == 2:
        notes.append("condition (iv) is read as n >= 5 with n the sum of the two multiplicities")
    if hit is None:
        conclusion = "none"
    elif not proven:
        conclusion = "contingent: uniqueness for meromorphic functions over C not established"
    elif t13:
        conclusion = "URSM-IM"
    elif t7:
        conclusion = "URSM"
    else:
        conclusion = "none"
    card = n if conclusion in ("URSM", "URSM-IM") else 0
    return URSReport(True, "", n, k, p, tuple(m_list), tuple(conds.items()), hit,
                     b if conds["v"] else None, t7, t13, upm.status.value, conclusion, card,
                     tuple(notes))
