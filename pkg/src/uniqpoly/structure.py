"""Critical-value collision structure of a polynomial.

Critical points (roots of P') are grouped into columns by critical value.
The grouping is certified: value enclosures are clustered by overlap and
refined until the number of clusters equals the number of distinct roots of
D(y) = Res_x(P(x) - y, P'(x)), at which point every cluster holds exactly one
value.  From the columns we derive the row layout (point and multiplicity tables), the sets
A_i, A_i(H1), A_i(H2), B_i(H2) and the invariants t and t'.
"""

from __future__ import annotations

import functools
import json
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra.ball import ComplexBall
from .algebra.field import ExactScalar, NumberField, move_to_subfield, render_scalar
from .algebra.parse import parse_poly, parse_scalar
from .algebra.poly import (
    Poly,
    critical_value_poly,
    derivative,
    eval_poly,
    poly_gcd,
    render_poly,
    squarefree_decomposition,
)
from .roots import (
    DEFAULT_MAX_PRECISION,
    DEFAULT_PRECISION,
    Ordering,
    PrecisionExhausted,
    RootEnclosure,
    certified_compare,
    isolate_roots,
    recognize_root,
    refine,
)

__all__ = [
    "ConsistencyError",
    "CriticalPoint",
    "ValueClass",
    "ColumnDerived",
    "StructureReport",
    "build_structure",
    "cluster_critical_values",
    "compute_h_sets",
    "render_tables",
    "report_from_json",
]

SCHEMA = "structure.v1"


class ConsistencyError(AssertionError):
    """Two independent computations disagree; indicates an internal bug."""


@dataclass(frozen=True)
class CriticalPoint:
    root: RootEnclosure
    q: int
    value_ball: ComplexBall
    exact_value: ExactScalar | None = None

    @property
    def point(self) -> ExactScalar | None:
        return self.root.exact_value


@dataclass(frozen=True)
class ValueClass:
    """One column: critical points sharing a critical value."""

    members: tuple
    class_value: ComplexBall
    q_sum: int
    exact_value: ExactScalar | None = None

    @property
    def qs(self) -> tuple:
        return tuple(m.q for m in self.members)

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class ColumnDerived:
    A: frozenset
    B: tuple
    A_H1: tuple
    A_H2: tuple
    B_H2: tuple

    @property
    def n_i(self) -> int:
        return len(self.A_H1)


@dataclass(frozen=True)
class StructureReport:
    n: int
    k: int
    s: int
    columns: tuple
    derived: tuple
    rows: tuple  # rows[l] = tuple of (column index, member index); top row first
    t: int
    t_prime: int
    is_cip: bool
    p_squarefree: bool
    certification: str = "Certified"
    poly: Poly | None = dc_field(default=None, compare=False, repr=False)

    @property
    def row_sizes(self) -> tuple:
        return tuple(len(r) for r in self.rows)

    @property
    def points(self) -> list:
        return [m for c in self.columns for m in c.members]

    def column_q_multisets(self) -> list:
        return sorted(tuple(sorted(c.qs)) for c in self.columns)

    def to_json(self) -> dict:
        return _report_to_json(self)


# ------------------------------------------------------------------ H sets
def compute_h_sets(c: ValueClass) -> ColumnDerived:
    """A_i, B_i, A_i(H1) (descending), A_i(H2) and B_i(H2) for one column."""
    counts = Counter(m.q for m in c.members)
    A = frozenset(q for q, cnt in counts.items() if cnt == 1)
    B = tuple(m for m in c.members if m.q in A)
    repeated = [q for q, cnt in counts.items() if cnt > 1]
    # dominance over the repeated multiplicities; vacuous when there are none
    H1 = tuple(sorted((q for q in A if all(q > r for r in repeated)), reverse=True))
    if H1:
        top = H1[0]
        H2 = tuple(q for q in H1 if top + 1 < 2 * (q + 1))
    else:
        H2 = ()
    B_H2 = tuple(m for m in c.members if m.q in H2)
    return ColumnDerived(A, B, H1, H2, B_H2)


# -------------------------------------------------------------- clustering
class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, i):
        while self.parent[i] != i:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def union(self, i, j):
        a, b = self.find(i), self.find(j)
        if a != b:
            self.parent[max(a, b)] = min(a, b)

    def groups(self):
        out = {}
        for i in range(len(self.parent)):
            out.setdefault(self.find(i), []).append(i)
        return list(out.values())


def _value_of(P: Poly, e: RootEnclosure, prec: int):
    if e.exact_value is not None:
        v = eval_poly(P, e.exact_value)
        if v.is_rational():
            return ComplexBall.exact(v.coords[0], 0, prec), v
        return v.embed(prec), v
    return eval_poly(P, e.ball.with_precision(prec)), None


def _group(points: list) -> list:
    uf = _UnionFind(len(points))
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            a, b = points[i], points[j]
            if a.exact_value is not None and b.exact_value is not None:
                if a.exact_value == b.exact_value:
                    uf.union(i, j)
            elif a.value_ball.overlaps(b.value_ball):
                uf.union(i, j)
    return uf.groups()


def _exponent_multiset(D: Poly) -> list:
    out = []
    for f, e in squarefree_decomposition(D):
        out.extend([e] * f.degree)
    return sorted(out)


def cluster_critical_values(points: list, D: Poly, P: Poly | None = None, *,
                            max_precision: int = DEFAULT_MAX_PRECISION) -> list:
    """Group critical points by critical value, certified against D(y).

    ``points`` must list every critical point.  When ``P`` is given,
    enclosures are refined (precision doubled) until the number of overlap
    components equals the number of distinct roots of D.
    """
    sqf = squarefree_decomposition(D)
    distinct = sum(f.degree for f, _ in sqf)
    while True:
        groups = _group(points)
        if len(groups) == distinct:
            break
        if len(groups) < distinct:
            raise ConsistencyError("more clusters than distinct critical values")
        if P is None:
            raise PrecisionExhausted("clusters undecided and no polynomial to refine with")
        prec = 2 * max(p.value_ball.precision_bits for p in points)
        if prec > max_precision:
            raise PrecisionExhausted(f"critical values not separated within {max_precision} bits")
        points = _refine_points(P, points, prec, max_precision)
    classes = []
    for g in groups:
        members = tuple(points[i] for i in g)
        q_sum = sum(m.q for m in members)
        best = min(members, key=lambda m: m.value_ball.radius)
        exact = next((m.exact_value for m in members if m.exact_value is not None), None)
        if exact is None:
            exact = _exact_class_value(members, sqf, q_sum)
        classes.append(ValueClass(members, best.value_ball, q_sum, exact))
    got = sorted(c.q_sum for c in classes)
    want = _exponent_multiset(D)
    if got != want:
        raise ConsistencyError(f"column q-sums {got} differ from the exponents of D {want}")
    return classes


def _refine_points(P: Poly, points, prec: int, max_precision: int):
    out = []
    for p in points:
        root = p.root
        if root.exact_value is None:
            root = refine(root, None, root.ball.radius / (1 << (prec // 2)),
                          max_precision=max_precision)
            root = RootEnclosure(root.ball.with_precision(prec), root.multiplicity, None, root.factor)
        ball, exact = _value_of(P, root, prec)
        out.append(CriticalPoint(root, p.q, ball, exact))
    return out


def _exact_class_value(members, sqf, q_sum: int):
    """Exact critical value from the factor of D carrying exponent q_sum."""
    for f, e in sqf:
        if e != q_sum:
            continue
        for m in members:
            ball = m.value_ball
            got = recognize_root(f, ball, max(ball.precision_bits, 128))
            if got is not None:
                return got
    return None


# ----------------------------------------------------------------- ordering
def _cmp_points(a: CriticalPoint, b: CriticalPoint) -> int:
    res = certified_compare(a.root, b.root, max_precision=512)
    if res is Ordering.LESS:
        return -1
    if res is Ordering.GREATER:
        return 1
    if res is Ordering.EQUAL:
        return 0
    # Re undecidable (typically exactly equal): order by Im when certain
    ba, bb = a.root.ball, b.root.ball
    if ba.mid_im + ba.radius < bb.mid_im - bb.radius:
        return -1
    if bb.mid_im + bb.radius < ba.mid_im - ba.radius:
        return 1
    ka = (ba.mid_re, ba.mid_im)
    kb = (bb.mid_re, bb.mid_im)
    return (ka > kb) - (ka < kb)


_point_key = functools.cmp_to_key(_cmp_points)


def _canonical(classes: list) -> list:
    ordered = []
    for c in classes:
        members = tuple(sorted(c.members, key=_point_key))
        ordered.append(ValueClass(members, c.class_value, c.q_sum, c.exact_value))

    def col_cmp(x: ValueClass, y: ValueClass) -> int:
        if len(x) != len(y):
            return len(x) - len(y)
        return _cmp_points(x.members[0], y.members[0])

    return sorted(ordered, key=functools.cmp_to_key(col_cmp))


def _layout(columns: list, s: int) -> tuple:
    """Rows top (S_1) to bottom (S_s); a size-m column fills the last m rows."""
    rows = []
    for level in range(1, s + 1):
        row = []
        for ci, c in enumerate(columns):
            m = len(c)
            idx = s - level  # member index counted from the bottom row
            if idx < m:
                row.append((ci, idx))
        rows.append(tuple(row))
    return tuple(rows)


# -------------------------------------------------------------------- build
def build_structure(P: Poly, *, precision: int = DEFAULT_PRECISION,
                    max_precision: int = DEFAULT_MAX_PRECISION) -> StructureReport:
    """Full structure report of a nonconstant polynomial."""
    if P.degree < 1:
        raise ValueError("structure of a constant polynomial is undefined")
    n = P.degree
    if n == 1:
        return StructureReport(1, 0, 0, (), (), (), 0, 0, True, True, "Certified", P)
    dP = derivative(P)
    iso = isolate_roots(dP, precision=precision, max_precision=max_precision)
    points = []
    for e in iso:
        ball, exact = _value_of(P, e, max(precision, iso.precision_used))
        points.append(CriticalPoint(e, e.multiplicity, ball, exact))
    D = critical_value_poly(P)
    classes = cluster_critical_values(points, D, P, max_precision=max_precision)
    columns = _canonical(classes)
    derived = tuple(compute_h_sets(c) for c in columns)
    k = len(points)
    s = max(len(c) for c in columns)
    t = sum(1 for d in derived if d.B_H2)
    t_prime = sum(len(d.B_H2) for d in derived)
    is_cip = all(len(c) == 1 for c in columns)
    if is_cip != (t == t_prime == k):
        raise ConsistencyError("singleton-column test disagrees with t = t' = k")
    p_sqf = poly_gcd(P, dP).degree == 0
    return StructureReport(n, k, s, tuple(columns), derived, _layout(columns, s), t, t_prime,
                           is_cip, p_sqf, "Certified", P)


# ---------------------------------------------------------------- rendering
def _scalar_text(x: ExactScalar | None):
    return None if x is None else render_scalar(x)


def _ball_json(b: ComplexBall) -> dict:
    return b.to_json()


def _report_to_json(r: StructureReport) -> dict:
    cols = []
    for c, d in zip(r.columns, r.derived):
        members = []
        for m in c.members:
            root = {"ball": _ball_json(m.root.ball)}
            if m.root.exact_value is not None:
                root["exact"] = _scalar_text(m.root.exact_value)
            value = {"ball": _ball_json(m.value_ball)}
            if m.exact_value is not None:
                value["exact"] = _scalar_text(m.exact_value)
            members.append({"root": root, "q": m.q, "value": value})
        value = {"ball": _ball_json(c.class_value)}
        if c.exact_value is not None:
            value["exact"] = _scalar_text(c.exact_value)
        cols.append({
            "value": value,
            "q_sum": c.q_sum,
            "members": members,
            "A": sorted(d.A),
            "A_H1": list(d.A_H1),
            "A_H2": list(d.A_H2),
            "B_H2": [c.members.index(m) for m in d.B_H2],
        })
    doc = {
        "schema": SCHEMA,
        "polynomial": render_poly(r.poly) if r.poly is not None else None,
        "field": r.poly.field.name if r.poly is not None else "QQ",
        "degree": r.n,
        "derivative_index": r.k,
        "s": r.s,
        "columns": cols,
        "rows": [[list(cell) for cell in row] for row in r.rows],
        "t": r.t,
        "t_prime": r.t_prime,
        "is_cip": r.is_cip,
        "p_squarefree": r.p_squarefree,
        "certification": r.certification,
    }
    return doc


def _scalar_from_text(text: str | None, field: NumberField | None):
    if text is None:
        return None
    x = parse_scalar(text)
    if field is not None and not x.is_rational() and x.field != field:
        x = move_to_subfield(x, field)
    return x


def report_from_json(doc: dict | str) -> StructureReport:
    """Inverse of :meth:`StructureReport.to_json`."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"expected schema {SCHEMA}")
    P = parse_poly(doc["polynomial"]) if doc.get("polynomial") else None
    field = P.field if P is not None else None
    columns = []
    derived = []
    for col in doc["columns"]:
        members = []
        for m in col["members"]:
            root_exact = _scalar_from_text(m["root"].get("exact"), field)
            root = RootEnclosure(ComplexBall.from_json(m["root"]["ball"]), m["q"], root_exact)
            members.append(CriticalPoint(root, m["q"], ComplexBall.from_json(m["value"]["ball"]),
                                         _scalar_from_text(m["value"].get("exact"), field)))
        members = tuple(members)
        vc = ValueClass(members, ComplexBall.from_json(col["value"]["ball"]), col["q_sum"],
                        _scalar_from_text(col["value"].get("exact"), field))
        columns.append(vc)
        derived.append(ColumnDerived(frozenset(col["A"]),
                                     tuple(m for m in members if m.q in set(col["A"])),
                                     tuple(col["A_H1"]), tuple(col["A_H2"]),
                                     tuple(members[i] for i in col["B_H2"])))
    rows = tuple(tuple(tuple(cell) for cell in row) for row in doc["rows"])
    return StructureReport(doc["degree"], doc["derivative_index"], doc["s"], tuple(columns),
                           tuple(derived), rows, doc["t"], doc["t_prime"], doc["is_cip"],
                           doc["p_squarefree"], doc["certification"], P)


def _point_label(m: CriticalPoint, digits: int = 6) -> str:
    if m.root.exact_value is not None:
        return render_scalar(m.root.exact_value)
    return _ball_label(m.root.ball, digits)


def _ball_label(b, digits: int = 6) -> str:
    re = float(b.mid_re)
    im = float(b.mid_im)
    if abs(im) < 10 ** -digits:
        return f"~{re:.{digits}g}"
    return f"~{re:.{digits}g}{im:+.{digits}g}i"


def render_tables(r: StructureReport, format: str = "text") -> str:
    """Point table and multiplicity table as aligned text, or the JSON report."""
    if format == "json":
        return json.dumps(r.to_json(), indent=2, sort_keys=False)
    if format != "text":
        raise ValueError("format must be 'text' or 'json'")
    ncol = len(r.columns)
    grid_p = [["." for _ in range(ncol)] for _ in range(r.s)]
    grid_q = [["." for _ in range(ncol)] for _ in range(r.s)]
    for li, row in enumerate(r.rows):
        for ci, mi in row:
            m = r.columns[ci].members[mi]
            grid_p[li][ci] = _point_label(m)
            grid_q[li][ci] = str(m.q)
    lines = []
    head = f"degree n = {r.n}, derivative index k = {r.k}, rows s = {r.s}"
    lines.append(head)
    if r.poly is not None:
        lines.append(f"P(z) = {render_poly(r.poly)}")
    for title, grid in (("critical points", grid_p), ("multiplicities", grid_q)):
        lines.append("")
        lines.append(title)
        if ncol == 0:
            lines.append("  (empty)")
            continue
        widths = [max(len(grid[li][ci]) for li in range(r.s)) for ci in range(ncol)]
        for li in range(r.s):
            cells = [grid[li][ci].center(widths[ci]) for ci in range(ncol)]
            lines.append(f"  S_{li + 1}: | " + " | ".join(cells) + " |")
    lines.append("")
    lines.append("Columns")
    for ci, (c, d) in enumerate(zip(r.columns, r.derived)):
        val = render_scalar(c.exact_value) if c.exact_value is not None else \
            _ball_label(c.class_value)
        bh2 = ", ".join(_point_label(m) for m in d.B_H2)
        lines.append(f"  C_{ci + 1}: value {val}; q = {list(c.qs)}; A = {sorted(d.A)}; "
                     f"A(H1) = {list(d.A_H1)}; A(H2) = {list(d.A_H2)}; B(H2) = {{{bh2}}}")
    lines.append("")
    lines.append(f"t = {r.t}, t' = {r.t_prime}, {'CIP' if r.is_cip else 'NCIP'}, "
                 f"P squarefree: {'yes' if r.p_squarefree else 'no'} [{r.certification}]")
    return "\n".join(lines)
