"""Embedded regression corpus of worked examples.

Expected values are exact strings in the input grammar.  ``run_corpus``
re-analyzes every entry and reports field-by-field mismatches.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

from .algebra.parse import parse_poly, parse_scalar
from .algebra.poly import derivative, poly_gcd
from .decide import Query, decide, replay_certificate, urs_check
from .identity import verify_pair
from .structure import build_structure

__all__ = ["CorpusCase", "CorpusEntry", "CORPUS", "family_poly", "run_case", "run_corpus"]


@dataclass(frozen=True)
class CorpusCase:
    label: str
    source: str
    expected: dict


@dataclass(frozen=True)
class CorpusEntry:
    id: str
    cases: tuple
    note: str = ""


def family_poly(n: int, m: int, a: str = "2", c: str = "1") -> str:
    """Source text of z^n + a z^(n-m) + (a^2/4) z^(n-2m) + c.

    Requires gcd(m, n) = 1 and n >= 2m + 3; the constant c must leave P with
    simple zeros (this excludes c = 0 and the finitely many bad values).
    """
    if gcd(m, n) != 1:
        raise ValueError("family needs gcd(m, n) = 1")
    if n < 2 * m + 3:
        raise ValueError("family needs n >= 2m + 3")
    A = parse_scalar(a)
    if A.is_zero():
        raise ValueError("family needs a != 0")
    src = f"z^{n} + ({a}) z^{n - m} + ({a})^2/4 z^{n - 2 * m} + ({c})"
    P = parse_poly(src)
    if poly_gcd(P, derivative(P)).degree > 0:
        raise ValueError("this constant gives a polynomial with a multiple zero")
    return src


EX4_1 = ("1/6 z^6 - 186/53 z^5 + 1565/53 z^4 - 6630/53 z^3 + 28967/106 z^2 - 14460/53 z + 1")
EX4_2 = ("1/7 z^7 - 23105/8379 z^6 + 19279/931 z^5 - 4285/57 z^4 + 122428/931 z^3"
         " - 253880/2793 z^2 + 1")
EX4_3 = ("z^7/7 - 4071 z^6/1316 + 1277 z^5/47 - 81325 z^4/658 + 101342 z^3/329"
         " - 540647 z^2/1316 + 90030 z/329 + 1")
EX4_4 = "z^6/6 - (6/5 + 2i/5) z^5 + (5/2 + 3i) z^4 - 22i/3 z^3 - (11/2 - 6i) z^2 + 6z"
EX4_6 = ("1/6 z^6 + (-11/20 + 1/4 i sqrt(19/5)) z^5 + (-9/16 - i sqrt(95)/16) z^4"
         " + (11/3 - i sqrt(95)/3) z^3 + (-7/2 + i sqrt(95)/2) z^2 + 1")
EX4_7_P1 = "z^8 (z-1)^5 (169 z + 8 i sqrt(35) - 107)/2366 + 1"
EX4_7_P2 = "z^11 (z-1)^7 (162 z + i sqrt(1463) - 101)/3078 + 1"

CM = ("Complex", "Meromorphic")
CE = ("Complex", "Entire")
PM = ("Padic", "Meromorphic")


def _family_case(label, n, m, a="2", c="1"):
    return CorpusCase(label, family_poly(n, m, a, c),
                      {"n": n, "k": 2 * m + 1, "t": m + 1, "t_prime": m + 1, "is_cip": False,
                       "same_value": [["0"]],
                       "verdicts": {PM: ("Proven", "Thm3_3")}})


CORPUS = (
    CorpusEntry("ex4_1", (CorpusCase("P", EX4_1, {
        "n": 6, "k": 5, "t": 3, "t_prime": 3, "is_cip": False,
        "values": {"1": "-15497/159", "241/53": "-5030097474637/66493083387",
                   "3": "-3979/53", "4": "-12041/159", "5": "-12041/159"},
        "verdicts": {PM: ("Proven", "Thm3_3"), CM: ("Proven", "Thm3_6")},
    }),)),
    CorpusEntry("ex4_2", (CorpusCase("P", EX4_2, {
        "n": 7, "k": 6, "t": 4, "t_prime": 4, "is_cip": False,
        "values": {"0": "1", "1": "-129701/8379", "2": "-10691/1197",
                   "12694/2793": "-858908850511840736130799715/27842988283701433932953997",
                   "4": "-263621/8379", "5": "-263621/8379"},
        "verdicts": {CM: ("Proven", "Thm3_4"), PM: ("Proven", "Thm3_3")},
    }),)),
    CorpusEntry("ex4_3", (CorpusCase("P", EX4_3, {
        "n": 7, "k": 5, "t": 3, "t_prime": 3, "is_cip": False,
        "values": {"1": "23845/329",
                   "3001/658": "66183058741702202837617/747668856695865052928",
                   "3": "4223/47", "4": "4147/47", "5": "4147/47"},
        "q": {"1": 2},
        "verdicts": {CM: ("Proven", "Thm3_5"), PM: ("Proven", "Thm3_3")},
    }),)),
    CorpusEntry("ex4_4", (CorpusCase("P", EX4_4, {
        "n": 6, "k": 4, "t": 3, "t_prime": 4, "is_cip": False, "p_squarefree": True,
        "values": {"i": "9/10 + 9i/5", "3": "9/10 + 9i/5", "1": "59/30 + 19i/15",
                   "2": "34/15 + 8i/15"},
        "q": {"i": 2},
        "verdicts": {CM: ("Proven", "Thm3_4"), PM: ("Proven", "Thm3_3")},
    }),)),
    CorpusEntry("ex4_5", (_family_case("P", 9, 2, "-4", "3"),),
                "family instance with n = 9, m = 2, a = -4, c = 3"),
    CorpusEntry("ex4_6", (CorpusCase("P", EX4_6, {
        "n": 6, "k": 5, "t": 3, "t_prime": 3, "is_cip": False,
        "same_value": [["-2", "7/4 - i sqrt(95)/4"]],
        "b_h2": [["0"], ["1"], ["2"]],
        "verdicts": {CM: ("Proven", "Thm3_6"), PM: ("Proven", "Thm3_3")},
    }),)),
    CorpusEntry("ex4_7", (
        CorpusCase("P1", EX4_7_P1, {
            "n": 14, "k": 3, "t": 2, "t_prime": 3, "is_cip": False,
            "q": {"0": 7, "1": 4, "56/91 - 2 i sqrt(35)/91": 2},
            "b_h2": [["0", "1"], ["56/91 - 2 i sqrt(35)/91"]],
            "verdicts": {CM: ("Proven", "Thm3_7"), PM: ("Proven", "Thm3_7")},
            "band": ["3 < 4", "4 < 5/2 + 1/2*sqrt(17)"],
            "urs": {"p": 3, "m": [8, 5, 1], "condition_hit": "ii", "conclusion": "URSM",
                    "cardinality": 14},
        }),
        CorpusCase("P2", EX4_7_P2, {
            "n": 19, "k": 3, "t": 2, "t_prime": 3, "is_cip": False,
            "q": {"0": 10, "1": 6, "209/342 - i sqrt(1463)/342": 2},
            "b_h2": [["0", "1"], ["209/342 - i sqrt(1463)/342"]],
            "verdicts": {CM: ("Proven", "Thm3_7"), PM: ("Proven", "Thm3_7")},
            "band": ["9/2 < 6", "6 < 4 + sqrt(14)"],
            "urs": {"p": 3, "m": [11, 7, 1], "condition_hit": "ii", "conclusion": "URSM-IM",
                    "cardinality": 19},
        }),
    )),
    CorpusEntry("tt7_pos", (CorpusCase("P", "z^4 + z", {
        "n": 4, "k": 3, "is_cip": True,
        "verdicts": {CE: ("Proven", "Thm_tt7"), CM: ("Refuted", "ThmC")},
    }),)),
    CorpusEntry("tt7_neg", (CorpusCase("P", "z^4 - 2z^2", {
        "n": 4, "k": 3, "is_cip": False,
        "values": {"1": "-1", "-1": "-1", "0": "0"},
        "verdicts": {CE: ("Refuted", "Thm_tt7"), CM: ("Refuted", "ThmC")},
    }),)),
    CorpusEntry("tt8_w", (CorpusCase("P", "z^5 + 2z^4 + z^3 + 1", {
        "n": 5, "is_cip": False,
        "verdicts": {CM: ("Refuted", "Thm_tt8")},
        "witness": True,
    }),)),
    CorpusEntry("family_m2_n7", (_family_case("P", 7, 2),)),
    CorpusEntry("family_m3_n10", (_family_case("P", 10, 3),)),
)


# ------------------------------------------------------------------ checks
def _find_point(r, text):
    x = parse_scalar(text)
    for ci, col in enumerate(r.columns):
        for m in col.members:
            if m.point is not None and m.point == x:
                return ci, m
    return None, None


def run_case(case: CorpusCase, *, precision: int = 128, max_precision: int = 8192) -> dict:
    """Analyze one case; returns {"label", "mismatches", "seconds", "verdicts"}."""
    t0 = time.perf_counter()
    exp = case.expected
    bad: list = []

    def check(name, got, want):
        if got != want:
            bad.append(f"{name}: expected {want!r}, got {got!r}")

    P = parse_poly(case.source)
    r = build_structure(P, precision=precision, max_precision=max_precision)
    for key in ("n", "k", "t", "t_prime", "is_cip", "p_squarefree"):
        if key in exp:
            check(key, getattr(r, key), exp[key])
    for pt, val in exp.get("values", {}).items():
        ci, m = _find_point(r, pt)
        if m is None:
            bad.append(f"critical point {pt} not found as an exact root")
            continue
        got = r.columns[ci].exact_value
        if got is None or got != parse_scalar(val):
            bad.append(f"P({pt}): expected {val}, got {got}")
    for pt, q in exp.get("q", {}).items():
        _, m = _find_point(r, pt)
        check(f"q({pt})", m.q if m else None, q)
    for group in exp.get("same_value", []):
        cols = {_find_point(r, p)[0] for p in group}
        if None in cols or len(cols) != 1:
            bad.append(f"points {group} are not in one column")
        elif len(group) == 1 and len(r.columns[cols.pop()]) < 2:
            bad.append(f"point {group[0]} does not share its value")
    if "b_h2" in exp:
        got = sorted(sorted(str(m.point) for m in d.B_H2) for d in r.derived if d.B_H2)
        want = sorted(sorted(str(parse_scalar(p)) for p in g) for g in exp["b_h2"])
        check("B_H2", got, want)

    verdicts = {}
    for (f, c), (status, theorem) in exp.get("verdicts", {}).items():
        v = decide(P, r, Query.of(f, c), precision=precision, max_precision=max_precision)
        verdicts[f"{f}/{c}"] = v
        check(f"verdict {f}/{c}", (v.status.value, v.theorem), (status, theorem))
        if not replay_certificate(v.to_json()):
            bad.append(f"certificate replay failed for {f}/{c}")
        if exp.get("witness") and v.witness is not None:
            pc = verify_pair(P, v.witness.f, v.witness.g)
            check("witness", bool(pc), True)
        elif exp.get("witness") and (f, c) == CM:
            bad.append("expected a witness")
        if "band" in exp and v.theorem == "Thm3_7" and (f, c) == CM:
            values = [cond.value for cond in v.certificate if "q_3" in cond.name]
            check("band", values, exp["band"])
    if "urs" in exp:
        v = verdicts.get("Complex/Meromorphic") or decide(P, r, Query())
        u = urs_check(P, r, v)
        want = exp["urs"]
        check("urs", {"p": u.p, "m": list(u.m_list), "condition_hit": u.condition_hit,
                      "conclusion": u.conclusion, "cardinality": u.cardinality}, want)
    return {"label": case.label, "mismatches": bad, "seconds": time.perf_counter() - t0,
            "verdicts": {k: v.to_json() for k, v in verdicts.items()},
            "structure": r.to_json()}


def _run_entry(args):
    entry, precision, max_precision = args
    results = [run_case(c, precision=precision, max_precision=max_precision) for c in entry.cases]
    return entry.id, results


def run_corpus(filter: str | None = None, jobs: int = 1, *, precision: int = 128,
               max_precision: int = 8192) -> list:
    """Run every entry whose id contains ``filter``; results in corpus order."""
    entries = [e for e in CORPUS if not filter or filter in e.id]
    work = [(e, precision, max_precision) for e in entries]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_entry, work))
    return [_run_entry(w) for w in work]
