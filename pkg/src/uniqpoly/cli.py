"""Command-line front end.

Exit codes: 0 decided or pass, 2 undecided or inapplicable, 3 input error,
4 precision exhausted, 1 internal inconsistency or corpus mismatch.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra.parse import ParseError, parse_poly, parse_rational_function
from .decide import Query, Status, decide, urs_check
from .identity import verify_pair
from .roots import DEFAULT_MAX_PRECISION, DEFAULT_PRECISION, PrecisionExhausted
from .structure import ConsistencyError, build_structure, render_tables

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_UNDECIDED = 2
EXIT_INPUT = 3
EXIT_PRECISION = 4


def _read_input(args) -> str:
    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            return fh.read().strip()
    if args.expr is None:
        raise ParseError("no polynomial given (positional argument or --file)")
    return args.expr


def _emit(doc, fmt: str, text: str) -> None:
    if fmt == "json":
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        print(text)


def _analyze(args, P):
    return build_structure(P, precision=args.precision, max_precision=args.max_precision)


def cmd_analyze(args) -> int:
    P = parse_poly(_read_input(args))
    r = _analyze(args, P)
    print(render_tables(r, args.format))
    return EXIT_OK


def _verdict_text(v) -> str:
    head = f"{v.status.value}"
    if v.theorem:
        head += f" ({v.theorem})"
    lines = [f"{head}  [{v.query.field.value}, {v.query.function_class.value}]"]
    for c in v.certificate:
        mark = {True: "ok", False: "no", None: "??"}[c.ok]
        lines.append(f"  [{mark}] {c.name}: {c.value}")
    if v.witness is not None:
        w = v.witness
        lines.append(f"  witness in {w.f.var} ({w.note}):")
        lines.append(f"    f = {w.f}")
        lines.append(f"    g = {w.g}")
    if v.status is Status.UNKNOWN:
        lines.append("  attempted:")
        for th, cond, note in v.attempts:
            why = f"{cond.name}: {cond.value}" if cond is not None else "no failing condition"
            lines.append(f"    {th}: {why}" + (f" ({note})" if note else ""))
    for n in v.notes:
        lines.append(f"  note: {n}")
    return "\n".join(lines)


def cmd_decide(args) -> int:
    P = parse_poly(_read_input(args))
    r = _analyze(args, P)
    v = decide(P, r, Query.of(args.field, args.function_class),
               precision=args.precision, max_precision=args.max_precision)
    _emit(v.to_json(), args.format, _verdict_text(v))
    return EXIT_UNDECIDED if v.status is Status.UNKNOWN else EXIT_OK


def cmd_urs(args) -> int:
    P = parse_poly(_read_input(args))
    r = _analyze(args, P)
    v = decide(P, r, Query(), precision=args.precision, max_precision=args.max_precision)
    u = urs_check(P, r, v)
    if not u.applicable:
        text = f"inapplicable: {u.reason}"
    else:
        conds = ", ".join(f"({k}) {'yes' if ok else 'no'}" for k, ok in u.conditions)
        text = "\n".join([
            f"n = {u.n}, k = {u.k}, p = {u.p}, m = {list(u.m_list)}",
            f"conditions: {conds}",
            f"condition hit: {u.condition_hit or 'none'}",
            f"n >= 2k+7: {u.ursm_threshold_met}; n >= 2k+13: {u.ursm_im_threshold_met}",
            f"uniqueness for meromorphic functions over C: {u.upm_status}",
            f"conclusion: {u.conclusion}" + (f" (cardinality {u.cardinality})" if u.cardinality else ""),
        ] + [f"note: {n}" for n in u.notes])
    _emit(u.to_json(), args.format, text)
    return EXIT_OK if u.conclusion in ("URSM", "URSM-IM") else EXIT_UNDECIDED


def cmd_verify_pair(args) -> int:
    P = parse_poly(args.P)
    f = parse_rational_function(args.f, args.var)
    g = parse_rational_function(args.g, args.var)
    pc = verify_pair(P, f, g)
    doc = {"holds": pc.holds, "distinct": pc.distinct, "numerator_degree": pc.numerator_degree}
    text = (f"P(f) = P(g): {pc.holds}\nf != g: {pc.distinct}\n"
            f"numerator degree before reduction: {pc.numerator_degree}")
    _emit(doc, args.format, text)
    return EXIT_OK if pc else EXIT_UNDECIDED


def cmd_corpus(args) -> int:
    from .corpus import run_corpus

    results = run_corpus(args.filter, args.jobs, precision=args.precision,
                         max_precision=args.max_precision)
    failed = 0
    lines, doc = [], []
    for eid, cases in results:
        for res in cases:
            ok = not res["mismatches"]
            failed += not ok
            lines.append(f"{'PASS' if ok else 'FAIL'} {eid}/{res['label']} ({res['seconds']:.2f}s)")
            lines.extend(f"    {m}" for m in res["mismatches"])
            # timings are left out of the JSON so repeated runs are byte-identical
            doc.append({"id": eid, "case": res["label"], "pass": ok,
                        "mismatches": res["mismatches"], "structure": res["structure"],
                        "verdicts": res["verdicts"]})
    total = sum(len(c) for _, c in results)
    lines.append(f"{total - failed}/{total} cases passed")
    _emit({"results": doc, "passed": total - failed, "total": total}, args.format,
          "\n".join(lines))
    return EXIT_OK if failed == 0 and total > 0 else EXIT_INTERNAL


class _Parser(argparse.ArgumentParser):
    """Usage errors are input errors (exit 3), not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="uniqpoly",
                                description="Critical-value structure and uniqueness verdicts "
                                            "for polynomials with algebraic coefficients.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("expr", nargs="?", help="polynomial in z, e.g. 'z^5 + 2z^4 + z^3 + 1'")
            sp.add_argument("--file", help="read the polynomial from a file")
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--precision", type=int, default=DEFAULT_PRECISION,
                        help="starting precision in bits (default %(default)s)")
        sp.add_argument("--max-precision", type=int, default=DEFAULT_MAX_PRECISION,
                        help="precision ceiling in bits (default %(default)s)")

    sp = sub.add_parser("analyze", help="critical points, tables and H sets")
    common(sp)
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("decide", help="uniqueness verdict with certificate")
    common(sp)
    sp.add_argument("--field", choices=("complex", "padic"), default="complex")
    sp.add_argument("--class", dest="function_class", choices=("meromorphic", "entire"),
                    default="meromorphic")
    sp.set_defaults(func=cmd_decide)

    sp = sub.add_parser("urs", help="unique range set test for the zero set")
    common(sp)
    sp.set_defaults(func=cmd_urs)

    sp = sub.add_parser("verify-pair", help="check P(f) = P(g) for rational functions f, g")
    sp.add_argument("P")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument("--var", default="u", help="variable of f and g (default %(default)s)")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    sp.set_defaults(func=cmd_verify_pair)

    sp = sub.add_parser("corpus", help="run the embedded regression corpus")
    common(sp, with_input=False)
    sp.add_argument("--filter", help="only entries whose id contains this text")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PrecisionExhausted as exc:
        print(f"precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except ConsistencyError as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
