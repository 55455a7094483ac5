"""Walk through the embedded corpus polynomials.

For each one we print the critical point table, the invariants t and t',
and the verdict for meromorphic functions over C and over a non-archimedean
field.  Run with ``python demos/01_worked_polynomials.py``.
"""

from uniqpoly.algebra.parse import parse_poly
from uniqpoly.corpus import CORPUS
from uniqpoly.decide import Query, decide
from uniqpoly.structure import build_structure, render_tables

QUERIES = [Query.of("complex", "meromorphic"), Query.of("padic", "meromorphic")]

for entry in CORPUS:
    if not entry.id.startswith("ex4"):
        continue
    for case in entry.cases:
        P = parse_poly(case.source)
        r = build_structure(P)
        print("=" * 72)
        print(f"{entry.id}/{case.label}")
        print(render_tables(r))
        for q in QUERIES:
            v = decide(P, r, q)
            print(f"  {q.field.value:8s} {q.function_class.value:12s} -> "
                  f"{v.status.value} {v.theorem or ''}")
