"""Compile a small CNF, inspect its levels, then reduce it.

Run with ``python3 demos/compile_walkthrough.py``.
"""

import numpy as np

from obddc import Strategy, compile_cnf, compile_with_ordering, parse_dimacs, to_text
from obddc.obdd import all_assignments, evaluate, obdd_size
from obddc.widths import stw_exact, stw_for_ordering

TEXT = """c a chain of implications with one side condition
p cnf 5 5
-1 2 0
-2 3 0
-3 4 0
-4 5 0
1 5 0
"""

F = parse_dimacs(TEXT)
print(f"formula: {len(F.vars)} variables, {len(F)} clauses")

# Every ordering gives a correct diagram, but the widths vary a lot.
for sigma in [(1, 2, 3, 4, 5), (1, 3, 5, 2, 4), (5, 1, 4, 2, 3)]:
    D, report = compile_with_ordering(F, sigma)
    profile = stw_for_ordering(F, sigma)
    print(
        f"order {sigma}: level widths {report.level_widths}, "
        f"subterms per prefix {list(profile.per_prefix)}, "
        f"size {report.size_before_reduce} -> {report.size_after_reduce}"
    )

w, best = stw_exact(F)
print(f"smallest possible maximum subterm count: {w}, reached by {best}")

# Let the default strategy pick an ordering and check it against a truth table.
D, report = compile_cnf(F, Strategy("auto"))
print(f"auto picked {report.strategy} with ordering {report.ordering}; candidates {report.extra['auto_candidates']}")
variables = sorted(F.vars)
models = np.array([evaluate(D, f) for f in all_assignments(variables)])
print(f"{int(models.sum())} models out of {models.size} assignments; reduced size {obdd_size(D)}")
print("text serialization:")
print(to_text(D))
