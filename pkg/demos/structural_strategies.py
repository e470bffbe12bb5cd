"""Three structural routes to a good ordering, each with the bound it guarantees.

Run with ``python3 demos/structural_strategies.py``.
"""

import random

from obddc import Cnf, Strategy, compile_cnf
from obddc.cnf import cnf_size
from obddc.widths import stw_for_ordering

rng = random.Random(1)


def signed(vs):
    return [v if rng.random() < 0.5 else -v for v in vs]


# Interval clauses: every clause is a window of consecutive variables, shuffled ids.
perm = list(range(1, 21))
rng.shuffle(perm)
windows = []
for _ in range(15):
    i = rng.randrange(18)
    windows.append(signed(perm[i : i + rng.randint(2, 3)]))
convex = Cnf(windows)
D, r = compile_cnf(convex, Strategy("convex"))
print("interval clauses")
print(f"  recovered ordering {r.ordering}")
print(f"  widest level {max(r.level_widths)}, guaranteed at most {r.extra['convex_bound']}")

# A tree-shaped incidence graph: low pathwidth, so the forget ordering keeps widths small.
tree = Cnf([signed([i, 2 * i, 2 * i + 1]) for i in range(1, 8)])
D, r = compile_cnf(tree, Strategy("pathwidth"))
stw = stw_for_ordering(tree, r.ordering).width
print("tree-shaped formula")
print(f"  path decomposition width {r.extra['path_width']}, stw along forget ordering {stw}, bound {r.extra['forget_bound']}")

# Two triangles tied together: deleting one vertex from each cycle leaves a forest.
cycles = Cnf([[1, 2], [2, 3], [-1, 3], [4, 5], [5, -6], [4, 6], [3, 4, 7]])
D, r = compile_cnf(cycles, Strategy("deletion", max_k=3))
print("formula with two cycles")
print(f"  deleted {r.extra['deletion_set']} (k={r.extra['k']})")
print(f"  stw(F) = {r.extra['stw_full']} <= 2^k * stw(remainder) = {2 ** r.extra['k'] * r.extra['stw_remainder']}")

for name, F in [("interval", convex), ("tree", tree), ("cycles", cycles)]:
    D, r = compile_cnf(F)
    print(f"auto on {name}: {r.strategy}, width {r.width}, size {r.size_after_reduce}, size(F)={cnf_size(F)}")
