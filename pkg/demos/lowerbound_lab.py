"""Expander graph CNFs and the exponential lower bound they force.

Subfunction-productive clause sets certify that every ordering needs many
nodes. Prints a small sweep table comparing the certificate to exact minima.

Run with ``python3 demos/lowerbound_lab.py``.
"""

import random

from obddc import lowerbound as lb

print("n  c     greedy-bound  greedy-e(min over 20 orders)  sfw  min OBDD  2^sfw")
rng = random.Random(0)
for n in (4, 6, 8):
    G, cert, seed = lb.certified_expander(n, 3, seed=0)
    F = lb.graph_cnf(G)
    greedy = []
    for _ in range(20):
        sigma = list(range(1, n + 1))
        rng.shuffle(sigma)
        w = lb.greedy_productive(F, sigma)
        assert lb.validate_witness(F, w) and lb.verify_fooling_set(F, w)
        greedy.append(w.size)
    sfw, witness = lb.sfw_exact(F)
    size, best = lb.min_obdd_size_exact(F)
    print(f"{n:<2} {str(cert.c):<5} {lb.lemma_lower_bound(n, 3, cert.c):<13} {min(greedy):<29} {sfw:<4} {size:<9} {2 ** sfw}")

# A witness is a crossing matching; its fooling set of 2^e assignments gives
# pairwise different subfunctions.
G, _, _ = lb.certified_expander(8, 3, seed=0)
F = lb.graph_cnf(G)
_, w = lb.sfw_exact(F)
print(f"\nwitness on n=8: ordering {w.ordering}, prefix {w.prefix}, clauses {w.clauses}")
for f in lb.fooling_assignments(w):
    print("  ", {x: f[x] for x in w.a_vars})

# Larger instances only admit the greedy certificate.
for n in (12, 16):
    G, cert, _ = lb.certified_expander(n, 3, seed=0)
    F = lb.graph_cnf(G)
    w = lb.greedy_productive(F, tuple(range(1, n + 1)))
    print(f"n={n}: c={cert.c}, identity ordering has a productive set of size {w.size}, so any OBDD along it has >= {2 ** w.size} nodes")
