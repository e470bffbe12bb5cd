"""Graph CNFs, expanders and the subfunction-width lower bound on OBDD size.

A graph CNF has one positive 2-clause per edge of a graph without isolated
vertices; its variables are the graph's vertices.  Subfunction-productive
clause sets give fooling sets of prefix assignments, so ``2**sfw(F)`` lower
bounds the size of every OBDD for ``F``.  Everything here is exact and
guarded for desk-scale instances.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .cnf import Cnf, restrict
from .errors import GuardExceeded, ObddcError, check_guard, guard
from .orderings import Ordering, check_ordering, minimax_ordering

EXPANSION_GUARD = 20
PRODUCTIVE_CLAUSE_GUARD = 24
SFW_EXACT_GUARD = 8
MIN_OBDD_GUARD = 8
FOOLING_SET_GUARD = 16
PAIRING_RETRIES = 1000


class NotAGraphCnf(ObddcError, ValueError):
    pass


@dataclass(frozen=True)
class SimpleGraph:
    n: int
    edges: frozenset[tuple[int, int]]

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValueError(f"edge {u}-{v} outside vertices 1..{self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @classmethod
    def from_edges(cls, n: int, edges) -> SimpleGraph:
        return cls(n, frozenset(tuple(e) for e in edges))

    @property
    def adj(self) -> dict[int, set[int]]:
        adj = {v: set() for v in range(1, self.n + 1)}
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def max_degree(self) -> int:
        return max((len(nb) for nb in self.adj.values()), default=0)

    def isolated(self) -> list[int]:
        return [v for v, nb in self.adj.items() if not nb]


@dataclass(frozen=True)
class ExpanderCertificate:
    n: int
    d: int
    c: Fraction


@dataclass(frozen=True)
class LowerBoundWitness:
    ordering: Ordering
    prefix_len: int
    clauses: tuple[tuple[int, int], ...]

    @property
    def a_vars(self) -> tuple[int, ...]:
        return tuple(a for a, _ in self.clauses)

    @property
    def u_vars(self) -> tuple[int, ...]:
        return tuple(u for _, u in self.clauses)

    @property
    def size(self) -> int:
        return len(self.clauses)

    @property
    def prefix(self) -> frozenset[int]:
        return frozenset(self.ordering[: self.prefix_len])


def graph_cnf(G: SimpleGraph) -> Cnf:
    if G.isolated():
        raise NotAGraphCnf(f"isolated vertices {G.isolated()}")
    return Cnf([u, v] for u, v in sorted(G.edges))


def graph_of(F: Cnf) -> dict[int, set[int]]:
    """Adjacency of the graph underlying a graph CNF."""
    adj: dict[int, set[int]] = {}
    for c in F.clauses:
        if len(c) != 2 or c[0] < 0 or c[1] < 0:
            raise NotAGraphCnf(f"clause {list(c)} is not a positive 2-clause")
        u, v = c
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def is_graph_cnf(F: Cnf) -> bool:
    try:
        graph_of(F)
    except NotAGraphCnf:
        return False
    return True


# -------------------------------------------------------------- expanders


def neighbourhood(adj, W) -> set:
    W = set(W)
    return {v for w in W for v in adj[w]} - W


def expansion_constant(G: SimpleGraph) -> Fraction:
    """Exact minimum of ``|neigh(W)| / |W|`` over nonempty ``W`` with ``|W| <= n/2``."""
    check_guard(G.n, guard(EXPANSION_GUARD), "expansion enumeration")
    if G.n < 2:
        raise ValueError("expansion needs at least two vertices")
    adj = G.adj
    masks = [0] * (G.n + 1)
    for v, nb in adj.items():
        for w in nb:
            masks[v] |= 1 << w
    best = None
    for k in range(1, G.n // 2 + 1):
        for W in itertools.combinations(range(1, G.n + 1), k):
            wm = 0
            nm = 0
            for v in W:
                wm |= 1 << v
                nm |= masks[v]
            ratio = Fraction(bin(nm & ~wm).count("1"), k)
            if best is None or ratio < best:
                best = ratio
    return best


def certify_expander(G: SimpleGraph) -> ExpanderCertificate:
    return ExpanderCertificate(G.n, G.max_degree(), expansion_constant(G))


def gen_random_regular(n: int, d: int, seed: int, retries: int = PAIRING_RETRIES) -> SimpleGraph:
    """A simple ``d``-regular graph on ``1..n`` from the pairing model.

    Pairings with loops or repeated edges are rejected and redrawn.
    """
    if (n * d) % 2:
        raise ValueError(f"n*d = {n * d} is odd: no {d}-regular graph on {n} vertices")
    if not 0 <= d < n:
        raise ValueError(f"need 0 <= d < n, got d={d}, n={n}")
    rng = random.Random(seed)
    points = [v for v in range(1, n + 1) for _ in range(d)]
    for _ in range(retries):
        rng.shuffle(points)
        edges = set()
        ok = True
        for i in range(0, len(points), 2):
            u, v = points[i], points[i + 1]
            e = (min(u, v), max(u, v))
            if u == v or e in edges:
                ok = False
                break
            edges.add(e)
        if ok:
            return SimpleGraph(n, frozenset(edges))
    raise GuardExceeded(f"pairing model failed {retries} times for n={n}, d={d}")


def certified_expander(n: int, d: int, seed: int, attempts: int = 100):
    """First seed from ``seed`` on whose regular graph has positive expansion."""
    for s in range(seed, seed + attempts):
        G = gen_random_regular(n, d, s)
        cert = certify_expander(G)
        if cert.c > 0:
            return G, cert, s
    raise GuardExceeded(f"no connected {d}-regular graph on {n} vertices in {attempts} seeds")


# ------------------------------------------------- subfunction productivity


def validate_witness(F: Cnf, w: LowerBoundWitness) -> bool:
    """Check the productivity conditions of ``w`` against ``F``."""
    adj = graph_of(F)
    sigma = w.ordering
    if set(sigma) != set(adj) or not 0 <= w.prefix_len <= len(sigma):
        return False
    prefix = w.prefix
    clauses = set(F.clauses)
    for a, u in w.clauses:
        if a not in prefix or u in prefix or tuple(sorted((a, u))) not in clauses:
            return False
    if len(set(w.a_vars)) != w.size or len(set(w.u_vars)) != w.size:
        return False
    for i, (ai, _) in enumerate(w.clauses):
        for j, (aj, uj) in enumerate(w.clauses):
            if i == j:
                continue
            if tuple(sorted((ai, aj))) in clauses or tuple(sorted((ai, uj))) in clauses:
                return False
    return True


def _conflicts(adj, cands: list[tuple[int, int]]) -> list[int]:
    conf = [0] * len(cands)
    for i, (ai, ui) in enumerate(cands):
        for j, (aj, uj) in enumerate(cands):
            if i != j and (
                ai == aj or ui == uj or aj in adj[ai] or uj in adj[ai] or ui in adj[aj]
            ):
                conf[i] |= 1 << j
    return conf


def _max_independent(conf: list[int]) -> int:
    """Maximum independent set of the conflict graph, as a bitmask."""
    best = 0
    best_size = 0

    def rec(chosen: int, size: int, cand: int) -> None:
        nonlocal best, best_size
        if size + bin(cand).count("1") <= best_size:
            return
        if not cand:
            best, best_size = chosen, size
            return
        low = cand & -cand
        i = low.bit_length() - 1
        rec(chosen | low, size + 1, cand & ~conf[i] & ~low)
        rec(chosen, size, cand & ~low)

    rec(0, 0, (1 << len(conf)) - 1)
    return best


def _productive_for_set(adj, prefix: frozenset) -> list[tuple[int, int]]:
    cands = sorted((a, u) for a in prefix for u in adj[a] if u not in prefix)
    if not cands:
        return []
    chosen = _max_independent(_conflicts(adj, cands))
    return [c for i, c in enumerate(cands) if chosen >> i & 1]


def max_productive_set(F: Cnf, sigma, prefix_len: int) -> LowerBoundWitness:
    """Largest subfunction-productive clause set for the given prefix (branch and bound)."""
    adj = graph_of(F)
    check_guard(len(F), guard(PRODUCTIVE_CLAUSE_GUARD), "productive-set clause count")
    sigma = check_ordering(sigma, F.vars)
    if not 0 <= prefix_len <= len(sigma):
        raise ValueError(f"prefix length {prefix_len} outside 0..{len(sigma)}")
    chosen = _productive_for_set(adj, frozenset(sigma[:prefix_len]))
    w = LowerBoundWitness(sigma, prefix_len, tuple(chosen))
    if not validate_witness(F, w):
        raise AssertionError("branch and bound produced an invalid witness")
    return w


def sfw_exact(F: Cnf) -> tuple[int, LowerBoundWitness]:
    """Subfunction width: min over orderings of the max over prefixes."""
    adj = graph_of(F)
    variables = tuple(sorted(adj))
    check_guard(len(variables), guard(SFW_EXACT_GUARD), "exact subfunction width")
    check_guard(len(F), guard(PRODUCTIVE_CLAUSE_GUARD), "productive-set clause count")

    def cost(mask: int) -> int:
        prefix = frozenset(v for i, v in enumerate(variables) if mask >> i & 1)
        return len(_productive_for_set(adj, prefix))

    value, sigma = minimax_ordering(variables, cost)
    for j in range(1, len(sigma) + 1):
        w = max_productive_set(F, sigma, j)
        if w.size == value:
            return value, w
    return value, LowerBoundWitness(sigma, len(sigma), ())


def greedy_productive(F: Cnf, sigma) -> LowerBoundWitness:
    """Greedy productive set for the prefix of length ``floor(n/2)``.

    Repeatedly take the least cut edge ``(w, w')`` between the available
    prefix vertices and their available outside neighbours, then discard
    ``neigh(w)`` and the prefix neighbours of ``w'``.
    """
    adj = graph_of(F)
    sigma = check_ordering(sigma, F.vars)
    p = len(sigma) // 2
    prefix = set(sigma[:p])
    avail_a = set(prefix)
    avail_u = neighbourhood(adj, prefix)
    chosen = []
    while True:
        cut = [(a, u) for a in sorted(avail_a) for u in sorted(adj[a]) if u in avail_u]
        if not cut:
            break
        a, u = cut[0]
        chosen.append((a, u))
        avail_a -= adj[a]
        avail_u -= adj[a]
        avail_a -= adj[u] & prefix
        avail_a.discard(a)
    return LowerBoundWitness(sigma, p, tuple(chosen))


def lemma_lower_bound(n: int, d: int, c: Fraction) -> int:
    """``ceil(min(1, c) * n / (8 d))``: the guaranteed greedy size on an expander."""
    return math.ceil(min(Fraction(1), Fraction(c)) * n / (8 * d))


# ------------------------------------------------------------ fooling sets


def _monotone_normal_form(G: Cnf):
    if G.has_empty_clause:
        return "0"
    sets = sorted({frozenset(c) for c in G.clauses}, key=len)
    kept = []
    for s in sets:
        if not any(k <= s for k in kept):
            kept.append(s)
    return frozenset(kept)


def fooling_assignments(w: LowerBoundWitness):
    """The assignments of the prefix that are 1 outside the ``a`` variables."""
    rest = {v: 1 for v in w.prefix if v not in set(w.a_vars)}
    for bits in itertools.product((0, 1), repeat=w.size):
        f = dict(rest)
        f.update(zip(w.a_vars, bits))
        yield f


def separating_completion(F: Cnf, w: LowerBoundWitness, i: int) -> dict[int, int]:
    """Assignment of the suffix that is 0 exactly on ``u_i``."""
    return {v: int(v != w.u_vars[i]) for v in F.vars - w.prefix}


def verify_fooling_set(F: Cnf, w: LowerBoundWitness) -> bool:
    """Are the ``2^e`` subfunctions induced by the fooling assignments pairwise distinct?

    Subfunctions of a monotone CNF are compared through their
    subsumption-free clause sets, which are canonical for monotone functions.
    """
    graph_of(F)
    check_guard(w.size, guard(FOOLING_SET_GUARD), "fooling set size")
    seen = set()
    for f in fooling_assignments(w):
        form = _monotone_normal_form(restrict(F, f))
        if form in seen:
            return False
        seen.add(form)
    return True


# --------------------------------------------------------- minimum OBDDs


def truth_table(F: Cnf, variables) -> np.ndarray:
    """Boolean array with one axis per variable (in the given order)."""
    variables = list(variables)
    idx = {x: i for i, x in enumerate(variables)}
    n = len(variables)
    grid = np.indices((2,) * n, dtype=np.int8) if n else np.zeros((0,), np.int8)
    table = np.ones((2,) * n, dtype=bool)
    for c in F.clauses:
        sat = np.zeros((2,) * n, dtype=bool)
        for lit in c:
            axis = grid[idx[abs(lit)]]
            sat |= axis == (1 if lit > 0 else 0)
        table &= sat
    return table


def min_obdd_size_exact(F: Cnf) -> tuple[int, Ordering]:
    """Smallest reduced OBDD over all orderings, with the lexicographically least optimum.

    The reduced diagram for an ordering has, per variable ``x``, one node for
    each distinct subfunction after the earlier variables that depends on
    ``x``.  That count depends only on the set of earlier variables, so the
    optimum is a shortest path through the subset lattice.
    """
    variables = tuple(sorted(F.vars))
    n = len(variables)
    check_guard(n, guard(MIN_OBDD_GUARD), "exact minimum OBDD size")
    table = truth_table(F, variables)
    if table.all() or not table.any():
        return 1, variables

    def nodes(mask: int, i: int) -> int:
        before = [k for k in range(n) if mask >> k & 1]
        after = [k for k in range(n) if not mask >> k & 1 and k != i]
        arr = table.transpose(before + [i] + after).reshape(1 << len(before), 2, -1)
        dep = (arr[:, 0, :] != arr[:, 1, :]).any(axis=1)
        if not dep.any():
            return 0
        rows = arr[dep].reshape(int(dep.sum()), -1)
        return int(np.unique(rows, axis=0).shape[0])

    full = (1 << n) - 1
    rest: dict[int, int] = {full: 0}
    step: dict[tuple[int, int], int] = {}

    def remaining(mask: int) -> int:
        got = rest.get(mask)
        if got is None:
            best = None
            for i in range(n):
                if not mask >> i & 1:
                    cost = step[mask, i] = nodes(mask, i)
                    total = cost + remaining(mask | 1 << i)
                    if best is None or total < best:
                        best = total
            got = rest[mask] = best
        return got

    total = remaining(0)
    order = []
    mask = 0
    while mask != full:
        for i in range(n):
            if not mask >> i & 1 and step[mask, i] + rest[mask | 1 << i] == rest[mask]:
                order.append(variables[i])
                mask |= 1 << i
                break
    return total + 2, tuple(order)


# ------------------------------------------------------------------- I/O


def write_edges(G: SimpleGraph) -> str:
    lines = [f"{G.n} {len(G.edges)}"] + [f"{u} {v}" for u, v in sorted(G.edges)]
    return "\n".join(lines) + "\n"


def read_edges(text: str) -> SimpleGraph:
    rows = [line.split() for line in text.splitlines() if line.strip() and not line.startswith("c")]
    if not rows or len(rows[0]) != 2:
        raise ObddcError("edge list must start with an 'n m' header")
    try:
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(u), int(v)) for u, v in rows[1:]]
    except ValueError:
        raise ObddcError("edge list entries must be integers") from None
    if len(edges) != m:
        raise ObddcError(f"header declares {m} edges, found {len(edges)}")
    return SimpleGraph.from_edges(n, edges)


SWEEP_FIELDS = ["n", "d", "c", "sfw_lb", "sfw_exact", "min_obdd", "2^sfw"]


def sweep_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SWEEP_FIELDS, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: ("" if row.get(k) is None else str(row.get(k))) for k in SWEEP_FIELDS})
    return buf.getvalue()
