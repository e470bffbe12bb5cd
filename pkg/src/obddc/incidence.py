"""Incidence graphs of CNFs and structural recognition on them.

Vertices are tagged tuples: ``("v", x)`` for variable ``x`` and ``("c", j)``
for the clause at index ``j`` of ``F.clauses``.  Tuples sort clauses before
variables, which fixes every lexicographic tie-break below.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from . import graphs
from .cnf import Cnf
from .errors import GuardExceeded, OrderingError
from .orderings import Ordering

DEFAULT_FVS_BUDGET = 20


def var_node(x: int) -> tuple[str, int]:
    return ("v", x)


def clause_node(j: int) -> tuple[str, int]:
    return ("c", j)


@dataclass(frozen=True)
class IncidenceGraph:
    cnf: Cnf
    var_nodes: tuple[int, ...]
    clause_nodes: tuple[int, ...]
    adj: dict

    def degree(self, vertex) -> int:
        return len(self.adj[vertex])

    def clause_vars(self, j: int) -> frozenset[int]:
        return frozenset(abs(lit) for lit in self.cnf.clauses[j])

    @property
    def vertices(self) -> list:
        return sorted(self.adj)


def build_incidence(F: Cnf) -> IncidenceGraph:
    adj: dict = {var_node(x): set() for x in sorted(F.vars)}
    for j, c in enumerate(F.clauses):
        cv = clause_node(j)
        adj[cv] = set()
        for lit in c:
            adj[cv].add(var_node(abs(lit)))
            adj[var_node(abs(lit))].add(cv)
    return IncidenceGraph(F, tuple(sorted(F.vars)), tuple(range(len(F))), adj)


def max_degree(G) -> int:
    adj = G.adj if hasattr(G, "adj") else G
    return max((len(nb) for nb in adj.values()), default=0)


# ---------------------------------------------------------------- convexity


def verify_convexity_witness(G: IncidenceGraph, sigma: Sequence[int]) -> bool:
    """True iff every clause's variable set is an interval of ``sigma``."""
    if len(set(sigma)) != len(sigma) or set(sigma) != set(G.var_nodes):
        raise OrderingError("ordering must cover exactly the variables of G")
    pos = {x: i for i, x in enumerate(sigma)}
    for j in G.clause_nodes:
        ps = [pos[x] for x in G.clause_vars(j)]
        if ps and max(ps) - min(ps) + 1 != len(ps):
            return False
    return True


def _refine(parts: list[frozenset], row: frozenset) -> list[frozenset] | None:
    """Insert ``row`` into an ordered partition so that it becomes an interval.

    ``row`` must overlap some row already represented by ``parts``.  Returns
    the refined partition or ``None`` when no consistent placement exists.
    """
    touched = [i for i, p in enumerate(parts) if p & row]
    if not touched:
        return None
    i, j = touched[0], touched[-1]
    if j - i + 1 != len(touched):
        return None
    for k in range(i + 1, j):
        if not parts[k] <= row:
            return None
    union = frozenset().union(*parts)
    fresh = row - union

    if not fresh:
        if i == j:
            # row strictly inside one class cannot overlap any placed row
            return None
        left, right = parts[i], parts[j]
        new = parts[:i]
        if left - row:
            new.append(left - row)
        new.append(left & row)
        new.extend(parts[i + 1 : j])
        new.append(right & row)
        if right - row:
            new.append(right - row)
        new.extend(parts[j + 1 :])
        return new

    # fresh columns must hang off one end of the arrangement
    last = len(parts) - 1
    at_right = j == last and (i == j or parts[j] <= row)
    at_left = i == 0 and (i == j or parts[i] <= row)
    if at_right and at_left and i != j:
        # touches both ends completely: row would contain everything placed
        return None
    if at_right:
        new = parts[:i]
        if parts[i] - row:
            new.append(parts[i] - row)
        new.append(parts[i] & row)
        new.extend(parts[i + 1 :])
        new.append(fresh)
        return new
    if at_left:
        new = [fresh, parts[j] & row]
        if parts[j] - row:
            new.append(parts[j] - row)
        new.extend(parts[j + 1 :])
        return [*new[:1], *parts[:j], *new[1:]] if j > 0 else new
    return None


def _overlap(a: frozenset, b: frozenset) -> bool:
    return bool(a & b) and not a <= b and not b <= a


def consecutive_ones_order(columns: Iterable, rows: Iterable[Iterable]) -> list | None:
    """Order ``columns`` so that every row is contiguous, or return ``None``.

    Rows are grouped into overlap components.  Within a component the
    arrangement is forced up to reversal and is built by partition
    refinement.  Components nest inside single classes of one another, so
    the full order is assembled by recursive placement.
    """
    columns = sorted(set(columns))
    uniq = sorted({frozenset(r) for r in rows if len(frozenset(r)) > 1}, key=sorted)
    if not uniq:
        return columns

    # overlap components by BFS, keeping each component's insertion order
    comp_of = [-1] * len(uniq)
    comps: list[list[int]] = []
    for s in range(len(uniq)):
        if comp_of[s] >= 0:
            continue
        order = [s]
        comp_of[s] = len(comps)
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for b in range(len(uniq)):
                if comp_of[b] < 0 and _overlap(uniq[a], uniq[b]):
                    comp_of[b] = len(comps)
                    order.append(b)
                    queue.append(b)
        comps.append(order)

    partitions: list[list[frozenset]] = []
    unions: list[frozenset] = []
    for order in comps:
        parts = [uniq[order[0]]]
        placed = [uniq[order[0]]]
        for r in order[1:]:
            row = uniq[r]
            # BFS order guarantees an overlap with some placed row
            assert any(_overlap(row, p) for p in placed)
            parts = _refine(parts, row)
            if parts is None:
                return None
            placed.append(row)
        partitions.append(parts)
        unions.append(frozenset().union(*parts))

    # nesting forest: parent is the smallest union containing this one
    idx = sorted(range(len(comps)), key=lambda c: (-len(unions[c]), len(comps[c]) != 1, min(unions[c])))
    parent: dict[int, tuple[int, int] | None] = {}
    for pos, c in enumerate(idx):
        parent[c] = None
        for p in reversed(idx[:pos]):
            if unions[c] <= unions[p]:
                classes = [k for k, part in enumerate(partitions[p]) if part & unions[c]]
                if len(classes) != 1:
                    return None
                parent[c] = (p, classes[0])
                break

    children: dict[tuple[int, int], list[int]] = {}
    roots = []
    for c in range(len(comps)):
        if parent[c] is None:
            roots.append(c)
        else:
            children.setdefault(parent[c], []).append(c)

    def layout(c: int) -> list:
        out = []
        for k, part in enumerate(partitions[c]):
            kids = sorted(children.get((c, k), []), key=lambda d: min(unions[d]))
            used = set()
            for d in kids:
                out.extend(layout(d))
                used |= unions[d]
            out.extend(sorted(part - used))
        return out

    order = []
    for c in sorted(roots, key=lambda d: min(unions[d])):
        order.extend(layout(c))
    placed = set(order)
    order.extend(x for x in columns if x not in placed)
    return order


def detect_left_convex(G: IncidenceGraph) -> Ordering | None:
    """A variable ordering witnessing left convexity of ``G``, if one exists."""
    rows = [G.clause_vars(j) for j in G.clause_nodes]
    order = consecutive_ones_order(G.var_nodes, rows)
    if order is None:
        return None
    order = tuple(order)
    if not verify_convexity_witness(G, order):
        raise AssertionError("consecutive-ones assembly produced an invalid witness")
    return order


# ------------------------------------------------------- feedback vertex set


@dataclass(frozen=True)
class DeletionSet:
    members: frozenset

    @property
    def variables(self) -> tuple[int, ...]:
        return tuple(sorted(x for kind, x in self.members if kind == "v"))

    @property
    def clauses(self) -> tuple[int, ...]:
        return tuple(sorted(j for kind, j in self.members if kind == "c"))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(sorted(self.members))


def _has_fvs(adj: dict, k: int, allowed) -> bool:
    """Is there a feedback vertex set of size <= k inside ``allowed``?"""
    adj = graphs.prune_leaves(adj)
    cycle = graphs.shortest_cycle(adj)
    if cycle is None:
        return True
    if k == 0:
        return False
    for v in sorted(cycle):
        if allowed(v) and _has_fvs(graphs.remove_vertices(adj, [v]), k - 1, allowed):
            return True
    return False


def min_fvs_size(G, budget: int = DEFAULT_FVS_BUDGET) -> int:
    adj = graphs.adjacency(G)
    for k in range(budget + 1):
        if _has_fvs(adj, k, lambda v: True):
            return k
    raise GuardExceeded(f"no feedback vertex set within budget {budget}")


def feedback_vertex_set(G, k: int, budget: int = DEFAULT_FVS_BUDGET) -> DeletionSet | None:
    """Lexicographically least minimum feedback vertex set, if its size is <= ``k``.

    Branches on the vertices of a shortest cycle, deepening the size bound
    one step at a time.
    """
    if k > budget:
        raise GuardExceeded(f"k={k} exceeds feedback vertex set budget {budget}")
    adj = graphs.adjacency(G)
    size = None
    for t in range(k + 1):
        if _has_fvs(adj, t, lambda v: True):
            size = t
            break
    if size is None:
        return None
    chosen: list = []
    rest = adj
    for _ in range(size):
        floor = chosen[-1] if chosen else None
        for v in sorted(rest):
            if floor is not None and v <= floor:
                continue
            trial = graphs.remove_vertices(rest, [v])
            if _has_fvs(trial, size - len(chosen) - 1, lambda u, v=v: u > v):
                chosen.append(v)
                rest = trial
                break
        else:
            raise AssertionError("lexicographic FVS reconstruction failed")
    return DeletionSet(frozenset(chosen))


def delete(F: Cnf, D: Iterable) -> Cnf:
    """The formula left after deleting the variables and clauses in ``D``."""
    members = D.members if isinstance(D, DeletionSet) else set(D)
    gone_vars = {x for kind, x in members if kind == "v"}
    gone_clauses = {j for kind, j in members if kind == "c"}
    return Cnf(
        [lit for lit in c if abs(lit) not in gone_vars]
        for j, c in enumerate(F.clauses)
        if j not in gone_clauses
    )
