"""Tree and path decompositions, tree-to-path conversion and forget orderings.

Decompositions are over arbitrary adjacency graphs; for a CNF they are taken
over its incidence graph (see :mod:`obddc.incidence`).  PACE 2017 ``.gr`` and
``.td`` text formats are supported for exchange with external solvers.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

from . import graphs
from .cnf import Cnf
from .errors import GuardExceeded, ObddcError, guard
from .incidence import build_incidence, var_node
from .orderings import Ordering, minimax_ordering, minimax_steps

EXACT_TREEWIDTH_BUDGET = 14
EXACT_PATHWIDTH_BUDGET = 16


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset, ...]
    #: parent index of each bag; ``None`` marks the root
    parent: tuple[int | None, ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def tree_edges(self) -> list[tuple[int, int]]:
        return [(p, i) for i, p in enumerate(self.parent) if p is not None]

    def neighbours(self) -> list[list[int]]:
        nb: list[list[int]] = [[] for _ in self.bags]
        for p, i in self.tree_edges():
            nb[p].append(i)
            nb[i].append(p)
        return nb


@dataclass(frozen=True)
class PathDecomposition:
    bags: tuple[frozenset, ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def as_tree(self) -> TreeDecomposition:
        return TreeDecomposition(self.bags, tuple([None] + list(range(len(self.bags) - 1)))[: len(self.bags)])


def _is_tree(n: int, parent: Sequence[int | None]) -> bool:
    if n == 0:
        return True
    roots = [i for i, p in enumerate(parent) if p is None]
    if len(roots) != 1:
        return False
    for i in range(n):
        seen = set()
        while parent[i] is not None:
            if i in seen or not 0 <= parent[i] < n:
                return False
            seen.add(i)
            i = parent[i]
    return True


def validate_tree_decomposition(G, T: TreeDecomposition) -> bool:
    """Coverage of vertices and edges, and connectedness of every vertex's bags."""
    adj = graphs.adjacency(G)
    if len(T.parent) != len(T.bags) or not _is_tree(len(T.bags), T.parent):
        return False
    covered = set().union(*T.bags) if T.bags else set()
    if covered - set(adj):
        return False
    if set(adj) - covered:
        return False
    for u, v in graphs.edges(adj):
        if not any(u in b and v in b for b in T.bags):
            return False
    for v in adj:
        holding = [i for i, b in enumerate(T.bags) if v in b]
        inner = sum(1 for i in holding if T.parent[i] is not None and v in T.bags[T.parent[i]])
        if inner != len(holding) - 1:
            return False
    return True


def validate_path_decomposition(G, P: PathDecomposition) -> bool:
    return validate_tree_decomposition(G, P.as_tree())


# ------------------------------------------------------------- elimination


def decomposition_from_elimination(G, order: Sequence[Hashable]) -> TreeDecomposition:
    """Tree decomposition induced by eliminating vertices in ``order``."""
    adj = graphs.adjacency(G)
    if set(order) != set(adj) or len(order) != len(adj):
        raise ValueError("elimination order must list every vertex once")
    if not adj:
        return TreeDecomposition((), ())
    pos = {v: i for i, v in enumerate(order)}
    work = {v: set(nb) for v, nb in adj.items()}
    bags: list[frozenset] = []
    later: list[set] = []
    for v in order:
        nb = work.pop(v)
        for a in nb:
            work[a].discard(v)
            work[a] |= nb - {a}
        bags.append(frozenset(nb | {v}))
        later.append(nb)
    parent: list[int | None] = []
    for i, v in enumerate(order):
        if later[i]:
            parent.append(min(pos[u] for u in later[i]))
        else:
            parent.append(None)
    # join the component roots into a single tree
    roots = [i for i, p in enumerate(parent) if p is None]
    for r in roots[:-1]:
        parent[r] = roots[-1]
    return _compress(TreeDecomposition(tuple(bags), tuple(parent)))


def _compress(T: TreeDecomposition) -> TreeDecomposition:
    """Contract tree edges whose child bag is a subset of its parent bag."""
    bags = list(T.bags)
    parent = list(T.parent)
    alive = [True] * len(bags)
    for i in range(len(bags)):
        p = parent[i]
        if p is not None and bags[i] <= bags[p]:
            alive[i] = False
            for k in range(len(bags)):
                if parent[k] == i:
                    parent[k] = p
    index = {}
    for i in range(len(bags)):
        if alive[i]:
            index[i] = len(index)
    new_bags = tuple(bags[i] for i in index)
    new_parent = tuple(None if parent[i] is None else index[parent[i]] for i in index)
    return TreeDecomposition(new_bags, new_parent)


def min_fill_order(G) -> list:
    adj = graphs.adjacency(G)
    work = {v: set(nb) for v, nb in adj.items()}
    order = []
    while work:
        def fill(v):
            nb = sorted(work[v])
            return sum(1 for i, a in enumerate(nb) for b in nb[i + 1 :] if b not in work[a])

        v = min(sorted(work), key=lambda u: (fill(u), len(work[u])))
        nb = work.pop(v)
        for a in nb:
            work[a].discard(v)
            work[a] |= nb - {a}
        order.append(v)
    return order


def min_fill_tree_decomposition(G) -> TreeDecomposition:
    """Heuristic decomposition from the min-fill elimination order."""
    return decomposition_from_elimination(G, min_fill_order(G))


def _index_masks(adj: Mapping) -> tuple[list, list[int]]:
    verts = sorted(adj)
    index = {v: i for i, v in enumerate(verts)}
    masks = [0] * len(verts)
    for v, nb in adj.items():
        for w in nb:
            masks[index[v]] |= 1 << index[w]
    return verts, masks


def exact_treewidth_small(G, budget: int | None = None) -> tuple[int, TreeDecomposition]:
    """Exact treewidth by dynamic programming over elimination prefixes."""
    adj = graphs.adjacency(G)
    budget = guard(EXACT_TREEWIDTH_BUDGET) if budget is None else budget
    if len(adj) > budget:
        raise GuardExceeded(f"{len(adj)} vertices exceed exact treewidth budget {budget}")
    if not adj:
        return -1, TreeDecomposition((), ())
    verts, masks = _index_masks(adj)
    n = len(verts)

    def q(eliminated: int, v: int) -> int:
        # vertices outside eliminated+v reachable from v through eliminated
        seen = 1 << v
        frontier = masks[v]
        reach = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            if seen & low:
                continue
            seen |= low
            if eliminated & low:
                frontier |= masks[low.bit_length() - 1] & ~seen
            else:
                reach |= low
        return bin(reach).count("1")

    # the bag of an eliminated vertex depends only on the set eliminated before it
    width, order = minimax_steps(list(range(n)), q)
    order = [verts[i] for i in order]
    td = decomposition_from_elimination(adj, order)
    return max(width, 0), td


def exact_pathwidth_small(G, budget: int | None = None) -> tuple[int, PathDecomposition]:
    """Exact pathwidth as the vertex separation number of a best layout."""
    adj = graphs.adjacency(G)
    budget = guard(EXACT_PATHWIDTH_BUDGET) if budget is None else budget
    if len(adj) > budget:
        raise GuardExceeded(f"{len(adj)} vertices exceed exact pathwidth budget {budget}")
    if not adj:
        return -1, PathDecomposition(())
    verts, masks = _index_masks(adj)

    def boundary(mask: int) -> int:
        return sum(1 for i in range(len(verts)) if mask >> i & 1 and masks[i] & ~mask)

    _, layout = minimax_ordering(list(range(len(verts))), boundary)
    P = layout_path_decomposition(adj, [verts[i] for i in layout])
    return P.width, P


def layout_path_decomposition(G, layout: Sequence[Hashable]) -> PathDecomposition:
    """Bag ``i`` holds vertex ``i`` plus earlier vertices with a neighbour at or after ``i``."""
    adj = graphs.adjacency(G)
    pos = {v: i for i, v in enumerate(layout)}
    last_needed = {v: max([pos[v]] + [pos[w] for w in adj[v]]) for v in layout}
    bags = []
    for i, v in enumerate(layout):
        bags.append(frozenset([v] + [u for u in layout[:i] if last_needed[u] >= i]))
    return PathDecomposition(tuple(bags))


def greedy_layout(G) -> list:
    """Greedy layout keeping the vertex-separation boundary small."""
    adj = graphs.adjacency(G)
    placed: set = set()
    layout: list = []

    def boundary_after(v) -> int:
        new = placed | {v}
        return sum(1 for u in new if adj[u] - new)

    while len(layout) < len(adj):
        frontier = {w for u in placed for w in adj[u]} - placed
        pool = frontier or set(adj) - placed
        v = min(sorted(pool), key=lambda u: (boundary_after(u), len(adj[u] - placed)))
        placed.add(v)
        layout.append(v)
    return layout


# -------------------------------------------------------- tree -> path


def tree_to_path(T: TreeDecomposition) -> PathDecomposition:
    """Linearize a tree decomposition by recursive centroid splitting.

    Each level of recursion may widen bags by at most one centroid bag, so
    width + 1 grows by at most a factor ``1 + ceil(log2(#bags))``.
    """
    n = len(T.bags)
    if n == 0:
        return PathDecomposition(())
    nb = T.neighbours()
    if all(len(x) <= 2 for x in nb):
        # already a path: walk it from one end
        start = next(i for i in range(n) if len(nb[i]) <= 1)
        seq, prev = [start], None
        while len(seq) < n:
            cur = seq[-1]
            nxt = next(x for x in nb[cur] if x != prev)
            prev = cur
            seq.append(nxt)
        return PathDecomposition(tuple(T.bags[i] for i in seq))
    seq = _linearize(T.bags, nb, list(range(n)))
    return PathDecomposition(tuple(_fill_spans(seq)))


def _centroid(nodes: list[int], nb: list[list[int]]) -> tuple[int, list[list[int]]]:
    alive = set(nodes)
    best = None
    for c in nodes:
        parts = []
        for s in nb[c]:
            if s not in alive:
                continue
            comp, stack, seen = [], [s], {c, s}
            while stack:
                x = stack.pop()
                comp.append(x)
                for y in nb[x]:
                    if y in alive and y not in seen:
                        seen.add(y)
                        stack.append(y)
            parts.append(sorted(comp))
        biggest = max((len(p) for p in parts), default=0)
        if best is None or biggest < best[0]:
            best = (biggest, c, parts)
    return best[1], best[2]


def _linearize(bags, nb, nodes: list[int]) -> list[frozenset]:
    if len(nodes) == 1:
        return [bags[nodes[0]]]
    c, parts = _centroid(nodes, nb)
    centre = bags[c]
    paths = [_linearize(bags, nb, p) for p in parts]

    def first_hit(path):
        return next((i for i, b in enumerate(path) if b & centre), len(path))

    # lead-in path ends near the centre; the others start near it
    oriented = []
    for k, path in enumerate(paths):
        rev = path[::-1]
        if k == 0:
            oriented.append(path if first_hit(rev) <= first_hit(path) else rev)
        else:
            oriented.append(path if first_hit(path) <= first_hit(rev) else rev)
    seq = list(oriented[0]) + [centre]
    for path in oriented[1:]:
        seq.extend(path)
    return seq


def _fill_spans(seq: list[frozenset]) -> list[frozenset]:
    first: dict = {}
    last: dict = {}
    for i, b in enumerate(seq):
        for v in b:
            first.setdefault(v, i)
            last[v] = i
    out = [set(b) for b in seq]
    for v in first:
        for i in range(first[v], last[v] + 1):
            out[i].add(v)
    return [frozenset(b) for b in out]


# ------------------------------------------------------- forget orderings


def path_decomposition(G) -> PathDecomposition:
    """Best available path decomposition: exact when small, else heuristics."""
    adj = graphs.adjacency(G)
    if len(adj) <= guard(EXACT_PATHWIDTH_BUDGET):
        return exact_pathwidth_small(adj)[1]
    candidates = [
        layout_path_decomposition(adj, greedy_layout(adj)),
        tree_to_path(min_fill_tree_decomposition(adj)),
    ]
    return min(candidates, key=lambda P: P.width)


def forget_ordering(P: PathDecomposition, F: Cnf) -> Ordering:
    """Variables sorted by their first bag in ``P``, ties by variable id."""
    G = build_incidence(F)
    if not validate_path_decomposition(G, P):
        raise ObddcError("path decomposition is not valid for the incidence graph")
    first = {}
    for i, bag in enumerate(P.bags):
        for x in F.vars:
            if x not in first and var_node(x) in bag:
                first[x] = i
    return tuple(sorted(F.vars, key=lambda x: (first[x], x)))


# ------------------------------------------------------------- PACE I/O


def pace_vertex_map(G) -> dict:
    """Vertex -> PACE id (1-based).  Incidence graphs number variables first."""
    adj = graphs.adjacency(G)
    verts = sorted(adj, key=lambda v: (v[0] != "v", v[1]) if isinstance(v, tuple) else (0, v))
    return {v: i for i, v in enumerate(verts, 1)}


def write_pace_gr(G) -> str:
    adj = graphs.adjacency(G)
    ids = pace_vertex_map(adj)
    es = sorted(tuple(sorted((ids[u], ids[v]))) for u, v in graphs.edges(adj))
    lines = [f"p tw {len(ids)} {len(es)}"] + [f"{a} {b}" for a, b in es]
    return "\n".join(lines) + "\n"


def read_pace_gr(text: str) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    header = None
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "p":
            if len(parts) != 4 or parts[1] != "tw":
                raise ObddcError(f"malformed .gr header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            adj = {v: set() for v in range(1, header[0] + 1)}
            continue
        if header is None:
            raise ObddcError(".gr edge before header")
        u, v = int(parts[0]), int(parts[1])
        adj[u].add(v)
        adj[v].add(u)
    if header is None:
        raise ObddcError("missing .gr header")
    return adj


def write_pace_td(T: TreeDecomposition, G) -> str:
    ids = pace_vertex_map(G)
    lines = [f"s td {len(T.bags)} {T.width + 1 if T.bags else 0} {len(ids)}"]
    for i, bag in enumerate(T.bags, 1):
        lines.append(" ".join(["b", str(i)] + [str(x) for x in sorted(ids[v] for v in bag)]))
    for p, i in sorted(T.tree_edges()):
        a, b = sorted((p + 1, i + 1))
        lines.append(f"{a} {b}")
    return "\n".join(lines) + "\n"


def read_pace_td(text: str, G=None) -> TreeDecomposition:
    """Parse a ``.td`` file; with ``G``, translate PACE ids back to its vertices."""
    inverse = None
    if G is not None:
        inverse = {i: v for v, i in pace_vertex_map(G).items()}
    header = None
    bags: dict[int, frozenset] = {}
    tedges: list[tuple[int, int]] = []
    for line in text.splitlines():
        parts = line.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "s":
            if len(parts) != 5 or parts[1] != "td":
                raise ObddcError(f"malformed .td header {line!r}")
            header = tuple(int(x) for x in parts[2:])
        elif parts[0] == "b":
            vs = [int(x) for x in parts[2:]]
            if inverse is not None:
                vs = [inverse[x] for x in vs]
            bags[int(parts[1])] = frozenset(vs)
        else:
            tedges.append((int(parts[0]), int(parts[1])))
    if header is None:
        raise ObddcError("missing .td header")
    n = header[0]
    if sorted(bags) != list(range(1, n + 1)):
        raise ObddcError(".td bag ids must be 1..N")
    nb: dict[int, list[int]] = {i: [] for i in range(1, n + 1)}
    for a, b in tedges:
        nb[a].append(b)
        nb[b].append(a)
    parent: list[int | None] = [None] * n
    if n:
        seen = {1}
        stack = [1]
        while stack:
            x = stack.pop()
            for y in nb[x]:
                if y not in seen:
                    seen.add(y)
                    parent[y - 1] = x - 1
                    stack.append(y)
        if len(seen) != n or len(tedges) != n - 1:
            raise ObddcError(".td tree edges do not form a tree")
    return TreeDecomposition(tuple(bags[i] for i in range(1, n + 1)), tuple(parent))
