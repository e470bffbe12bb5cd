"""Small undirected-graph helpers shared by the structural modules.

Graphs are adjacency mappings ``{vertex: set_of_neighbours}`` over hashable,
mutually comparable vertices.
"""

from __future__ import annotations

from collections import deque
from typing import Hashable, Iterable, Mapping

Adjacency = dict[Hashable, set]


def adjacency(G) -> Adjacency:
    """Return a fresh mutable adjacency dict for ``G``.

    Accepts anything with an ``adj`` attribute, a mapping of neighbour
    iterables, or an iterable of edges.
    """
    if hasattr(G, "adj"):
        G = G.adj
    if isinstance(G, Mapping):
        adj = {v: set(nb) for v, nb in G.items()}
        for v, nb in list(adj.items()):
            for w in nb:
                adj.setdefault(w, set()).add(v)
        return adj
    adj: Adjacency = {}
    for u, v in G:
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def edges(adj: Mapping) -> list[tuple]:
    out = []
    for v in sorted(adj):
        for w in sorted(adj[v]):
            if v < w:
                out.append((v, w))
    return out


def remove_vertices(adj: Mapping, gone: Iterable) -> Adjacency:
    gone = set(gone)
    return {v: set(nb) - gone for v, nb in adj.items() if v not in gone}


def components(adj: Mapping) -> list[list]:
    seen = set()
    out = []
    for s in sorted(adj):
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def is_forest(adj: Mapping) -> bool:
    m = sum(len(nb) for nb in adj.values()) // 2
    return m == len(adj) - len(components(adj))


def prune_leaves(adj: Mapping) -> Adjacency:
    """Repeatedly delete vertices of degree at most one (they lie on no cycle)."""
    adj = {v: set(nb) for v, nb in adj.items()}
    queue = [v for v, nb in adj.items() if len(nb) <= 1]
    while queue:
        v = queue.pop()
        if v not in adj or len(adj[v]) > 1:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1:
                queue.append(w)
    return adj


def shortest_cycle(adj: Mapping) -> list | None:
    """Vertices of a shortest cycle, or ``None`` for a forest."""
    best = None
    for s in sorted(adj):
        parent = {s: None}
        dist = {s: 0}
        queue = deque([s])
        found = None
        while queue and found is None:
            u = queue.popleft()
            for w in sorted(adj[u]):
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif w != parent[u]:
                    found = (u, w)
                    break
        if found is None:
            continue
        u, w = found
        pu, pw = [u], [w]
        while parent[pu[-1]] is not None:
            pu.append(parent[pu[-1]])
        while parent[pw[-1]] is not None:
            pw.append(parent[pw[-1]])
        # strip the common tail, keeping the lowest common ancestor once
        while len(pu) > 1 and len(pw) > 1 and pu[-2] == pw[-2]:
            pu.pop()
            pw.pop()
        cycle = pu + pw[-2::-1]
        if best is None or len(cycle) < len(best):
            best = cycle
    return best
