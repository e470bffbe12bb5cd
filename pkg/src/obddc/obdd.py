"""Ordered binary decision diagrams.

Node references are integers: ``0`` and ``1`` are the sinks, internal nodes
are ``2, 3, ...`` and stored as ``(var, lo, hi)`` triples.  A diagram need
not be reduced; :func:`reduce` returns the canonical form for its ordering.

Text format (one node per line, children before parents)::

    order 2 1 3
    root 4
    0:F
    1:T
    2 3 0 1
    3 1 0 2
    4 2 3 1

Only reachable nodes are written.  A constant function is written as a
single sink with an empty ``order`` line.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, NamedTuple

import numpy as np

from .errors import GuardExceeded, ObddcError
from .orderings import Ordering

FALSE, TRUE = 0, 1
EXHAUSTIVE_EQUIVALENCE_GUARD = 24


class Node(NamedTuple):
    var: int
    lo: int
    hi: int


@dataclass(frozen=True, eq=False)
class Obdd:
    ordering: Ordering
    #: internal nodes; ``nodes[i]`` is node reference ``i + 2``
    nodes: tuple[Node, ...]
    root: int

    def __post_init__(self):
        pos = {x: i for i, x in enumerate(self.ordering)}
        if len(pos) != len(self.ordering):
            raise ObddcError("ordering repeats a variable")
        if not 0 <= self.root < len(self.nodes) + 2:
            raise ObddcError(f"root {self.root} is not a node")
        for ref, (var, lo, hi) in enumerate(self.nodes, 2):
            if var not in pos:
                raise ObddcError(f"node {ref} tests {var}, which is not in the ordering")
            for child in (lo, hi):
                if not 0 <= child < len(self.nodes) + 2:
                    raise ObddcError(f"node {ref} points to missing node {child}")
                if child > 1 and pos[self.nodes[child - 2].var] <= pos[var]:
                    raise ObddcError(f"edge {ref}->{child} violates the ordering")

    def node(self, ref: int) -> Node:
        return self.nodes[ref - 2]

    def is_sink(self, ref: int) -> bool:
        return ref < 2

    def reachable(self) -> list[int]:
        """Reachable node references, sinks included, in ascending order."""
        seen = {self.root}
        stack = [self.root]
        while stack:
            ref = stack.pop()
            if ref > 1:
                for child in self.node(ref)[1:]:
                    if child not in seen:
                        seen.add(child)
                        stack.append(child)
        return sorted(seen)

    def evaluate(self, f: Mapping[int, int]) -> int:
        return evaluate(self, f)

    def __len__(self) -> int:
        return obdd_size(self)


def constant(value: int, ordering: Iterable[int] = ()) -> Obdd:
    return Obdd(tuple(ordering), (), TRUE if value else FALSE)


def evaluate(D: Obdd, f: Mapping[int, int]) -> int:
    """Follow the edges activated by ``f`` from the root to a sink."""
    missing = [x for x in D.ordering if x not in f]
    if missing:
        raise ValueError(f"assignment misses variables {missing}")
    ref = D.root
    nodes = D.nodes
    while ref > 1:
        var, lo, hi = nodes[ref - 2]
        ref = hi if f[var] else lo
    return ref


def obdd_size(D: Obdd) -> int:
    """Number of reachable nodes, sinks included."""
    return len(D.reachable())


def _canonical(ordering: Ordering, table: list[Node], root: int) -> Obdd:
    """Renumber reachable nodes depth-first, lo before hi, children first."""
    order: dict[int, int] = {}
    out: list[Node] = []

    def visit(ref: int) -> int:
        if ref < 2:
            return ref
        if ref in order:
            return order[ref]
        var, lo, hi = table[ref - 2]
        node = Node(var, visit(lo), visit(hi))
        out.append(node)
        order[ref] = len(out) + 1
        return order[ref]

    new_root = visit(root)
    return Obdd(ordering, tuple(out), new_root)


def reduce(D: Obdd) -> Obdd:
    """Canonical reduced diagram: no redundant tests, no duplicate triples."""
    pos = {x: i for i, x in enumerate(D.ordering)}
    live = [ref for ref in D.reachable() if ref > 1]
    live.sort(key=lambda ref: -pos[D.node(ref).var])
    unique: dict[Node, int] = {}
    table: list[Node] = []
    image = {FALSE: FALSE, TRUE: TRUE}
    for ref in live:
        var, lo, hi = D.node(ref)
        lo, hi = image[lo], image[hi]
        if lo == hi:
            image[ref] = lo
            continue
        key = Node(var, lo, hi)
        if key not in unique:
            table.append(key)
            unique[key] = len(table) + 1
        image[ref] = unique[key]
    return _canonical(D.ordering, table, image[D.root])


def _truth_table(D: Obdd, variables: list[int]) -> np.ndarray:
    """Values of ``D`` on all assignments to ``variables`` (first variable = top bit)."""
    n = len(variables)
    check_size = 1 << n
    idx = {x: i for i, x in enumerate(variables)}
    chunk = min(check_size, 1 << 16)
    pos = {x: i for i, x in enumerate(D.ordering)}
    live = [ref for ref in D.reachable() if ref > 1]
    live.sort(key=lambda ref: -pos[D.node(ref).var])
    out = np.empty(check_size, dtype=bool)
    for start in range(0, check_size, chunk):
        points = np.arange(start, start + chunk, dtype=np.int64)
        values = {FALSE: np.zeros(chunk, bool), TRUE: np.ones(chunk, bool)}
        for ref in live:
            var, lo, hi = D.node(ref)
            bit = (points >> (n - 1 - idx[var])) & 1
            values[ref] = np.where(bit.astype(bool), values[hi], values[lo])
        out[start : start + chunk] = values[D.root]
    return out


def equivalent(D1: Obdd, D2: Obdd) -> bool:
    """Do ``D1`` and ``D2`` compute the same function?"""
    if D1.ordering == D2.ordering:
        return to_text(reduce(D1)) == to_text(reduce(D2))
    variables = sorted(set(D1.ordering) | set(D2.ordering))
    if len(variables) > EXHAUSTIVE_EQUIVALENCE_GUARD:
        raise GuardExceeded(
            f"{len(variables)} variables exceed the exhaustive equivalence guard "
            f"{EXHAUSTIVE_EQUIVALENCE_GUARD}"
        )
    return bool(np.array_equal(_truth_table(D1, variables), _truth_table(D2, variables)))


# --------------------------------------------------------------- formats


def to_text(D: Obdd) -> str:
    C = _canonical(D.ordering, list(D.nodes), D.root)
    if C.root < 2:
        sink = "1:T" if C.root == TRUE else "0:F"
        return f"order\nroot {C.root}\n{sink}\n"
    reach = C.reachable()
    lines = ["order " + " ".join(map(str, C.ordering)), f"root {C.root}"]
    if FALSE in reach:
        lines.append("0:F")
    if TRUE in reach:
        lines.append("1:T")
    for ref, (var, lo, hi) in enumerate(C.nodes, 2):
        lines.append(f"{ref} {var} {lo} {hi}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Obdd:
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if len(lines) < 3 or not lines[0].startswith("order") or not lines[1].startswith("root "):
        raise ObddcError("malformed OBDD text: expected 'order' and 'root' header lines")
    ordering = tuple(int(x) for x in lines[0].split()[1:])
    root = int(lines[1].split()[1])
    nodes = []
    for line in lines[2:]:
        if line in ("0:F", "1:T"):
            continue
        ref, var, lo, hi = (int(x) for x in line.split())
        if ref != len(nodes) + 2:
            raise ObddcError(f"node ids must be consecutive from 2, got {ref}")
        nodes.append(Node(var, lo, hi))
    return Obdd(ordering, tuple(nodes), root)


def to_dot(D: Obdd, name: str = "obdd") -> str:
    C = _canonical(D.ordering, list(D.nodes), D.root)
    reach = C.reachable()
    lines = [f"digraph {name} {{"]
    for ref in reach:
        if ref < 2:
            lines.append(f'  n{ref} [shape=box, label="{ref}"];')
        else:
            lines.append(f'  n{ref} [label="x{C.node(ref).var}"];')
    for ref in reach:
        if ref > 1:
            _, lo, hi = C.node(ref)
            lines.append(f"  n{ref} -> n{lo} [style=dashed];")
            lines.append(f"  n{ref} -> n{hi};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def all_assignments(variables: Iterable[int]):
    """Every total assignment of ``variables`` as a dict, in binary counting order."""
    variables = list(variables)
    for bits in itertools.product((0, 1), repeat=len(variables)):
        yield dict(zip(variables, bits))
