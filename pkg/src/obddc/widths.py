"""Exact subterm sets, subterm width and deletion distance.

Subterm counts follow the definition literally: subterms containing the
empty clause are counted like any other.
"""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass

from . import incidence
from .cnf import Cnf, canonical_key, restrict
from .errors import GuardExceeded, check_guard, guard
from .orderings import Ordering, check_ordering, minimax_ordering

SUBTERM_GUARD = 20
STW_EXACT_GUARD = 10


@dataclass(frozen=True)
class SubtermSet:
    prefix_vars: frozenset[int]
    keys: frozenset

    def __len__(self) -> int:
        return len(self.keys)


@dataclass(frozen=True)
class WidthProfile:
    ordering: Ordering
    per_prefix: tuple[int, ...]

    @property
    def width(self) -> int:
        # the empty ordering has the single subterm F itself
        return max(self.per_prefix, default=1)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["prefix_len", "count"])
        for j, count in enumerate(self.per_prefix, 1):
            w.writerow([j, count])
        return buf.getvalue()


def subterms(F: Cnf, V) -> SubtermSet:
    """``st(F, V)`` by enumerating all ``2^|V|`` assignments of ``V``."""
    V = sorted(set(V))
    if not set(V) <= F.vars:
        raise ValueError("V must be a subset of var(F)")
    check_guard(len(V), guard(SUBTERM_GUARD), "subterm enumeration")
    keys = set()
    for bits in itertools.product((0, 1), repeat=len(V)):
        keys.add(canonical_key(restrict(F, dict(zip(V, bits)))))
    return SubtermSet(frozenset(V), frozenset(keys))


def _expand(terms: frozenset[Cnf], x: int) -> frozenset[Cnf]:
    return frozenset(t.assign(x, b) for t in terms for b in (0, 1))


def stw_for_ordering(F: Cnf, sigma) -> WidthProfile:
    """Subterm counts of every prefix of ``sigma``.

    Computed incrementally: the subterms of a prefix extended by ``x`` are
    the two restrictions on ``x`` of the subterms of the prefix.
    """
    sigma = check_ordering(sigma, F.vars)
    check_guard(len(sigma), guard(SUBTERM_GUARD), "subterm width")
    terms = frozenset([F])
    counts = []
    for x in sigma:
        terms = _expand(terms, x)
        counts.append(len(terms))
    return WidthProfile(sigma, tuple(counts))


def stw_exact(F: Cnf) -> tuple[int, Ordering]:
    """Minimum subterm width over all orderings, with the lexicographically least witness.

    Branch and bound over orderings: a partial ordering is abandoned as soon
    as one of its prefixes reaches the best width found so far.
    """
    variables = tuple(sorted(F.vars))
    check_guard(len(variables), guard(STW_EXACT_GUARD), "exact subterm width")
    if not variables:
        return 1, ()
    memo: dict[int, frozenset[Cnf]] = {0: frozenset([F])}

    def terms(mask: int) -> frozenset[Cnf]:
        got = memo.get(mask)
        if got is None:
            top = mask.bit_length() - 1
            got = memo[mask] = _expand(terms(mask & ~(1 << top)), variables[top])
        return got

    width, sigma = minimax_ordering(variables, lambda mask: len(terms(mask)))
    return width, sigma


def deletion_distance(F: Cnf, target: str = "forest", budget: int = incidence.DEFAULT_FVS_BUDGET):
    """Minimum deletion set into the class of formulas with acyclic incidence graphs."""
    if target != "forest":
        raise ValueError(f"unsupported target class {target!r}")
    G = incidence.build_incidence(F)
    D = incidence.feedback_vertex_set(G, budget, budget=budget)
    if D is None:
        raise GuardExceeded(f"deletion distance exceeds budget {budget}")
    return len(D), D
