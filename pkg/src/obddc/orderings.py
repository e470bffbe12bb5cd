"""Variable orderings and exact min-max search over them.

An ordering is a plain tuple of distinct variables, earliest first.
"""

from __future__ import annotations

import math
from typing import Callable, Hashable, Iterable, Sequence

from .errors import OrderingError

Ordering = tuple[int, ...]


def check_ordering(sigma: Iterable[int], expected: Iterable[int]) -> Ordering:
    """Return ``sigma`` as a tuple after checking it orders exactly ``expected``."""
    sigma = tuple(sigma)
    expected = set(expected)
    if len(set(sigma)) != len(sigma):
        raise OrderingError(f"ordering repeats a variable: {sigma}")
    if set(sigma) != expected:
        extra = sorted(set(sigma) - expected)
        missing = sorted(expected - set(sigma))
        raise OrderingError(f"ordering mismatch: missing {missing}, extra {extra}")
    return sigma


def prefixes(sigma: Sequence[int]) -> list[tuple[int, ...]]:
    """All nonempty prefixes, shortest first."""
    return [tuple(sigma[: j + 1]) for j in range(len(sigma))]


def minimax_ordering(
    items: Sequence[Hashable], cost: Callable[[int], int]
) -> tuple[int, tuple]:
    """Lexicographically least ordering minimizing the worst prefix cost.

    ``items`` must be sorted.  ``cost(mask)`` gives the cost of the prefix
    whose members are the items at the set bits of ``mask``; it should depend
    only on that set.  The objective is the maximum cost over all nonempty
    prefixes, including the full one.
    """
    return minimax_steps(items, lambda mask, i: cost(mask | 1 << i))


def minimax_steps(
    items: Sequence[Hashable], step_cost: Callable[[int, int], int]
) -> tuple[int, tuple]:
    """Like :func:`minimax_ordering`, with the cost of appending item ``i``
    to the prefix ``mask`` given by ``step_cost(mask, i)``.

    Depth-first branch and bound in lexicographic order.  Prefix sets that
    were shown unable to beat a bound are remembered and skipped, which keeps
    the search exact while bounding the work by the number of subsets.
    """
    n = len(items)
    if n == 0:
        return 0, ()
    full = (1 << n) - 1
    cache: dict[tuple[int, int], int] = {}
    beaten_at: dict[int, float] = {}
    best = math.inf
    best_order: list[int] = []
    stack: list[int] = []

    def c(mask: int, i: int) -> int:
        value = cache.get((mask, i))
        if value is None:
            value = cache[mask, i] = step_cost(mask, i)
        return value

    def dfs(mask: int, worst: int) -> None:
        nonlocal best, best_order
        if mask == full:
            if worst < best:
                best, best_order = worst, list(stack)
            return
        if beaten_at.get(mask, -math.inf) >= best:
            return
        entry_bound = best
        for i in range(n):
            bit = 1 << i
            if mask & bit:
                continue
            w = max(worst, c(mask, i))
            if w >= best:
                continue
            stack.append(i)
            dfs(mask | bit, w)
            stack.pop()
        if best == entry_bound:
            # no completion of this prefix set stays below entry_bound
            beaten_at[mask] = max(beaten_at.get(mask, -math.inf), entry_bound)

    dfs(0, -1)
    return int(best), tuple(items[i] for i in best_order)
