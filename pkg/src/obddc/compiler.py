"""Level-by-level subterm compilation of CNFs into OBDDs, and ordering strategies.

:func:`compile_with_ordering` builds the diagram one variable at a time.
Every node at level ``i`` is labelled by the subterm obtained from an
assignment of the first ``i`` variables; nodes with equal labels at the same
level are merged, labels containing the empty clause become the 0-sink and
the empty label becomes the 1-sink.  The result is then reduced.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

from . import decomposition, incidence, widths
from .cnf import Cnf
from .errors import GuardExceeded, StrategyError
from .obdd import FALSE, TRUE, Node, Obdd, obdd_size, reduce
from .orderings import Ordering, check_ordering

logger = logging.getLogger(__name__)

DEFAULT_DELETION_K = 10
STRATEGIES = ("explicit", "convex", "pathwidth", "deletion", "auto")


@dataclass
class CompileReport:
    ordering: Ordering
    strategy: str
    #: distinct subterm labels created at levels 1..n, falsified ones included
    level_widths: list[int]
    #: distinct labels at levels 1..n that do not contain the empty clause
    live_widths: list[int]
    size_before_reduce: int
    size_after_reduce: int
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def width(self) -> int:
        return max(self.level_widths, default=1)

    def as_dict(self) -> dict:
        return {
            "ordering": list(self.ordering),
            "strategy": self.strategy,
            "level_widths": self.level_widths,
            "live_widths": self.live_widths,
            "size_before_reduce": self.size_before_reduce,
            "size_after_reduce": self.size_after_reduce,
            "elapsed": self.elapsed,
            **self.extra,
        }


@dataclass(frozen=True)
class Strategy:
    kind: str
    ordering: Ordering | None = None
    max_k: int = DEFAULT_DELETION_K
    target: str = "forest"

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise StrategyError(f"unknown strategy {self.kind!r}")
        if self.kind == "explicit" and self.ordering is None:
            raise StrategyError("explicit strategy needs an ordering")
        if self.kind == "deletion" and self.target != "forest":
            raise StrategyError(f"unsupported deletion target class {self.target!r}")

    @classmethod
    def explicit(cls, ordering) -> Strategy:
        return cls("explicit", tuple(ordering))

    @classmethod
    def deletion(cls, max_k: int = DEFAULT_DELETION_K) -> Strategy:
        return cls("deletion", max_k=max_k)


def _sink_of(label: Cnf) -> int | None:
    if label.has_empty_clause:
        return FALSE
    if label.is_empty():
        return TRUE
    return None


def build_levels(F: Cnf, sigma: Ordering) -> tuple[Obdd, list[int], list[int]]:
    """The unreduced levelled diagram, with label counts per level."""
    n = len(sigma)
    sink = _sink_of(F)
    if sink is not None:
        # the source is identified with a sink; deeper levels are never created
        return Obdd(sigma, (), sink), [], []
    table: list[list[int]] = []
    level: dict[Cnf, int] = {F: 2}
    table.append([sigma[0], -1, -1])
    level_widths, live_widths = [], []
    for i, x in enumerate(sigma):
        nxt: dict[Cnf, int] = {}
        labels: set[Cnf] = set()
        live = 0
        for label, ref in level.items():
            for b in (0, 1):
                child = label.assign(x, b)
                if child not in labels:
                    labels.add(child)
                    if not child.has_empty_clause:
                        live += 1
                target = _sink_of(child)
                if target is None:
                    target = nxt.get(child)
                    if target is None:
                        if i + 1 >= n:
                            raise AssertionError("unassigned subterm after the last variable")
                        table.append([sigma[i + 1], -1, -1])
                        target = nxt[child] = len(table) + 1
                table[ref - 2][1 + b] = target
        level_widths.append(len(labels))
        live_widths.append(live)
        level = nxt
    nodes = tuple(Node(*t) for t in table)
    return Obdd(sigma, nodes, 2), level_widths, live_widths


def compile_with_ordering(F: Cnf, sigma, strategy: str = "explicit") -> tuple[Obdd, CompileReport]:
    """Compile ``F`` into a reduced ``sigma``-OBDD."""
    sigma = check_ordering(sigma, F.vars)
    start = time.perf_counter()
    raw, level_widths, live_widths = build_levels(F, sigma)
    before = obdd_size(raw)
    D = reduce(raw)
    report = CompileReport(
        ordering=sigma,
        strategy=strategy,
        level_widths=level_widths,
        live_widths=live_widths,
        size_before_reduce=before,
        size_after_reduce=obdd_size(D),
        elapsed=time.perf_counter() - start,
    )
    # unreduced size bound, from the widths observed during construction
    bound = len(sigma) * max(level_widths, default=1) + 2
    if before > bound:
        raise AssertionError(f"pre-reduction size {before} exceeds {bound}")
    return D, report


# ------------------------------------------------------------- strategies


def convex_ordering(F: Cnf) -> Ordering:
    witness = incidence.detect_left_convex(incidence.build_incidence(F))
    if witness is None:
        raise StrategyError("formula is not variable convex")
    return witness


def pathwidth_ordering(F: Cnf, td=None) -> tuple[Ordering, int]:
    """Forget ordering of a path decomposition of ``inc(F)`` and that decomposition's width.

    ``td`` may supply an externally computed tree or path decomposition.
    """
    G = incidence.build_incidence(F)
    if td is None:
        P = decomposition.path_decomposition(G)
    elif isinstance(td, decomposition.PathDecomposition):
        P = td
    else:
        if not decomposition.validate_tree_decomposition(G, td):
            raise StrategyError("supplied tree decomposition is not valid for inc(F)")
        P = decomposition.tree_to_path(td)
    return decomposition.forget_ordering(P, F), P.width


@dataclass(frozen=True)
class DeletionPlan:
    deletion_set: incidence.DeletionSet
    remainder: Cnf
    #: the deleted variables, by id
    head: Ordering
    #: forget ordering of the remainder
    tail: Ordering
    #: variables occurring only in deleted clauses
    orphans: Ordering

    @property
    def ordering(self) -> Ordering:
        return self.head + self.tail + self.orphans

    @property
    def k(self) -> int:
        return len(self.deletion_set)


def deletion_plan(F: Cnf, max_k: int = DEFAULT_DELETION_K) -> DeletionPlan:
    G = incidence.build_incidence(F)
    D = incidence.feedback_vertex_set(G, max_k, budget=max(max_k, incidence.DEFAULT_FVS_BUDGET))
    if D is None:
        raise GuardExceeded(f"no forest deletion set of size <= {max_k}")
    E = incidence.delete(F, D)
    head = D.variables
    tail = pathwidth_ordering(E)[0] if E.vars else ()
    orphans = tuple(sorted(F.vars - set(head) - set(tail)))
    return DeletionPlan(D, E, head, tail, orphans)


def choose_ordering(F: Cnf, s: Strategy) -> tuple[Ordering, str]:
    if F.has_empty_clause:
        raise StrategyError("ordering strategies do not apply to formulas with the empty clause")
    if s.kind == "explicit":
        return check_ordering(s.ordering, F.vars), "explicit"
    if s.kind == "convex":
        return convex_ordering(F), "convex"
    if s.kind == "pathwidth":
        return pathwidth_ordering(F)[0], "pathwidth"
    if s.kind == "deletion":
        return deletion_plan(F, s.max_k).ordering, "deletion"
    return _auto(F, s)[0:2]


def _auto(F: Cnf, s: Strategy):
    candidates = []
    try:
        candidates.append(("convex", convex_ordering(F)))
    except StrategyError:
        pass
    try:
        candidates.append(("deletion", deletion_plan(F, s.max_k).ordering))
    except GuardExceeded:
        pass
    candidates.append(("pathwidth", pathwidth_ordering(F)[0]))
    priority = {"convex": 0, "deletion": 1, "pathwidth": 2}
    scored = []
    for tag, sigma in candidates:
        D, report = compile_with_ordering(F, sigma, tag)
        scored.append((report.width, report.size_after_reduce, priority[tag], sigma, tag, D, report))
    scored.sort(key=lambda t: t[:3])
    width, _, _, sigma, tag, D, report = scored[0]
    report.extra["auto_candidates"] = {t[4]: t[0] for t in scored}
    return sigma, tag, D, report


def compile_cnf(F: Cnf, s: Strategy | None = None, td=None) -> tuple[Obdd, CompileReport]:
    """Choose an ordering by strategy ``s`` (default auto) and compile."""
    s = s or Strategy("auto")
    if F.has_empty_clause:
        sigma = tuple(sorted(F.vars))
        return compile_with_ordering(F, sigma, "trivial")
    if s.kind == "auto":
        _, _, D, report = _auto(F, s)
        return D, report
    if s.kind == "deletion":
        return deletion_compile(F, s.max_k)
    if s.kind == "pathwidth":
        sigma, pw = pathwidth_ordering(F, td)
        D, report = compile_with_ordering(F, sigma, "pathwidth")
        report.extra["path_width"] = pw
        lemma = 2 ** (pw + 2)
        report.extra["forget_bound"] = lemma
        return D, report
    sigma, tag = choose_ordering(F, s)
    D, report = compile_with_ordering(F, sigma, tag)
    if tag == "convex":
        report.extra["convex_bound"] = 2 * (sum(len(c) for c in F) + 1)
    return D, report


def deletion_compile(F: Cnf, max_k: int = DEFAULT_DELETION_K) -> tuple[Obdd, CompileReport]:
    """Compile along a minimum forest deletion set followed by a forget ordering.

    The report records ``k`` and both sides of the width inequality
    ``stw(F, head+tail) <= 2**k * stw(E, tail)``, measured exactly when the
    formula is within the widths guard.
    """
    plan = deletion_plan(F, max_k)
    D, report = compile_with_ordering(F, plan.ordering, "deletion")
    _, shadow = compile_with_ordering(plan.remainder, plan.tail, "deletion-shadow")
    report.extra.update(
        deletion_set=[list(m) for m in sorted(plan.deletion_set.members)],
        k=plan.k,
        shadow_level_widths=shadow.level_widths,
    )
    try:
        full = widths.stw_for_ordering(F, plan.ordering).width
        rest = widths.stw_for_ordering(plan.remainder, plan.tail).width
    except GuardExceeded:
        logger.info("deletion bound not measured: formula exceeds the widths guard")
    else:
        report.extra.update(stw_full=full, stw_remainder=rest)
        if full > 2**plan.k * rest:
            raise AssertionError(f"deletion bound violated: {full} > 2^{plan.k} * {rest}")
    return D, report
