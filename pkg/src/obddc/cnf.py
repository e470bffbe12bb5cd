"""CNF formulas: representation, DIMACS parsing, restriction and evaluation.

Literals are signed integers in the DIMACS convention: ``3`` is the variable
``x3`` and ``-3`` its negation.  A clause is a tuple of literals sorted by
variable, and a :class:`Cnf` is a sorted tuple of distinct clauses, so that
equality, hashing and :func:`canonical_key` all reduce to tuple comparison.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .errors import DimacsError

logger = logging.getLogger(__name__)

Clause = tuple[int, ...]
Assignment = Mapping[int, int]


def _lit_key(lit: int) -> tuple[int, int]:
    return (abs(lit), lit)


def make_clause(literals: Iterable[int]) -> Clause:
    """Normalize literals into a clause; raise ``ValueError`` on tautologies."""
    lits = set(literals)
    for lit in lits:
        if lit == 0:
            raise ValueError("0 is not a literal")
        if -lit in lits:
            raise ValueError(f"tautological clause: contains {abs(lit)} and -{abs(lit)}")
    return tuple(sorted(lits, key=_lit_key))


class Cnf:
    """An immutable set of non-tautological clauses.

    The empty CNF (``Cnf()``) is the constant true formula; ``Cnf([[]])``
    holds the empty clause and is falsified by every assignment.
    """

    __slots__ = ("clauses", "_vars", "_hash")

    def __init__(self, clauses: Iterable[Iterable[int]] = ()):
        self.clauses: tuple[Clause, ...] = tuple(sorted({make_clause(c) for c in clauses}))
        self._vars = None
        self._hash = None

    @classmethod
    def _raw(cls, clauses: tuple[Clause, ...]) -> Cnf:
        # clauses must already be canonical: normalized, distinct and sorted
        obj = cls.__new__(cls)
        obj.clauses = clauses
        obj._vars = None
        obj._hash = None
        return obj

    @property
    def vars(self) -> frozenset[int]:
        if self._vars is None:
            self._vars = frozenset(abs(lit) for c in self.clauses for lit in c)
        return self._vars

    @property
    def has_empty_clause(self) -> bool:
        # the empty tuple sorts before every other clause
        return bool(self.clauses) and not self.clauses[0]

    def is_empty(self) -> bool:
        return not self.clauses

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self):
        return iter(self.clauses)

    def __eq__(self, other) -> bool:
        return isinstance(other, Cnf) and self.clauses == other.clauses

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self.clauses)
        return self._hash

    def __repr__(self) -> str:
        return f"Cnf({[list(c) for c in self.clauses]!r})"

    def assign(self, var: int, value: int) -> Cnf:
        """Restrict by the single assignment ``var -> value``."""
        true_lit = var if value else -var
        false_lit = -true_lit
        out = set()
        for c in self.clauses:
            if true_lit in c:
                continue
            if false_lit in c:
                c = tuple(lit for lit in c if lit != false_lit)
            out.add(c)
        return Cnf._raw(tuple(sorted(out)))


def restrict(F: Cnf, f: Assignment) -> Cnf:
    """Return ``F[f]``: drop satisfied clauses, strip literals on assigned variables.

    Variables of ``f`` outside ``var(F)`` are ignored.
    """
    out = set()
    for c in F.clauses:
        kept = []
        satisfied = False
        for lit in c:
            v = abs(lit)
            if v in f:
                if bool(f[v]) == (lit > 0):
                    satisfied = True
                    break
            else:
                kept.append(lit)
        if not satisfied:
            out.add(tuple(kept))
    return Cnf._raw(tuple(sorted(out)))


def evaluate(F: Cnf, f: Assignment) -> int:
    """Return 1 if ``f`` satisfies ``F``, else 0; ``f`` must cover ``var(F)``."""
    missing = F.vars.difference(f)
    if missing:
        raise ValueError(f"assignment misses variables {sorted(missing)}")
    return int(restrict(F, f).is_empty())


def cnf_size(F: Cnf) -> int:
    """Number of literal occurrences."""
    return sum(len(c) for c in F.clauses)


def canonical_key(F: Cnf) -> tuple[Clause, ...]:
    """Order-independent fingerprint; equal exactly when the clause sets are equal."""
    return F.clauses


def rename(F: Cnf, mapping: Mapping[int, int]) -> Cnf:
    """Rename variables by ``mapping`` (variables missing from it are kept)."""
    return Cnf(
        [(mapping.get(abs(lit), abs(lit)) * (1 if lit > 0 else -1)) for lit in c]
        for c in F.clauses
    )


@dataclass(frozen=True)
class DimacsCnf:
    """A parsed DIMACS file: the dense formula plus bookkeeping."""

    cnf: Cnf
    declared_vars: int
    declared_clauses: int
    #: dense id -> original DIMACS id
    var_map: dict[int, int] = field(default_factory=dict)
    duplicates: int = 0

    def original(self, var: int) -> int:
        return self.var_map.get(var, var)


def read_dimacs(text: str | bytes) -> DimacsCnf:
    """Parse DIMACS CNF text, renaming variables to dense ids ``1..n``."""
    if isinstance(text, bytes):
        text = text.decode()
    header = None
    raw: list[list[int]] = []
    current: list[int] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise DimacsError(f"line {lineno}: duplicate header")
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsError(f"line {lineno}: malformed header {line!r}") from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsError(f"line {lineno}: negative counts in header")
            continue
        if header is None:
            raise DimacsError(f"line {lineno}: clause before header")
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"line {lineno}: bad token {tok!r}") from None
            if lit == 0:
                raw.append(current)
                current = []
            elif abs(lit) > header[0]:
                raise DimacsError(
                    f"line {lineno}: literal {lit} out of declared range 1..{header[0]}"
                )
            else:
                current.append(lit)
    if header is None:
        raise DimacsError("missing 'p cnf' header")
    if current:
        raise DimacsError(f"clause {len(raw) + 1} is not terminated by 0")

    clauses = []
    for index, lits in enumerate(raw, 1):
        if not lits:
            raise DimacsError(f"clause {index} is empty")
        try:
            clauses.append(make_clause(lits))
        except ValueError:
            raise DimacsError(f"clause {index} is tautological") from None
    if len(raw) != header[1]:
        logger.warning("header declares %d clauses, found %d", header[1], len(raw))
    duplicates = len(clauses) - len(set(clauses))
    if duplicates:
        logger.warning("collapsed %d duplicate clauses", duplicates)

    used = sorted({abs(lit) for c in clauses for lit in c})
    dense = {old: new for new, old in enumerate(used, 1)}
    cnf = Cnf([[dense[abs(lit)] * (1 if lit > 0 else -1) for lit in c] for c in clauses])
    var_map = {new: old for old, new in dense.items()}
    return DimacsCnf(cnf, header[0], header[1], var_map, duplicates)


def parse_dimacs(text: str | bytes) -> Cnf:
    """Parse DIMACS CNF text into a :class:`Cnf` (see :func:`read_dimacs`)."""
    return read_dimacs(text).cnf


def to_dimacs(F: Cnf) -> str:
    if F.has_empty_clause:
        raise ValueError("DIMACS cannot express the empty clause")
    n = max(F.vars, default=0)
    lines = [f"p cnf {n} {len(F)}"]
    lines += [" ".join(map(str, c)) + " 0" for c in F.clauses]
    return "\n".join(lines) + "\n"
