"""Exception types and enumeration guards."""

import os


class ObddcError(Exception):
    """Base class for all toolkit errors."""


class DimacsError(ObddcError):
    """Malformed DIMACS input."""


class StrategyError(ObddcError):
    """An ordering strategy does not apply to the given formula."""


class GuardExceeded(ObddcError):
    """An exhaustive computation was asked to exceed its size guard or budget."""


class OrderingError(ObddcError, ValueError):
    """An ordering does not cover the expected variable set."""


def guard(default: int) -> int:
    """Return the enumeration guard, honouring the ``OBDDC_GUARD_VARS`` override."""
    value = os.environ.get("OBDDC_GUARD_VARS")
    if value:
        return int(value)
    return default


def check_guard(size: int, limit: int, what: str) -> None:
    if size > limit:
        raise GuardExceeded(f"{what}: {size} exceeds guard {limit}")
