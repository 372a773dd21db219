"""Exceptions shared across modules."""

from __future__ import annotations

import os

DEFAULT_CAP = 3**8


def default_cap() -> int:
    """Enumeration cap, overridable through the ``SCG_CAP`` environment variable."""
    raw = os.environ.get("SCG_CAP")
    if raw is None:
        return DEFAULT_CAP
    cap = int(raw)
    if cap <= 0:
        raise ValueError(f"SCG_CAP must be positive, got {raw!r}")
    return cap


class CapExceeded(RuntimeError):
    """An exhaustive enumeration would exceed the configured cap."""

    def __init__(self, what: str, size: int, cap: int):
        super().__init__(f"{what}: {size} exceeds enumeration cap {cap}")
        self.size = size
        self.cap = cap


class InfeasibleCoalition(ValueError):
    """A coalition has no envy-free, credible and Pareto-optimal agreement."""

    def __init__(self, size: int, m: int, coalition: tuple[int, ...] | None = None):
        who = f"coalition {list(coalition)}" if coalition is not None else "coalition"
        super().__init__(
            f"{who} of size {size} cannot agree with m={m} resources "
            f"(size > m and m does not divide size)"
        )
        self.size = size
        self.m = m
        self.coalition = coalition
