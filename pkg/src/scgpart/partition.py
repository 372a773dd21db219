"""Communication partitions of the player set."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from sympy.utilities.iterables import multiset_partitions, partitions

from scgpart.errors import CapExceeded

DEFAULT_PARTITION_BOUND = 10
SET_PARTITION_BOUND = 8


@dataclass(frozen=True)
class Partition:
    """Coalitions of 0-based player indices, kept sorted."""

    coalitions: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canon = tuple(sorted(tuple(sorted(c)) for c in self.coalitions))
        object.__setattr__(self, "coalitions", canon)

    @classmethod
    def of(cls, coalitions: Iterable[Iterable[int]]) -> Partition:
        return cls(tuple(tuple(c) for c in coalitions))

    @classmethod
    def from_sizes(cls, sizes: Sequence[int]) -> Partition:
        """Consecutive players grouped by the given sizes."""
        out, start = [], 0
        for s in sizes:
            out.append(tuple(range(start, start + s)))
            start += s
        return cls(tuple(out))

    @classmethod
    def grand(cls, n: int) -> Partition:
        return cls((tuple(range(n)),))

    @classmethod
    def singletons(cls, n: int) -> Partition:
        return cls(tuple((i,) for i in range(n)))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.coalitions)

    @property
    def sizes(self) -> tuple[int, ...]:
        """Coalition sizes, largest first."""
        return tuple(sorted((len(c) for c in self.coalitions), reverse=True))

    def coalition_of(self, player: int) -> tuple[int, ...]:
        for c in self.coalitions:
            if player in c:
                return c
        raise ValueError(f"player {player} not in partition")

    def to_json(self) -> list[list[int]]:
        return [list(c) for c in self.coalitions]

    def __str__(self):
        return "[" + "|".join(",".join(map(str, c)) for c in self.coalitions) + "]"


def validate_partition(coalitions: Iterable[Iterable[int]], n: int) -> list[str]:
    """Problems with ``coalitions`` as a partition of ``0..n-1``; empty if valid."""
    problems = []
    seen: dict[int, int] = {}
    for idx, c in enumerate(coalitions):
        c = list(c)
        if not c:
            problems.append(f"coalition {idx} is empty")
        for p in c:
            if not isinstance(p, int) or isinstance(p, bool):
                problems.append(f"player {p!r} is not an integer index")
            elif not 0 <= p < n:
                problems.append(f"player {p} out of range 0..{n - 1}")
            elif p in seen:
                problems.append(f"player {p} duplicated")
            seen[p] = seen.get(p, 0) + 1
    problems.extend(f"player {p} missing" for p in range(n) if p not in seen)
    return problems


class CoalitionClass(enum.Enum):
    DIVISIBLE = "divisible"  # m divides |C|
    REMAINDER = "remainder"  # |C| < m
    INFEASIBLE = "infeasible"  # |C| > m and m does not divide |C|


def classify(size: int, m: int) -> CoalitionClass:
    if size < 1:
        raise ValueError(f"coalition size must be >= 1, got {size}")
    if size % m == 0:
        return CoalitionClass.DIVISIBLE
    if size < m:
        return CoalitionClass.REMAINDER
    return CoalitionClass.INFEASIBLE


def is_balanced(p: Partition | Sequence[int], m: int) -> bool:
    """At most one coalition smaller than ``m``; all others of size divisible by ``m``.

    Accepts a partition or its sequence of coalition sizes.
    """
    sizes = p.sizes if isinstance(p, Partition) else tuple(p)
    small = [s for s in sizes if s < m]
    if len(small) > 1:
        return False
    return all(s % m == 0 for s in sizes if s >= m)


def enumerate_partitions_by_sizes(
    n: int, max_partitions: int | None = None, bound: int = DEFAULT_PARTITION_BOUND
) -> Iterator[Partition]:
    """One canonical partition per multiset of coalition sizes.

    Sizes are listed largest first and players are assigned consecutively.
    """
    if n > bound:
        raise CapExceeded("size-multiset enumeration, players", n, bound)
    count = 0
    for parts in partitions(n):
        if max_partitions is not None and count >= max_partitions:
            return
        sizes = sorted((k for k, mult in parts.items() for _ in range(mult)), reverse=True)
        yield Partition.from_sizes(sizes)
        count += 1


def enumerate_set_partitions(n: int, bound: int = SET_PARTITION_BOUND) -> Iterator[Partition]:
    """Every set partition of ``0..n-1`` (Bell-number many)."""
    if n > bound:
        raise CapExceeded("set-partition enumeration, players", n, bound)
    for blocks in multiset_partitions(list(range(n))):
        yield Partition(tuple(tuple(b) for b in blocks))


def make_balanced_partition(n: int, m: int, divisible_block_size: int | None = None) -> Partition:
    """Blocks of ``divisible_block_size`` (default ``m``) players plus one remainder block."""
    block = m if divisible_block_size is None else divisible_block_size
    if block <= 0 or block % m:
        raise ValueError(f"block size {block} is not a positive multiple of m={m}")
    remainder = n % m
    body = n - remainder
    sizes = [block] * (body // block)
    if body % block:
        sizes.append(body % block)
    if remainder:
        sizes.append(remainder)
    return Partition.from_sizes(sizes)
