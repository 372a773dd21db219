"""Agreement predicates: covering, envy-free, credible, Pareto-optimal.

Every predicate takes the coalition's effective cost ``g`` (any callable
from within-coalition load to expected cost, normally a
:class:`~scgpart.game.CostFunction`), so beliefs about outsiders are folded
in once, upstream.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator, Sequence

import numpy as np

from scgpart.errors import CapExceeded, default_cap
from scgpart.game import LoadVector, loads
from scgpart.partition import CoalitionClass, classify

EffectiveCost = Callable[[int], Fraction]


@dataclass(frozen=True)
class Agreement:
    """A pure joint action of one coalition: ``actions[k]`` is the resource of ``coalition[k]``."""

    coalition: tuple[int, ...]
    actions: tuple[int, ...]
    m: int

    def __post_init__(self):
        object.__setattr__(self, "coalition", tuple(self.coalition))
        object.__setattr__(self, "actions", tuple(self.actions))
        if len(self.coalition) != len(self.actions):
            raise ValueError("every coalition member needs exactly one action")
        if len(set(self.coalition)) != len(self.coalition):
            raise ValueError("duplicate coalition member")
        if any(not 0 <= x < self.m for x in self.actions):
            raise ValueError(f"action out of range 0..{self.m - 1}")

    @classmethod
    def anonymous(cls, actions: Sequence[int], m: int) -> Agreement:
        """Agreement of players ``0..len(actions)-1``."""
        return cls(tuple(range(len(actions))), tuple(actions), m)

    @classmethod
    def from_loads(cls, counts: Sequence[int]) -> Agreement:
        """Some agreement realising ``counts`` (players assigned in resource order)."""
        actions = [x for x, c in enumerate(counts) for _ in range(c)]
        return cls.anonymous(actions, len(counts))

    @property
    def size(self) -> int:
        return len(self.coalition)

    @property
    def coalition_loads(self) -> LoadVector:
        return loads(self.actions, self.m)

    def action_of(self, player: int) -> int:
        return self.actions[self.coalition.index(player)]


def all_agreements(size: int, m: int) -> Iterator[Agreement]:
    for actions in itertools.product(range(m), repeat=size):
        yield Agreement(tuple(range(size)), actions, m)


def is_covering(a: Agreement) -> bool:
    counts = a.coalition_loads
    if a.size >= a.m:
        return all(c >= 1 for c in counts)
    return all(c <= 1 for c in counts)


def is_envy_free(a: Agreement, g: EffectiveCost) -> bool:
    counts = a.coalition_loads
    costs = {g(counts[x]) for x in a.actions}
    return len(costs) <= 1


def is_credible(a: Agreement, g: EffectiveCost) -> bool:
    counts = a.coalition_loads
    for x in set(a.actions):
        own = g(counts[x])
        for y in range(a.m):
            # staying put is never a deviation
            if y != x and own > g(counts[y] + 1):
                return False
    return True


def _integer_costs(values: tuple[Fraction, ...]) -> np.ndarray:
    """Scale rationals by a common denominator; comparisons stay exact."""
    denom = math.lcm(*(v.denominator for v in values))
    ints = [int(v * denom) for v in values]
    dtype = np.int64 if max(map(abs, ints)) < 2**62 else object
    return np.array(ints, dtype=dtype)


@lru_cache(maxsize=64)
def alternative_costs(
    weights: tuple[int, ...], m: int, values: tuple[Fraction, ...]
) -> np.ndarray:
    """Per-player integer-scaled costs of every joint action, one row per agreement.

    ``weights`` are the coalition members' weights (all ones when unweighted).
    """
    actions = np.array(list(itertools.product(range(m), repeat=len(weights))), dtype=np.int64)
    w = np.array(weights, dtype=np.int64)
    counts = np.stack([((actions == x) * w).sum(axis=1) for x in range(m)], axis=1)
    own = np.take_along_axis(counts, actions, axis=1)
    return _integer_costs(values)[own - 1]


def pareto_dominated(
    own_loads: Sequence[int], weights: tuple[int, ...], m: int, g: EffectiveCost, cap: int | None
) -> bool:
    """Whether some joint action weakly lowers every member's cost and strictly lowers one.

    ``own_loads[k]`` is the load currently faced by the k-th member.
    """
    cap = default_cap() if cap is None else cap
    total = m ** len(weights)
    if total > cap:
        raise CapExceeded("Pareto oracle, alternative agreements", total, cap)
    values = tuple(g(k) for k in range(1, sum(weights) + 1))
    alt = alternative_costs(weights, m, values)
    mine = _integer_costs(values)[[load - 1 for load in own_loads]]
    dominated = np.all(alt <= mine, axis=1) & np.any(alt < mine, axis=1)
    return bool(dominated.any())


def is_pareto_optimal(
    a: Agreement, g: EffectiveCost, oracle: bool = False, cap: int | None = None
) -> bool:
    """Pareto-optimality under ``g``.

    The default path uses the fact that Pareto-optimal agreements are exactly
    the covering ones. With ``oracle=True`` every one of the ``m**|C|``
    alternatives is checked for domination instead.
    """
    if not oracle:
        return is_covering(a)
    counts = a.coalition_loads
    return not pareto_dominated(
        [counts[x] for x in a.actions], (1,) * a.size, a.m, g, cap
    )


def is_qualified(a: Agreement, g: EffectiveCost, oracle: bool = False) -> bool:
    """Envy-free, credible and Pareto-optimal."""
    return is_envy_free(a, g) and is_credible(a, g) and is_pareto_optimal(a, g, oracle=oracle)


def qualified_canonical_loads(size: int, m: int) -> frozenset[LoadVector] | None:
    """Load vectors (up to resource permutation) of qualified agreements, or ``None``."""
    cls = classify(size, m)
    if cls is CoalitionClass.DIVISIBLE:
        return frozenset({(size // m,) * m})
    if cls is CoalitionClass.REMAINDER:
        return frozenset({(1,) * size + (0,) * (m - size)})
    return None
