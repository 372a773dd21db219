"""Symmetric common-prior beliefs about outsiders and the induced coalition subgame.

Under the symmetry principle every coalition outside ``C`` is expected to
play a uniformly relabelled copy of its qualified agreement, independently
of the others. What a member of ``C`` needs is only the distribution of the
number of outsiders on its own resource, which is the same for every
resource.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Mapping

from scgpart.errors import InfeasibleCoalition
from scgpart.game import CostFunction, Game
from scgpart.partition import CoalitionClass, Partition, classify


@dataclass(frozen=True)
class CountPmf:
    """Distribution of a non-negative integer count, stored as sorted ``(u, p)`` pairs."""

    items: tuple[tuple[int, Fraction], ...]

    def __post_init__(self):
        merged: dict[int, Fraction] = {}
        for u, p in self.items:
            if u < 0:
                raise ValueError(f"negative count {u}")
            p = Fraction(p)
            if p < 0:
                raise ValueError(f"negative probability {p} at {u}")
            merged[u] = merged.get(u, Fraction(0)) + p
        if sum(merged.values()) != 1:
            raise ValueError(f"probabilities sum to {sum(merged.values())}, not 1")
        object.__setattr__(
            self, "items", tuple(sorted((u, p) for u, p in merged.items() if p))
        )

    @classmethod
    def of(cls, probs: Mapping[int, Fraction]) -> CountPmf:
        return cls(tuple(probs.items()))

    @classmethod
    def point(cls, u: int) -> CountPmf:
        return cls(((u, Fraction(1)),))

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.items)

    def __getitem__(self, u: int) -> Fraction:
        return self.as_dict().get(u, Fraction(0))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.items)

    def mean(self) -> Fraction:
        return sum((u * p for u, p in self.items), Fraction(0))

    def convolve(self, other: CountPmf) -> CountPmf:
        """Distribution of the sum of two independent counts."""
        out: dict[int, Fraction] = {}
        for u, p in self.items:
            for v, q in other.items:
                out[u + v] = out.get(u + v, Fraction(0)) + p * q
        return CountPmf.of(out)


@dataclass(frozen=True)
class Subgame:
    """A coalition playing alone against the expected cost ``g``."""

    size: int
    m: int
    g: CostFunction


def coalition_marginal(size: int, m: int) -> CountPmf:
    """Members of a coalition of ``size`` found on any fixed resource.

    A divisible coalition spreads evenly, so the count is deterministic. A
    remainder coalition occupies a uniformly random ``size``-subset of the
    resources, one member each.
    """
    cls = classify(size, m)
    if cls is CoalitionClass.DIVISIBLE:
        return CountPmf.point(size // m)
    if cls is CoalitionClass.REMAINDER:
        q = Fraction(size, m)
        return CountPmf.of({1: q, 0: 1 - q})
    raise InfeasibleCoalition(size, m)


def _resolve(p: Partition, coalition) -> tuple[int, ...]:
    if isinstance(coalition, int):
        return p.coalitions[coalition]
    coalition = tuple(sorted(coalition))
    if coalition not in p.coalitions:
        raise ValueError(f"{list(coalition)} is not a coalition of {p}")
    return coalition


def outside_count_pmf(p: Partition, coalition, game: Game) -> CountPmf:
    """Outsiders on a given resource, as seen from ``coalition`` (a tuple or an index)."""
    own = _resolve(p, coalition)
    marginals = []
    for c in p.coalitions:
        if c == own:
            continue
        try:
            marginals.append(coalition_marginal(len(c), game.m))
        except InfeasibleCoalition as exc:
            raise InfeasibleCoalition(len(c), game.m, c) from exc
    return reduce(CountPmf.convolve, marginals, CountPmf.point(0))


def effective_cost(f: CostFunction, mu: CountPmf, size: int) -> CostFunction:
    """``g(v) = sum_u mu(u) * f(u + v)`` tabulated for ``v = 1..size``."""
    need = max(mu.support) + size
    if need > f.max_load:
        raise ValueError(f"cost function defined up to {f.max_load}, need {need}")
    return CostFunction.table(
        [sum((p * f(u + v) for u, p in mu.items), Fraction(0)) for v in range(1, size + 1)]
    )


def subgame(game: Game, p: Partition, coalition) -> Subgame:
    own = _resolve(p, coalition)
    mu = outside_count_pmf(p, own, game)
    return Subgame(len(own), game.m, effective_cost(game.f, mu, len(own)))
