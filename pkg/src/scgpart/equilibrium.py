"""Partition-induced equilibria at load-vector granularity.

``induce`` uses the closed-form behaviour of each coalition class.
``brute_force_profile_oracle`` rebuilds the same object from scratch: it
enumerates every agreement of every coalition, filters with the agreement
predicates (Pareto by exhaustive domination check), and derives outsider
beliefs from the resulting orbits. The two must agree exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Mapping

from scgpart.agreement import Agreement, is_qualified
from scgpart.belief import CountPmf, effective_cost
from scgpart.errors import CapExceeded, InfeasibleCoalition, default_cap
from scgpart.game import (
    CostFunction,
    Game,
    LoadVector,
    is_evenly_distributed,
    loads,
    max_cost_of_loads,
    optimal_costs,
    total_cost_of_loads,
)
from scgpart.partition import (
    CoalitionClass,
    Partition,
    classify,
    enumerate_partitions_by_sizes,
    enumerate_set_partitions,
    is_balanced,
)

Distribution = tuple[tuple[LoadVector, Fraction], ...]


def _freeze(dist: Mapping[LoadVector, Fraction]) -> Distribution:
    return tuple(sorted((k, v) for k, v in dist.items() if v))


def _product(a: Mapping[LoadVector, Fraction], b: Mapping[LoadVector, Fraction]):
    out: dict[LoadVector, Fraction] = {}
    for u, p in a.items():
        for v, q in b.items():
            key = tuple(x + y for x, y in zip(u, v))
            out[key] = out.get(key, Fraction(0)) + p * q
    return out


@dataclass(frozen=True)
class CoalitionBehaviour:
    """How outsiders expect a coalition to load the resources."""

    canonical_loads: LoadVector
    support: Distribution

    def as_dict(self) -> dict[LoadVector, Fraction]:
        return dict(self.support)


@dataclass(frozen=True)
class NoEquilibrium:
    """Some coalition has no qualified agreement, so the partition induces nothing."""

    coalition: tuple[int, ...]
    m: int

    def __str__(self):
        return (
            f"no equilibrium: coalition {list(self.coalition)} of size "
            f"{len(self.coalition)} has no envy-free, credible, Pareto-optimal "
            f"agreement with m={self.m}"
        )


@dataclass(frozen=True)
class InducedProfile:
    """Independent product of coalition behaviours, with its exact joint support."""

    partition: Partition
    m: int
    behaviours: tuple[CoalitionBehaviour, ...]
    support: Distribution = field(init=False)

    def __post_init__(self):
        joint: dict[LoadVector, Fraction] = {(0,) * self.m: Fraction(1)}
        for b in self.behaviours:
            joint = _product(joint, b.as_dict())
        object.__setattr__(self, "support", _freeze(joint))

    def as_dict(self) -> dict[LoadVector, Fraction]:
        return dict(self.support)

    def class_probabilities(self) -> dict[LoadVector, Fraction]:
        """Support probability aggregated by load vector up to resource permutation."""
        out: dict[LoadVector, Fraction] = {}
        for lv, p in self.support:
            key = tuple(sorted(lv, reverse=True))
            out[key] = out.get(key, Fraction(0)) + p
        return out


def coalition_behaviour(size: int, m: int) -> CoalitionBehaviour:
    cls = classify(size, m)
    if cls is CoalitionClass.DIVISIBLE:
        lv = (size // m,) * m
        return CoalitionBehaviour(lv, ((lv, Fraction(1)),))
    if cls is CoalitionClass.REMAINDER:
        p = Fraction(1, comb(m, size))
        vectors = []
        for used in itertools.combinations(range(m), size):
            vectors.append(tuple(1 if x in used else 0 for x in range(m)))
        return CoalitionBehaviour(
            (1,) * size + (0,) * (m - size), _freeze({v: p for v in vectors})
        )
    raise InfeasibleCoalition(size, m)


def induce(game: Game, p: Partition) -> InducedProfile | NoEquilibrium:
    if p.n != game.n:
        raise ValueError(f"partition covers {p.n} players, game has {game.n}")
    behaviours = []
    for c in p.coalitions:
        if classify(len(c), game.m) is CoalitionClass.INFEASIBLE:
            return NoEquilibrium(c, game.m)
        behaviours.append(coalition_behaviour(len(c), game.m))
    return InducedProfile(p, game.m, tuple(behaviours))


def is_profile_bar_c_optimal(pr: InducedProfile, game: Game) -> bool:
    best, _ = optimal_costs(game)
    return all(total_cost_of_loads(game.f, lv) == best for lv, _ in pr.support)


def is_profile_hat_c_optimal(pr: InducedProfile, game: Game) -> bool:
    _, best = optimal_costs(game)
    return all(max_cost_of_loads(game.f, lv) == best for lv, _ in pr.support)


@dataclass(frozen=True)
class PartitionRow:
    sizes: tuple[int, ...]
    balanced: bool
    equilibrium: bool
    bar_c_optimal: bool
    hat_c_optimal: bool
    support_size: int
    min_bar_c: Fraction | None
    max_bar_c: Fraction | None
    no_equilibrium_coalition: tuple[int, ...] | None = None


@dataclass
class Theorem1Report:
    n: int
    m: int
    rows: list[PartitionRow]
    violations: list[str]

    @property
    def ok(self) -> bool:
        return not self.violations


def analyze_partition(game: Game, p: Partition, oracle: bool = False) -> PartitionRow:
    pr = brute_force_profile_oracle(game, p) if oracle else induce(game, p)
    balanced = is_balanced(p, game.m)
    if isinstance(pr, NoEquilibrium):
        return PartitionRow(p.sizes, balanced, False, False, False, 0, None, None, pr.coalition)
    costs = [total_cost_of_loads(game.f, lv) for lv, _ in pr.support]
    return PartitionRow(
        p.sizes,
        balanced,
        True,
        is_profile_bar_c_optimal(pr, game),
        is_profile_hat_c_optimal(pr, game),
        len(pr.support),
        min(costs),
        max(costs),
    )


def verify_theorem_1(
    n: int, m: int, f: CostFunction, all_partitions: bool = False, oracle: bool = False
) -> Theorem1Report:
    """Check, over every partition shape, that equilibrium + total-cost optimality
    holds exactly for balanced partitions and that balanced ones are also
    max-cost optimal.

    ``all_partitions`` walks every set partition rather than one per size multiset.
    """
    game = Game(n, m, f)
    parts = enumerate_set_partitions(n) if all_partitions else enumerate_partitions_by_sizes(n)
    rows, violations = [], []
    for p in parts:
        row = analyze_partition(game, p, oracle=oracle)
        rows.append(row)
        good = row.equilibrium and row.bar_c_optimal
        if good != row.balanced:
            violations.append(
                f"{p}: balanced={row.balanced} but equilibrium={row.equilibrium}, "
                f"bar-c-optimal={row.bar_c_optimal}"
            )
        if row.balanced and not row.hat_c_optimal:
            violations.append(f"{p}: balanced but not hat-c-optimal")
    return Theorem1Report(n, m, rows, violations)


# ---------------------------------------------------------------------------
# brute-force path


@lru_cache(maxsize=4096)
def _qualified_actions(size: int, m: int, g_values: tuple[Fraction, ...]) -> tuple:
    g = CostFunction.table(g_values)
    return tuple(
        actions
        for actions in itertools.product(range(m), repeat=size)
        if is_qualified(Agreement.anonymous(actions, m), g, oracle=True)
    )


def _orbit_distribution(qualified: tuple, m: int) -> dict[LoadVector, Fraction]:
    """Uniform mixture over every qualified agreement, aggregated to loads."""
    p = Fraction(1, len(qualified))
    out: dict[LoadVector, Fraction] = {}
    for actions in qualified:
        lv = loads(actions, m)
        out[lv] = out.get(lv, Fraction(0)) + p
    return out


def _count_on_first_resource(joint: Mapping[LoadVector, Fraction]) -> CountPmf:
    out: dict[int, Fraction] = {}
    for lv, p in joint.items():
        out[lv[0]] = out.get(lv[0], Fraction(0)) + p
    return CountPmf.of(out)


def _uniform_players_prior(outsiders: int, m: int) -> CountPmf:
    """Each outsider on the resource independently with probability ``1/m``."""
    q = Fraction(1, m)
    return CountPmf.of(
        {u: comb(outsiders, u) * q**u * (1 - q) ** (outsiders - u) for u in range(outsiders + 1)}
    )


def oracle_qualified_agreements(
    game: Game, p: Partition, max_rounds: int = 10
) -> dict[tuple[int, ...], tuple] | NoEquilibrium:
    """Qualified joint actions of every coalition, found by exhaustive search.

    Beliefs start from independent uniform outsiders and are then recomputed
    from the other coalitions' qualified orbits until the qualified sets stop
    changing.
    """
    m = game.m
    beliefs = {c: _uniform_players_prior(game.n - len(c), m) for c in p.coalitions}
    previous = None
    for _ in range(max_rounds):
        current = {}
        for c in p.coalitions:
            g = effective_cost(game.f, beliefs[c], len(c))
            current[c] = _qualified_actions(len(c), m, g.values)
            if not current[c]:
                return NoEquilibrium(c, m)
        if current == previous:
            return current
        previous = current
        dists = {c: _orbit_distribution(q, m) for c, q in current.items()}
        for c in p.coalitions:
            joint: dict[LoadVector, Fraction] = {(0,) * m: Fraction(1)}
            for d in p.coalitions:
                if d != c:
                    joint = _product(joint, dists[d])
            beliefs[c] = _count_on_first_resource(joint)
    raise RuntimeError(f"qualified sets did not stabilise within {max_rounds} rounds")


def brute_force_profile_oracle(
    game: Game, p: Partition, cap: int | None = None
) -> InducedProfile | NoEquilibrium:
    cap = default_cap() if cap is None else cap
    if game.m**game.n > cap:
        raise CapExceeded("brute-force profile oracle, outcomes", game.m**game.n, cap)
    if p.n != game.n:
        raise ValueError(f"partition covers {p.n} players, game has {game.n}")
    qualified = oracle_qualified_agreements(game, p)
    if isinstance(qualified, NoEquilibrium):
        return qualified
    behaviours = []
    for c in p.coalitions:
        dist = _orbit_distribution(qualified[c], game.m)
        canonical = max(tuple(sorted(lv, reverse=True)) for lv in dist)
        behaviours.append(CoalitionBehaviour(canonical, _freeze(dist)))
    return InducedProfile(p, game.m, tuple(behaviours))


def oracle_outcome_distribution(
    game: Game, p: Partition, cap: int | None = None
) -> dict[tuple[int, ...], Fraction] | NoEquilibrium:
    """The induced profile over full outcomes (player-level actions)."""
    cap = default_cap() if cap is None else cap
    if game.m**game.n > cap:
        raise CapExceeded("outcome distribution", game.m**game.n, cap)
    qualified = oracle_qualified_agreements(game, p)
    if isinstance(qualified, NoEquilibrium):
        return qualified
    out: dict[tuple[int, ...], Fraction] = {}
    choices = [qualified[c] for c in p.coalitions]
    weight = Fraction(1)
    for q in choices:
        weight /= len(q)
    for combo in itertools.product(*choices):
        outcome = [0] * game.n
        for c, actions in zip(p.coalitions, combo):
            for player, x in zip(c, actions):
                outcome[player] = x
        out[tuple(outcome)] = weight
    return out


def support_is_even(pr: InducedProfile) -> bool:
    return all(is_evenly_distributed(lv) for lv, _ in pr.support)
