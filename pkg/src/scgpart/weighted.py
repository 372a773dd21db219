"""Weighted players: loads are total weight, and envy compares base weights.

A player's *base weight* is the total weight on their resource minus their
own weight. Envy-freeness asks for equal base weights across players on
different resources; credibility compares the current load with the load
after moving one's own weight elsewhere.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Sequence

from scgpart.agreement import Agreement, EffectiveCost, is_covering, pareto_dominated
from scgpart.belief import CountPmf, effective_cost
from scgpart.errors import CapExceeded, default_cap
from scgpart.game import CostFunction, LoadVector, require_valid
from scgpart.partition import Partition, enumerate_set_partitions, SET_PARTITION_BOUND


@dataclass(frozen=True)
class WeightedGame:
    weights: tuple[int, ...]
    m: int
    f: CostFunction

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(self.weights))
        if not self.weights:
            raise ValueError("no players")
        if any(w < 1 for w in self.weights):
            raise ValueError(f"weights must be positive integers, got {self.weights}")
        if self.m < 1:
            raise ValueError(f"need m >= 1, got {self.m}")
        require_valid(self.f, sum(self.weights))

    @property
    def n(self) -> int:
        return len(self.weights)

    @property
    def total_weight(self) -> int:
        return sum(self.weights)


def weighted_loads(actions: Sequence[int], weights: Sequence[int], m: int) -> LoadVector:
    out = [0] * m
    for x, w in zip(actions, weights, strict=True):
        out[x] += w
    return tuple(out)


def agreement_loads(a: Agreement, weights: Sequence[int]) -> LoadVector:
    """Coalition weight per resource; ``weights`` is indexed by player id."""
    return weighted_loads(a.actions, [weights[i] for i in a.coalition], a.m)


def weighted_total_cost(game: WeightedGame, outcome: Sequence[int]) -> Fraction:
    lv = weighted_loads(outcome, game.weights, game.m)
    return sum((n * game.f(n) for n in lv if n), Fraction(0))


def weighted_max_cost(game: WeightedGame, outcome: Sequence[int]) -> Fraction:
    """Unit cost of the heaviest resource (not the largest cost paid by one player)."""
    return game.f(max(weighted_loads(outcome, game.weights, game.m)))


def base_weights(a: Agreement, weights: Sequence[int]) -> dict[int, int]:
    lv = agreement_loads(a, weights)
    return {i: lv[x] - weights[i] for i, x in zip(a.coalition, a.actions)}


def weighted_is_credible(a: Agreement, weights: Sequence[int], g: EffectiveCost) -> bool:
    lv = agreement_loads(a, weights)
    for i, x in zip(a.coalition, a.actions):
        own = g(lv[x])
        for k in range(a.m):
            if k != x and own > g(lv[k] + weights[i]):
                return False
    return True


def weighted_is_envy_free(a: Agreement, weights: Sequence[int]) -> bool:
    base = base_weights(a, weights)
    members = list(zip(a.coalition, a.actions))
    for (i, x), (j, y) in itertools.combinations(members, 2):
        if x != y and base[i] != base[j]:
            return False
    return True


def weighted_is_pareto_optimal(
    a: Agreement, weights: Sequence[int], g: EffectiveCost, oracle: bool = False,
    cap: int | None = None,
) -> bool:
    if not oracle:
        return is_covering(a)
    lv = agreement_loads(a, weights)
    return not pareto_dominated(
        [lv[x] for x in a.actions], tuple(weights[i] for i in a.coalition), a.m, g, cap
    )


def weighted_is_qualified(
    a: Agreement, weights: Sequence[int], g: EffectiveCost, oracle: bool = False
) -> bool:
    return (
        weighted_is_envy_free(a, weights)
        and weighted_is_credible(a, weights, g)
        and weighted_is_pareto_optimal(a, weights, g, oracle=oracle)
    )


@dataclass(frozen=True)
class WeightedStructure:
    """Shape of every qualified agreement of a coalition.

    ``groups`` holds ``(weight, players_per_resource, resources)``: each of
    ``resources`` resources is shared by ``players_per_resource`` players of
    that weight, so every player sees base weight ``b``. With a single
    resource envy-freeness is vacuous, ``b`` is ``None`` and every group
    sits on that resource.
    """

    b: int | None
    groups: tuple[tuple[int, int, int], ...]
    all_distinct: bool

    def loads(self, m: int) -> LoadVector:
        """Weight per resource, heaviest first, unused resources last."""
        if self.b is None:
            return (sum(w * k for w, k, _ in self.groups),) + (0,) * (m - 1)
        lv = [w * k for w, k, r in self.groups for _ in range(r)]
        lv += [0] * (m - len(lv))
        return tuple(sorted(lv, reverse=True))


def weighted_qualified_conditions(coalition_weights: Sequence[int], m: int) -> WeightedStructure | None:
    counts = Counter(coalition_weights)
    size = len(coalition_weights)
    if size <= m:
        return WeightedStructure(0, tuple((w, 1, c) for w, c in sorted(counts.items())), True)
    if m == 1:
        return WeightedStructure(None, tuple((w, c, 1) for w, c in sorted(counts.items())), False)
    for b in range(sum(coalition_weights) + 1):
        if any(b % w for w in counts):
            continue
        if any(c % (b // w + 1) for w, c in counts.items()):
            continue
        groups = tuple((w, b // w + 1, c // (b // w + 1)) for w, c in sorted(counts.items()))
        if sum(r for _, _, r in groups) == m:
            return WeightedStructure(b, groups, False)
    return None


# ---------------------------------------------------------------------------
# multiway number partitioning


class MnpObjective(enum.Enum):
    MINIMAX = "minimax"
    MAXIMIN = "maximin"
    MIN_GAP = "min_gap"
    MIN_VAR = "min_var"


def objective_value(obj: MnpObjective, lv: Sequence[int]) -> int:
    """Reported objective: largest bin, smallest bin, max-min gap, or sum of squares."""
    if obj is MnpObjective.MINIMAX:
        return max(lv)
    if obj is MnpObjective.MAXIMIN:
        return min(lv)
    if obj is MnpObjective.MIN_GAP:
        return max(lv) - min(lv)
    return sum(x * x for x in lv)


def _key(obj: MnpObjective, lv: Sequence[int]) -> int:
    v = objective_value(obj, lv)
    return -v if obj is MnpObjective.MAXIMIN else v


def _canon(lv: Sequence[int]) -> LoadVector:
    return tuple(sorted(lv, reverse=True))


@dataclass(frozen=True)
class MnpSolution:
    objective: MnpObjective
    value: int
    loads: LoadVector
    assignment: tuple[int, ...]
    argmin: tuple[LoadVector, ...]


def _water_fill_squares(lv: Sequence[int], remaining: int) -> Fraction:
    """Smallest sum of squares reachable by adding ``remaining`` as real mass."""
    xs = sorted(lv)
    r = Fraction(remaining)
    k = 1
    # raise the k lowest bins to a common level
    while True:
        level = (sum(xs[:k]) + r) / k
        if k == len(xs) or level <= xs[k]:
            break
        k += 1
    return k * level * level + sum(x * x for x in xs[k:])


def _lower_bound(obj: MnpObjective, lv: list[int], remaining: int, total: int, m: int):
    hi = max(max(lv), -(-total // m))
    lo = min(min(lv) + remaining, total // m)
    if obj is MnpObjective.MINIMAX:
        return hi
    if obj is MnpObjective.MAXIMIN:
        return -lo
    if obj is MnpObjective.MIN_GAP:
        return max(0, hi - lo)
    return _water_fill_squares(lv, remaining)


def _solve_exhaustive(weights, m, obj, cap):
    total = m ** len(weights)
    if total > cap:
        raise CapExceeded("MNP enumeration, assignments", total, cap)
    best, witness, argmin = None, None, set()
    for actions in itertools.product(range(m), repeat=len(weights)):
        lv = weighted_loads(actions, weights, m)
        k = _key(obj, lv)
        if best is None or k < best:
            best, witness, argmin = k, actions, {_canon(lv)}
        elif k == best:
            argmin.add(_canon(lv))
    return witness, argmin


def _solve_bnb(weights, m, obj):
    order = sorted(range(len(weights)), key=lambda i: -weights[i])
    ws = [weights[i] for i in order]
    total = sum(ws)
    suffix = [sum(ws[k:]) for k in range(len(ws) + 1)]
    state = {"best": None, "witness": None, "argmin": set()}
    lv = [0] * m
    placed = [0] * len(ws)

    def visit(k):
        if k == len(ws):
            key = _key(obj, lv)
            if state["best"] is None or key < state["best"]:
                state.update(best=key, witness=tuple(placed), argmin={_canon(lv)})
            elif key == state["best"]:
                state["argmin"].add(_canon(lv))
            return
        if state["best"] is not None and _lower_bound(obj, lv, suffix[k], total, m) > state["best"]:
            return
        tried = set()
        for x in range(m):
            # bins with equal load are interchangeable
            if lv[x] in tried:
                continue
            tried.add(lv[x])
            lv[x] += ws[k]
            placed[k] = x
            visit(k + 1)
            lv[x] -= ws[k]

    visit(0)
    witness = [0] * len(weights)
    for pos, i in enumerate(order):
        witness[i] = state["witness"][pos]
    return tuple(witness), state["argmin"]


def mnp_solve(
    weights: Sequence[int],
    m: int,
    objective: MnpObjective | str,
    cap: int | None = None,
    branch_and_bound: bool = False,
) -> MnpSolution:
    """Exact optimum of a multiway number partitioning objective.

    Without ``branch_and_bound`` all ``m**len(weights)`` assignments are
    enumerated, subject to ``cap``. ``min_var`` minimises the sum of squared
    bin totals, which at a fixed total ranks assignments exactly as the
    variance does.
    """
    obj = MnpObjective(objective)
    weights = tuple(weights)
    if not weights or any(w < 1 for w in weights):
        raise ValueError(f"weights must be positive integers, got {weights}")
    if branch_and_bound:
        witness, argmin = _solve_bnb(weights, m, obj)
    else:
        witness, argmin = _solve_exhaustive(weights, m, obj, default_cap() if cap is None else cap)
    lv = weighted_loads(witness, weights, m)
    sol = MnpSolution(obj, objective_value(obj, lv), lv, witness, tuple(sorted(argmin, reverse=True)))
    if obj is MnpObjective.MINIMAX:
        assert sol.value >= max(-(-sum(weights) // m), max(weights))
    return sol


def reachable_loads(weights: Sequence[int], m: int, cap: int | None = None) -> set[LoadVector]:
    """Every bin-total vector, up to bin permutation, over all assignments."""
    cap = default_cap() if cap is None else cap
    if m ** len(weights) > cap:
        raise CapExceeded("load enumeration, assignments", m ** len(weights), cap)
    return {
        _canon(weighted_loads(a, weights, m))
        for a in itertools.product(range(m), repeat=len(weights))
    }


@dataclass
class CBarEquivalenceReport:
    weights: tuple[int, ...]
    m: int
    linear_argmin: tuple[LoadVector, ...]
    min_var_argmin: tuple[LoadVector, ...]
    exponential_argmin: tuple[LoadVector, ...]
    minimax_argmin: tuple[LoadVector, ...]

    @property
    def linear_matches_min_var(self) -> bool:
        return self.linear_argmin == self.min_var_argmin

    @property
    def exponential_within_minimax(self) -> bool:
        return set(self.exponential_argmin) <= set(self.minimax_argmin)

    @property
    def ok(self) -> bool:
        return self.linear_matches_min_var and self.exponential_within_minimax


def weighted_c_bar_equivalence_check(weights: Sequence[int], m: int, cap: int | None = None):
    """Compare total-cost minimisers with MNP optima for ``f(x)=x`` and ``f(x)=2**x``."""
    weights = tuple(weights)
    total = sum(weights)
    reach = reachable_loads(weights, m, cap)

    def argmin(score):
        best = min(score(lv) for lv in reach)
        return tuple(sorted((lv for lv in reach if score(lv) == best), reverse=True))

    linear = CostFunction.linear(total)
    expo = CostFunction.table([2**k for k in range(1, total + 1)])

    def c_bar(f):
        return lambda lv: sum((x * f(x) for x in lv if x), Fraction(0))

    return CBarEquivalenceReport(
        weights,
        m,
        argmin(c_bar(linear)),
        argmin(lambda lv: objective_value(MnpObjective.MIN_VAR, lv)),
        argmin(c_bar(expo)),
        argmin(lambda lv: objective_value(MnpObjective.MINIMAX, lv)),
    )


# ---------------------------------------------------------------------------
# partition search


def _uniform_weight_prior(outsider_weights: Sequence[int], m: int) -> CountPmf:
    q = Fraction(1, m)
    parts = [CountPmf.of({w: q, 0: 1 - q}) if m > 1 else CountPmf.point(w) for w in outsider_weights]
    return reduce(CountPmf.convolve, parts, CountPmf.point(0))


@lru_cache(maxsize=4096)
def _qualified(ws: tuple[int, ...], m: int, g_values: tuple[Fraction, ...], oracle: bool):
    g = CostFunction.table(g_values)
    return tuple(
        actions
        for actions in itertools.product(range(m), repeat=len(ws))
        if weighted_is_qualified(Agreement.anonymous(actions, m), ws, g, oracle=oracle)
    )


def _load_distribution(qualified, ws, m) -> dict[LoadVector, Fraction]:
    p = Fraction(1, len(qualified))
    out: dict[LoadVector, Fraction] = {}
    for actions in qualified:
        lv = weighted_loads(actions, ws, m)
        out[lv] = out.get(lv, Fraction(0)) + p
    return out


def _combine(a, b):
    out: dict[LoadVector, Fraction] = {}
    for u, p in a.items():
        for v, q in b.items():
            key = tuple(x + y for x, y in zip(u, v))
            out[key] = out.get(key, Fraction(0)) + p * q
    return out


def qualified_weighted_agreements(
    game: WeightedGame, p: Partition, oracle: bool = False, max_rounds: int = 10
) -> dict[tuple[int, ...], tuple] | tuple[int, ...]:
    """Qualified joint actions per coalition, or the first coalition that has none.

    Outsider beliefs start from independent uniform players and are refined
    from the other coalitions' qualified orbits until stable.
    """
    m, W = game.m, game.weights
    cw = {c: tuple(W[i] for i in c) for c in p.coalitions}
    beliefs = {
        c: _uniform_weight_prior([W[i] for i in range(game.n) if i not in c], m)
        for c in p.coalitions
    }
    previous = None
    for _ in range(max_rounds):
        current = {}
        for c in p.coalitions:
            g = effective_cost(game.f, beliefs[c], sum(cw[c]))
            current[c] = _qualified(cw[c], m, g.values, oracle)
            if not current[c]:
                return c
        if current == previous:
            return current
        previous = current
        dists = {c: _load_distribution(q, cw[c], m) for c, q in current.items()}
        for c in p.coalitions:
            joint = {(0,) * m: Fraction(1)}
            for d in p.coalitions:
                if d != c:
                    joint = _combine(joint, dists[d])
            first: dict[int, Fraction] = {}
            for lv, q in joint.items():
                first[lv[0]] = first.get(lv[0], Fraction(0)) + q
            beliefs[c] = CountPmf.of(first)
    raise RuntimeError(f"qualified sets did not stabilise within {max_rounds} rounds")


def weighted_induced_support(
    game: WeightedGame, p: Partition, oracle: bool = False
) -> dict[LoadVector, Fraction] | tuple[int, ...]:
    """Joint distribution of resource weights, or the coalition that cannot agree."""
    qualified = qualified_weighted_agreements(game, p, oracle=oracle)
    if not isinstance(qualified, dict):
        return qualified
    joint = {(0,) * game.m: Fraction(1)}
    for c in p.coalitions:
        ws = tuple(game.weights[i] for i in c)
        joint = _combine(joint, _load_distribution(qualified[c], ws, game.m))
    return joint


def render_agreement(a: Agreement, weights: Sequence[int]) -> str:
    """Resources as ``|``-separated groups of player weights, heaviest resource first."""
    groups: list[list[int]] = [[] for _ in range(a.m)]
    for i, x in zip(a.coalition, a.actions):
        groups[x].append(weights[i])
    groups = [sorted(g_, reverse=True) for g_ in groups]
    groups.sort(key=lambda g_: (-sum(g_), [-w for w in g_]))
    sep = "" if all(w < 10 for w in weights) else ","
    return "[" + "|".join(sep.join(map(str, g_)) for g_ in groups) + "]"


@dataclass(frozen=True)
class AgreementDiagnosis:
    agreement: str
    loads: LoadVector
    envy_free: bool
    credible: bool
    pareto_optimal: bool
    base_weights: tuple[tuple[int, int], ...]  # (player weight, base weight)


@dataclass(frozen=True)
class Rejection:
    partition: Partition
    reason: str  # "no-agreement" or "miscoordination"
    coalition: tuple[int, ...] | None = None
    diagnoses: tuple[AgreementDiagnosis, ...] = ()
    worst_max_load: int | None = None
    suboptimal_probability: Fraction | None = None


@dataclass
class HatCSearch:
    weights: tuple[int, ...]
    m: int
    minimax: int
    partition: Partition | None
    rejections: list[Rejection] = field(default_factory=list)
    checked: int = 0


def diagnose_minimax_agreements(game: WeightedGame, coalition: tuple[int, ...], g) -> tuple:
    """Why the coalition's own minimax agreements fail, one entry per shape."""
    ws = tuple(game.weights[i] for i in coalition)
    best = min(
        max(weighted_loads(a, ws, game.m)) for a in itertools.product(range(game.m), repeat=len(ws))
    )
    seen, out = set(), []
    for actions in itertools.product(range(game.m), repeat=len(ws)):
        if max(weighted_loads(actions, ws, game.m)) != best:
            continue
        a = Agreement(coalition, actions, game.m)
        shape = render_agreement(a, game.weights)
        if shape in seen:
            continue
        seen.add(shape)
        base = base_weights(a, game.weights)
        out.append(
            AgreementDiagnosis(
                shape,
                _canon(agreement_loads(a, game.weights)),
                weighted_is_envy_free(a, game.weights),
                weighted_is_credible(a, game.weights, g),
                weighted_is_pareto_optimal(a, game.weights, g),
                tuple(sorted((game.weights[i], base[i]) for i in coalition)),
            )
        )
    return tuple(out)


def find_hat_c_optimal_partition(
    game: WeightedGame, bound: int = SET_PARTITION_BOUND, oracle: bool = False
) -> HatCSearch:
    """First set partition whose induced outcomes all reach the minimax optimum.

    Weights break player anonymity, so every set partition is visited.
    ``result.partition`` is ``None`` when no partition qualifies.
    """
    if game.n > bound:
        raise CapExceeded("weighted partition search, players", game.n, bound)
    minimax = mnp_solve(game.weights, game.m, MnpObjective.MINIMAX, branch_and_bound=True).value
    search = HatCSearch(game.weights, game.m, minimax, None)
    for p in enumerate_set_partitions(game.n, bound=bound):
        search.checked += 1
        support = weighted_induced_support(game, p, oracle=oracle)
        if not isinstance(support, dict):
            c = support
            diag = ()
            # without outsiders the coalition's expected cost is f itself
            if len(p.coalitions) == 1:
                diag = diagnose_minimax_agreements(game, c, game.f)
            search.rejections.append(Rejection(p, "no-agreement", c, diag))
            continue
        bad = {lv: q for lv, q in support.items() if max(lv) != minimax}
        if not bad:
            search.partition = p
            return search
        search.rejections.append(
            Rejection(
                p,
                "miscoordination",
                worst_max_load=max(max(lv) for lv in bad),
                suboptimal_probability=sum(bad.values(), Fraction(0)),
            )
        )
    return search


def is_single_unequal_coalition(game: WeightedGame, p: Partition) -> bool:
    """At most one coalition's qualified agreements load resources unequally."""
    qualified = qualified_weighted_agreements(game, p)
    if not isinstance(qualified, dict):
        return False
    unequal = 0
    for c, q in qualified.items():
        ws = tuple(game.weights[i] for i in c)
        if any(len(set(weighted_loads(a, ws, game.m))) > 1 for a in q):
            unequal += 1
    return unequal <= 1

