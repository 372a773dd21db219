"""Singleton congestion games: cost functions, outcomes and social costs.

All arithmetic is exact (``fractions.Fraction``). A cost function maps the
number of players (or total weight) on a resource, ``1..max_load``, to the
cost paid by each of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction
LoadVector = tuple[int, ...]
Outcome = tuple[int, ...]

KINDS = ("linear", "poly", "exp", "table")
_ALIASES = {"polynomial": "poly", "exponential": "exp"}


class InvalidCostFunction(ValueError):
    pass


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and strings such as ``"3/4"`` or ``"1.1"``.

    Floats are refused: ``Fraction(1.1)`` is not 11/10.
    """
    if isinstance(x, bool):
        raise TypeError(f"not a rational parameter: {x!r}")
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational parameter: {x!r}") from exc
    raise TypeError(f"not a rational parameter: {x!r} ({type(x).__name__})")


def _evaluate(kind: str, params: tuple[Fraction, ...], k: int) -> Fraction:
    if kind == "linear":
        slope, intercept = params
        return slope * k + intercept
    if kind == "poly":
        return sum((c * k**j for j, c in enumerate(params)), Fraction(0))
    if kind == "exp":
        base, scale = params
        return scale * base**k
    raise AssertionError(kind)


@dataclass(frozen=True)
class CostFunction:
    """Per-player cost as a function of resource load, tabulated on ``1..max_load``.

    Construction does not check monotonicity or convexity; use
    :func:`validate_cost_function` (``Game`` does so eagerly).
    """

    kind: str
    params: tuple[Fraction, ...]
    max_load: int
    values: tuple[Fraction, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown cost kind {self.kind!r}; expected one of {KINDS}")
        object.__setattr__(self, "kind", kind)
        params = tuple(as_rational(p) for p in self.params)
        object.__setattr__(self, "params", params)
        if kind == "table":
            if not params:
                raise ValueError("empty cost table")
            object.__setattr__(self, "max_load", len(params))
            values = params
        else:
            expected = {"linear": 2, "exp": 2}.get(kind)
            if expected is not None and len(params) != expected:
                raise ValueError(f"{kind} cost takes {expected} parameters, got {len(params)}")
            if kind == "poly" and not params:
                raise ValueError("polynomial cost needs at least one coefficient")
            if self.max_load < 1:
                raise ValueError(f"max_load must be >= 1, got {self.max_load}")
            values = tuple(_evaluate(kind, params, k) for k in range(1, self.max_load + 1))
        object.__setattr__(self, "values", values)

    @classmethod
    def linear(cls, max_load: int, slope=1, intercept=0) -> CostFunction:
        return cls("linear", (slope, intercept), max_load)

    @classmethod
    def polynomial(cls, coefficients: Sequence, max_load: int) -> CostFunction:
        """``f(k) = sum(c_j * k**j)``, coefficients in increasing degree."""
        return cls("poly", tuple(coefficients), max_load)

    @classmethod
    def exponential(cls, max_load: int, base=2, scale=1) -> CostFunction:
        return cls("exp", (base, scale), max_load)

    @classmethod
    def table(cls, values: Sequence) -> CostFunction:
        """Explicit values ``f(1), f(2), ...``."""
        return cls("table", tuple(values), len(values))

    def __call__(self, k: int) -> Fraction:
        if not 1 <= k <= self.max_load:
            raise ValueError(f"load {k} outside cost function domain 1..{self.max_load}")
        return self.values[k - 1]

    def with_max_load(self, max_load: int) -> CostFunction:
        """Same formula on a different domain. Tables can only be truncated."""
        if self.kind == "table":
            if max_load > self.max_load:
                raise ValueError(
                    f"cost table has {self.max_load} entries, {max_load} required"
                )
            return CostFunction.table(self.values[:max_load])
        return CostFunction(self.kind, self.params, max_load)

    def as_table(self) -> CostFunction:
        return CostFunction.table(self.values)


@dataclass(frozen=True)
class CostViolation:
    """First index ``k`` at which an invariant of the cost function fails."""

    invariant: str  # "monotonicity" or "convexity"
    k: int

    def __str__(self):
        if self.invariant == "monotonicity":
            return f"not strictly increasing: f({self.k + 1}) <= f({self.k})"
        return f"not convex: f({self.k + 2}) + f({self.k}) < 2*f({self.k + 1})"


def validate_cost_function(f: CostFunction) -> CostViolation | None:
    """Return ``None`` if ``f`` is strictly increasing and weakly convex on its domain."""
    v = f.values
    for k in range(1, f.max_load):
        if v[k] <= v[k - 1]:
            return CostViolation("monotonicity", k)
    for k in range(1, f.max_load - 1):
        if v[k + 1] + v[k - 1] < 2 * v[k]:
            return CostViolation("convexity", k)
    return None


def require_valid(f: CostFunction, max_load: int) -> CostFunction:
    if f.max_load < max_load:
        raise InvalidCostFunction(
            f"cost function defined up to load {f.max_load}, game needs {max_load}"
        )
    violation = validate_cost_function(f)
    if violation is not None:
        raise InvalidCostFunction(str(violation))
    return f


@dataclass(frozen=True)
class Game:
    """``n`` players each choosing one of ``m`` identical resources."""

    n: int
    m: int
    f: CostFunction

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        require_valid(self.f, self.n)


def check_outcome(outcome: Sequence[int], n: int, m: int) -> Outcome:
    outcome = tuple(outcome)
    if len(outcome) != n:
        raise ValueError(f"outcome has {len(outcome)} actions, expected {n}")
    for x in outcome:
        if not 0 <= x < m:
            raise ValueError(f"resource index {x} out of range 0..{m - 1}")
    return outcome


def loads(outcome: Iterable[int], m: int) -> LoadVector:
    counts = [0] * m
    for x in outcome:
        counts[x] += 1
    return tuple(counts)


def player_cost(game: Game, outcome: Sequence[int], i: int) -> Fraction:
    outcome = check_outcome(outcome, game.n, game.m)
    if not 0 <= i < game.n:
        raise IndexError(f"player {i} out of range 0..{game.n - 1}")
    return game.f(loads(outcome, game.m)[outcome[i]])


def total_cost_of_loads(f: CostFunction, counts: Iterable[int]) -> Fraction:
    return sum((c * f(c) for c in counts if c), Fraction(0))


def max_cost_of_loads(f: CostFunction, counts: Iterable[int]) -> Fraction:
    return f(max(counts))


def total_cost(game: Game, outcome: Sequence[int]) -> Fraction:
    outcome = check_outcome(outcome, game.n, game.m)
    return total_cost_of_loads(game.f, loads(outcome, game.m))


def max_cost(game: Game, outcome: Sequence[int]) -> Fraction:
    outcome = check_outcome(outcome, game.n, game.m)
    return max_cost_of_loads(game.f, loads(outcome, game.m))


def is_evenly_distributed(counts: Sequence[int]) -> bool:
    return max(counts) - min(counts) <= 1


def even_loads(n: int, m: int) -> LoadVector:
    """The evenly distributed load vector, heavier resources first."""
    y, l = divmod(n, m)
    return (y + 1,) * l + (y,) * (m - l)


def optimal_costs(game: Game) -> tuple[Fraction, Fraction]:
    """Minimum total cost and minimum maximum cost over all outcomes.

    Both are read off the even load vector with ``l = n mod m`` resources
    carrying ``y + 1 = n // m + 1`` players.
    """
    even = even_loads(game.n, game.m)
    return total_cost_of_loads(game.f, even), max_cost_of_loads(game.f, even)


def mixture_cost_function(dist: Sequence[tuple]) -> CostFunction:
    """Pointwise expectation of cost functions drawn with the given probabilities.

    The result is a table on the largest load every component covers.
    """
    if not dist:
        raise ValueError("empty mixture")
    probs = [as_rational(p) for p, _ in dist]
    if any(p < 0 for p in probs):
        raise ValueError("negative mixture probability")
    if sum(probs) != 1:
        raise ValueError(f"mixture probabilities sum to {sum(probs)}, not 1")
    common = min(f.max_load for _, f in dist)
    for _, f in dist:
        violation = validate_cost_function(f.with_max_load(common))
        if violation is not None:
            raise InvalidCostFunction(f"mixture component invalid: {violation}")
    return CostFunction.table(
        [sum((p * f(k) for p, (_, f) in zip(probs, dist)), Fraction(0))
         for k in range(1, common + 1)]
    )
