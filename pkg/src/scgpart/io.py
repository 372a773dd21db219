"""JSON formats for games, partitions and cost functions.

Rationals travel as ``"p/q"`` strings so nothing passes through floats.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from scgpart.game import CostFunction, Game, as_rational
from scgpart.partition import Partition, validate_partition
from scgpart.weighted import WeightedGame


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def cost_from_json(spec: dict[str, Any], max_load: int) -> CostFunction:
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ValueError(f"cost spec needs a 'kind': {spec!r}")
    kind = spec["kind"]
    if kind == "linear":
        return CostFunction.linear(max_load, spec.get("slope", "1"), spec.get("intercept", "0"))
    if kind in ("poly", "polynomial"):
        return CostFunction.polynomial(spec["coefficients"], max_load)
    if kind in ("exp", "exponential"):
        return CostFunction.exponential(max_load, spec.get("base", "2"), spec.get("scale", "1"))
    if kind == "table":
        return CostFunction.table(spec["values"])
    raise ValueError(f"unknown cost kind {kind!r}")


def cost_to_json(f: CostFunction) -> dict[str, Any]:
    if f.kind == "linear":
        return {"kind": "linear", "slope": rat(f.params[0]), "intercept": rat(f.params[1])}
    if f.kind == "poly":
        return {"kind": "poly", "coefficients": [rat(c) for c in f.params]}
    if f.kind == "exp":
        return {"kind": "exp", "base": rat(f.params[0]), "scale": rat(f.params[1])}
    return {"kind": "table", "values": [rat(v) for v in f.values]}


def parse_cost_option(text: str) -> dict[str, Any]:
    """Command-line shorthand: ``linear``, ``linear:2,1``, ``quadratic``,
    ``poly:0,0,1``, ``exp``, ``exp:3``, ``table:1,2,4,8``."""
    name, _, rest = text.partition(":")
    args = [a for a in rest.split(",") if a] if rest else []
    for a in args:
        as_rational(a)
    if name == "linear":
        spec = {"kind": "linear"}
        if args:
            spec["slope"] = args[0]
        if len(args) > 1:
            spec["intercept"] = args[1]
        return spec
    if name == "quadratic":
        return {"kind": "poly", "coefficients": ["0", "0", "1"]}
    if name in ("poly", "polynomial"):
        return {"kind": "poly", "coefficients": args}
    if name in ("exp", "exponential"):
        spec = {"kind": "exp"}
        if args:
            spec["base"] = args[0]
        if len(args) > 1:
            spec["scale"] = args[1]
        return spec
    if name == "table":
        return {"kind": "table", "values": args}
    raise ValueError(f"unknown cost {text!r}")


def _int(obj, key) -> int:
    v = obj.get(key)
    if not isinstance(v, int) or isinstance(v, bool):
        raise ValueError(f"{key!r} must be an integer, got {v!r}")
    return v


def game_from_json(obj: dict[str, Any]) -> Game:
    n, m = _int(obj, "n"), _int(obj, "m")
    return Game(n, m, cost_from_json(obj.get("cost", {"kind": "linear"}), n))


def game_to_json(game: Game) -> dict[str, Any]:
    return {"n": game.n, "m": game.m, "cost": cost_to_json(game.f)}


def weighted_game_from_json(obj: dict[str, Any]) -> WeightedGame:
    weights = obj.get("weights")
    if not isinstance(weights, list) or not all(isinstance(w, int) for w in weights):
        raise ValueError(f"'weights' must be a list of integers, got {weights!r}")
    m = _int(obj, "m")
    return WeightedGame(tuple(weights), m, cost_from_json(obj.get("cost", {"kind": "linear"}), sum(weights)))


def weighted_game_to_json(game: WeightedGame) -> dict[str, Any]:
    return {"weights": list(game.weights), "m": game.m, "cost": cost_to_json(game.f)}


def partition_from_json(obj, n: int) -> Partition:
    if not isinstance(obj, list) or not all(isinstance(c, list) for c in obj):
        raise ValueError("partition must be a list of lists of player indices")
    problems = validate_partition(obj, n)
    if problems:
        raise ValueError("invalid partition: " + "; ".join(problems))
    return Partition.of(obj)


def read_json(path: str | Path):
    with open(path) as fh:
        return json.load(fh)
