"""Exhaustive sweeps behind ``scg verify`` and the acceptance suite."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from scgpart.agreement import (
    Agreement,
    all_agreements,
    is_covering,
    is_credible,
    is_envy_free,
    is_pareto_optimal,
    is_qualified,
    qualified_canonical_loads,
)
from scgpart.errors import CapExceeded
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

# (covering, credible, envy-free); covering and Pareto-optimal coincide
VENN_REGIONS = {
    (True, True, True): "covering & credible & envy-free",
    (True, True, False): "covering & credible & not envy-free",
    (True, False, False): "covering & not credible & not envy-free",
    (False, False, True): "not covering & envy-free",
    (False, False, False): "not covering & not envy-free",
}
EMPTY_REGIONS = {
    (True, False, True): "covering & envy-free & not credible",
    (False, True, True): "not covering & credible",
    (False, True, False): "not covering & credible",
}


def standard_costs(max_load: int) -> dict[str, CostFunction]:
    """Linear, quadratic and exponential (``2**k``) costs on ``1..max_load``."""
    return {
        "linear": CostFunction.linear(max_load),
        "quadratic": CostFunction.polynomial([0, 0, 1], max_load),
        "exponential": CostFunction.table([2**k for k in range(1, max_load + 1)]),
    }


@dataclass
class LatticeReport:
    checked: int = 0
    counterexamples: list[str] = field(default_factory=list)
    witnesses: dict[tuple[bool, bool, bool], tuple[int, int, str, LoadVector]] = field(
        default_factory=dict
    )

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def missing_regions(self) -> list[str]:
        return [name for key, name in VENN_REGIONS.items() if key not in self.witnesses]

    def merge(self, other: LatticeReport) -> None:
        self.checked += other.checked
        self.counterexamples.extend(other.counterexamples)
        for k, v in other.witnesses.items():
            self.witnesses.setdefault(k, v)


def lattice_sweep(size: int, m: int, g: CostFunction, label: str = "g") -> LatticeReport:
    """Check every agreement of a coalition of ``size`` against the covering lattice."""
    rep = LatticeReport()
    for a in all_agreements(size, m):
        rep.checked += 1
        co = is_covering(a)
        po = is_pareto_optimal(a, g, oracle=True)
        cr = is_credible(a, g)
        ef = is_envy_free(a, g)
        lv = a.coalition_loads
        if co != po:
            rep.counterexamples.append(f"{label} |C|={size} m={m} {lv}: covering={co} pareto={po}")
        if co and ef and not cr:
            rep.counterexamples.append(f"{label} |C|={size} m={m} {lv}: covering, envy-free, not credible")
        if cr and not co:
            rep.counterexamples.append(f"{label} |C|={size} m={m} {lv}: credible, not covering")
        rep.witnesses.setdefault((co, cr, ef), (size, m, label, lv))
    return rep


def verify_lattice(
    sizes: Sequence[int], ms: Sequence[int], costs: dict[str, CostFunction] | None = None
) -> LatticeReport:
    total = LatticeReport()
    for m in ms:
        for size in sizes:
            fs = costs if costs is not None else standard_costs(size)
            for label, f in fs.items():
                total.merge(lattice_sweep(size, m, f.with_max_load(size), label))
    return total


@dataclass
class QualifiedLoadsReport:
    checked: int = 0
    mismatches: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_qualified_loads(size: int, m: int, g: CostFunction) -> QualifiedLoadsReport:
    """Qualified loads found by brute force match the closed form, up to permutation."""
    rep = QualifiedLoadsReport()
    found = set()
    for a in all_agreements(size, m):
        rep.checked += 1
        if is_qualified(a, g, oracle=True):
            found.add(tuple(sorted(a.coalition_loads, reverse=True)))
    expected = qualified_canonical_loads(size, m)
    expected = set() if expected is None else {tuple(sorted(v, reverse=True)) for v in expected}
    if found != expected:
        rep.mismatches.append(f"|C|={size} m={m}: brute force {sorted(found)} vs {sorted(expected)}")
    return rep


@dataclass
class Lemma1Report:
    n: int
    m: int
    outcomes: int
    bar_c_min: Fraction
    hat_c_min: Fraction
    bar_c_star: Fraction
    hat_c_star: Fraction
    argmin_all_even: bool
    even_all_argmin: bool
    uneven_hat_c_optimal: LoadVector | None

    @property
    def ok(self) -> bool:
        return (
            self.argmin_all_even
            and self.even_all_argmin
            and self.bar_c_min == self.bar_c_star
            and self.hat_c_min == self.hat_c_star
        )


def verify_lemma1(n: int, m: int, f: CostFunction, max_outcomes: int = 4**8) -> Lemma1Report:
    """Brute-force total and max cost over all ``m**n`` outcomes."""
    if m**n > max_outcomes:
        raise CapExceeded("outcome sweep", m**n, max_outcomes)
    game = Game(n, m, f)
    bar_star, hat_star = optimal_costs(game)
    cache: dict[LoadVector, tuple[Fraction, Fraction]] = {}
    per_outcome = {}
    for outcome in itertools.product(range(m), repeat=n):
        lv = loads(outcome, m)
        if lv not in cache:
            cache[lv] = (total_cost_of_loads(f, lv), max_cost_of_loads(f, lv))
        per_outcome[outcome] = lv
    bar_min = min(v[0] for v in cache.values())
    hat_min = min(v[1] for v in cache.values())
    argmin = {o for o, lv in per_outcome.items() if cache[lv][0] == bar_min}
    even = {o for o, lv in per_outcome.items() if is_evenly_distributed(lv)}
    uneven = sorted(
        (lv for lv, v in cache.items() if v[1] == hat_min and not is_evenly_distributed(lv)),
        reverse=True,
    )
    return Lemma1Report(
        n, m, len(per_outcome), bar_min, hat_min, bar_star, hat_star,
        argmin <= even, even <= argmin, uneven[0] if uneven else None,
    )


def agreement_flags(a: Agreement, g) -> dict[str, bool]:
    return {
        "covering": is_covering(a),
        "envy_free": is_envy_free(a, g),
        "credible": is_credible(a, g),
        "pareto_optimal": is_pareto_optimal(a, g),
    }
