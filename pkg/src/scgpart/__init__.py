"""Singleton congestion games with communication partitions."""

from scgpart.game import (
    CostFunction,
    CostViolation,
    Game,
    InvalidCostFunction,
    is_evenly_distributed,
    loads,
    max_cost,
    mixture_cost_function,
    optimal_costs,
    player_cost,
    total_cost,
    validate_cost_function,
)
from scgpart.partition import (
    CoalitionClass,
    Partition,
    classify,
    enumerate_partitions_by_sizes,
    enumerate_set_partitions,
    is_balanced,
    make_balanced_partition,
    validate_partition,
)
from scgpart.agreement import (
    Agreement,
    is_covering,
    is_credible,
    is_envy_free,
    is_pareto_optimal,
    qualified_canonical_loads,
)
from scgpart.belief import (
    CountPmf,
    Subgame,
    coalition_marginal,
    effective_cost,
    outside_count_pmf,
    subgame,
)
from scgpart.equilibrium import (
    CoalitionBehaviour,
    InducedProfile,
    NoEquilibrium,
    brute_force_profile_oracle,
    coalition_behaviour,
    induce,
    is_profile_bar_c_optimal,
    is_profile_hat_c_optimal,
    verify_theorem_1,
)
from scgpart.errors import CapExceeded, InfeasibleCoalition

__all__ = [name for name in dir() if not name.startswith("_")]
