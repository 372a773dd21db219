"""Seven players, three resources: a balanced and an unbalanced partition.

The balanced split {3,3,1} always lands on loads (3,2,2). The split
{3,2,2} lands on (3,3,1) a third of the time: total cost suffers, the
maximum load does not.
"""

import argparse
from dataclasses import dataclass

from scgpart.equilibrium import (
    brute_force_profile_oracle,
    induce,
    is_profile_bar_c_optimal,
    is_profile_hat_c_optimal,
)
from scgpart.game import CostFunction, Game, optimal_costs, total_cost_of_loads
from scgpart.partition import Partition, is_balanced


@dataclass
class Instance:
    n: int = 7
    m: int = 3
    cost: str = "linear"


def report(game: Game, sizes, oracle: bool):
    p = Partition.from_sizes(sizes)
    pr = brute_force_profile_oracle(game, p) if oracle else induce(game, p)
    print(f"partition {p}  sizes {sizes}  balanced={is_balanced(p, game.m)}")
    for lv, q in sorted(pr.class_probabilities().items(), reverse=True):
        print(f"  loads {lv}  probability {q}  total cost {total_cost_of_loads(game.f, lv)}")
    print(f"  total-cost optimal: {is_profile_bar_c_optimal(pr, game)}")
    print(f"  max-cost optimal:   {is_profile_hat_c_optimal(pr, game)}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--oracle", action="store_true")
    args = ap.parse_args()
    inst = Instance()
    game = Game(inst.n, inst.m, CostFunction.linear(inst.n))
    bar, hat = optimal_costs(game)
    print(f"n={inst.n} m={inst.m} f(k)=k  optimal total cost {bar}, optimal max cost {hat}")
    for sizes in ([3, 3, 1], [3, 2, 2]):
        report(game, sizes, args.oracle)


if __name__ == "__main__":
    main()
