"""Weighted players: MNP objectives on {5,3,2,2,1} and a game with no good partition."""

import argparse

from scgpart.game import CostFunction
from scgpart.weighted import (
    MnpObjective,
    WeightedGame,
    find_hat_c_optimal_partition,
    mnp_solve,
    weighted_c_bar_equivalence_check,
)


def mnp_table(weights, m):
    print(f"weights {weights}, m={m}")
    for obj in MnpObjective:
        sol = mnp_solve(weights, m, obj, branch_and_bound=True)
        print(f"  {obj.value:8s} value {sol.value:3d}  optimal loads {list(sol.argmin)}")
    rep = weighted_c_bar_equivalence_check(weights, m)
    print(f"  f(x)=x total-cost argmin {list(rep.linear_argmin)}"
          f"  (matches min_var: {rep.linear_matches_min_var})")
    print(f"  f(x)=2^x total-cost argmin {list(rep.exponential_argmin)}"
          f"  (within minimax: {rep.exponential_within_minimax})")


def partition_search(weights, m):
    game = WeightedGame(weights, m, CostFunction.linear(sum(weights)))
    res = find_hat_c_optimal_partition(game)
    print(f"weights {weights}, m={m}: minimax {res.minimax}, "
          f"{res.checked} partitions checked -> {res.partition or 'none'}")
    for r in res.rejections:
        if r.reason == "no-agreement":
            print(f"  {r.partition}: coalition {list(r.coalition)} has no qualified agreement")
            for d in r.diagnoses:
                print(f"    {d.agreement}: envy-free={d.envy_free} credible={d.credible}"
                      f" base weights {dict(d.base_weights)}")
        else:
            print(f"  {r.partition}: misses the minimax load with probability "
                  f"{r.suboptimal_probability} (worst max load {r.worst_max_load})")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--weights", type=lambda s: tuple(int(x) for x in s.split(",")))
    ap.add_argument("--m", type=int)
    args = ap.parse_args()
    if args.weights:
        mnp_table(args.weights, args.m)
        partition_search(args.weights, args.m)
        return
    mnp_table((5, 3, 2, 2, 1), 4)
    print()
    partition_search((1, 2, 3), 2)
    print()
    partition_search((2, 2, 2, 2), 2)


if __name__ == "__main__":
    main()
