"""``scg`` command-line front end.

Exit codes: 0 success, 1 counterexample found by ``verify``, 2 invalid
input, 3 no equilibrium, 4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import os
import sys
from typing import Any

from scgpart import io as sio
from scgpart.agreement import Agreement, is_pareto_optimal
from scgpart.belief import outside_count_pmf, subgame
from scgpart.equilibrium import (
    NoEquilibrium,
    brute_force_profile_oracle,
    induce,
    is_profile_bar_c_optimal,
    is_profile_hat_c_optimal,
    verify_theorem_1,
)
from scgpart.errors import CapExceeded, InfeasibleCoalition, default_cap
from scgpart.game import Game, InvalidCostFunction, optimal_costs
from scgpart.partition import classify, is_balanced
from scgpart.verify import (
    EMPTY_REGIONS,
    VENN_REGIONS,
    agreement_flags,
    lattice_sweep,
    verify_lemma1,
)
from scgpart.weighted import (
    MnpObjective,
    find_hat_c_optimal_partition,
    mnp_solve,
    weighted_c_bar_equivalence_check,
    weighted_qualified_conditions,
)

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INPUT, EXIT_NO_EQUILIBRIUM, EXIT_CAP = 0, 1, 2, 3, 4

rat = sio.rat


class CommandResult:
    def __init__(self, report: dict[str, Any], rows: list[dict[str, Any]], code: int = EXIT_OK):
        self.report = report
        self.rows = rows
        self.code = code


def _loads(lv) -> list[int]:
    return list(lv)


# ---------------------------------------------------------------------------
# commands; each takes the JSON "input" block so --check can replay it


def run_analyze(inp: dict[str, Any]) -> CommandResult:
    game = sio.game_from_json(inp["game"])
    p = sio.partition_from_json(inp["partition"], game.n)
    oracle = inp.get("oracle", False)
    coalitions = []
    for c in p.coalitions:
        entry: dict[str, Any] = {
            "players": list(c),
            "size": len(c),
            "class": classify(len(c), game.m).value,
        }
        try:
            mu = outside_count_pmf(p, c, game)
            sg = subgame(game, p, c)
            entry["outsider_pmf"] = {str(u): rat(q) for u, q in mu.items}
            entry["g"] = {str(v): rat(sg.g(v)) for v in range(1, len(c) + 1)}
        except InfeasibleCoalition:
            entry["outsider_pmf"] = None
            entry["g"] = None
        coalitions.append(entry)
    pr = brute_force_profile_oracle(game, p) if oracle else induce(game, p)
    bar, hat = optimal_costs(game)
    result: dict[str, Any] = {
        "balanced": is_balanced(p, game.m),
        "coalitions": coalitions,
        "optimal_costs": {"bar_c": rat(bar), "hat_c": rat(hat)},
    }
    if isinstance(pr, NoEquilibrium):
        result.update(
            equilibrium=False,
            no_equilibrium_coalition=list(pr.coalition),
            support=[],
            bar_c_optimal=None,
            hat_c_optimal=None,
        )
        code = EXIT_NO_EQUILIBRIUM
    else:
        result.update(
            equilibrium=True,
            support=[{"loads": _loads(lv), "probability": rat(q)} for lv, q in pr.support],
            bar_c_optimal=is_profile_bar_c_optimal(pr, game),
            hat_c_optimal=is_profile_hat_c_optimal(pr, game),
        )
        code = EXIT_OK
    rows = [{"loads": " ".join(map(str, s["loads"])), "probability": s["probability"]}
            for s in result["support"]]
    if not result["equilibrium"]:
        rows = [{"equilibrium": False,
                 "coalition": " ".join(map(str, result["no_equilibrium_coalition"]))}]
    return CommandResult({"command": "analyze", "input": inp, "result": result}, rows, code)


def _compositions(size: int, m: int):
    """Load vectors up to permutation: non-increasing, length ``m``, summing to ``size``."""
    seen = set()
    for combo in itertools.combinations_with_replacement(range(m), size):
        lv = tuple(sorted((combo.count(x) for x in range(m)), reverse=True))
        seen.add(lv)
    return sorted(seen, reverse=True)


def run_agreements(inp: dict[str, Any]) -> CommandResult:
    if "game" in inp:
        game = sio.game_from_json(inp["game"])
        p = sio.partition_from_json(inp["partition"], game.n)
        c = p.coalitions[inp.get("coalition", 0)]
        g = subgame(game, p, c).g
        size, m = len(c), game.m
    else:
        size, m = inp["size"], inp["m"]
        g = sio.cost_from_json(inp["cost"], size)
        Game(size, m, g)
    oracle = inp.get("oracle", False)
    rows = []
    for lv in _compositions(size, m):
        a = Agreement.from_loads(lv)
        flags = agreement_flags(a, g)
        if oracle:
            flags["pareto_optimal"] = is_pareto_optimal(a, g, oracle=True)
        flags["qualified"] = flags["envy_free"] and flags["credible"] and flags["pareto_optimal"]
        rows.append({"loads": " ".join(map(str, lv)), **flags})
    result = {
        "size": size,
        "m": m,
        "g": {str(v): rat(g(v)) for v in range(1, size + 1)},
        "agreements": rows,
    }
    return CommandResult({"command": "agreements", "input": inp, "result": result}, rows)


def run_verify(inp: dict[str, Any]) -> CommandResult:
    scope = inp["scope"]
    if scope == "prop2":
        size, m = inp["size"], inp["m"]
        f = sio.cost_from_json(inp["cost"], size)
        rep = lattice_sweep(size, m, f, inp["cost"]["kind"])
        witnesses = [
            {"region": VENN_REGIONS.get(k) or EMPTY_REGIONS[k], "loads": _loads(v[3])}
            for k, v in sorted(rep.witnesses.items(), reverse=True)
        ]
        result = {"checked": rep.checked, "counterexamples": rep.counterexamples,
                  "witnesses": witnesses, "pass": rep.ok}
        rows = [{"region": w["region"], "loads": " ".join(map(str, w["loads"]))} for w in witnesses]
    elif scope == "lemma1":
        n, m = inp["n"], inp["m"]
        rep = verify_lemma1(n, m, sio.cost_from_json(inp["cost"], n))
        result = {
            "outcomes": rep.outcomes,
            "bar_c_min": rat(rep.bar_c_min), "bar_c_star": rat(rep.bar_c_star),
            "hat_c_min": rat(rep.hat_c_min), "hat_c_star": rat(rep.hat_c_star),
            "argmin_all_even": rep.argmin_all_even, "even_all_argmin": rep.even_all_argmin,
            "uneven_hat_c_optimal": _loads(rep.uneven_hat_c_optimal) if rep.uneven_hat_c_optimal else None,
            "pass": rep.ok,
        }
        rows = [{k: v for k, v in result.items() if not isinstance(v, list)}]
        counter = [] if rep.ok else ["even outcomes and total-cost minimisers differ"]
        result["counterexamples"] = counter
    elif scope == "theorem1":
        n, m = inp["n"], inp["m"]
        rep = verify_theorem_1(
            n, m, sio.cost_from_json(inp["cost"], n),
            all_partitions=inp.get("all_partitions", False), oracle=inp.get("oracle", False),
        )
        rows = [
            {
                "sizes": " ".join(map(str, r.sizes)),
                "balanced": r.balanced,
                "equilibrium": r.equilibrium,
                "bar_c_optimal": r.bar_c_optimal,
                "hat_c_optimal": r.hat_c_optimal,
                "support_size": r.support_size,
                "min_bar_c": rat(r.min_bar_c) if r.min_bar_c is not None else None,
                "max_bar_c": rat(r.max_bar_c) if r.max_bar_c is not None else None,
            }
            for r in rep.rows
        ]
        result = {"partitions": rows, "counterexamples": rep.violations, "pass": rep.ok}
    elif scope == "weighted":
        game = sio.weighted_game_from_json(inp["game"])
        search = find_hat_c_optimal_partition(game)
        eq = weighted_c_bar_equivalence_check(game.weights, game.m)
        result = _search_json(search)
        result["c_bar_equivalence"] = {
            "linear_matches_min_var": eq.linear_matches_min_var,
            "exponential_within_minimax": eq.exponential_within_minimax,
        }
        result["counterexamples"] = [] if eq.ok else ["c-bar equivalence failed"]
        result["pass"] = eq.ok
        rows = [{"partition": r["partition"], "reason": r["reason"]} for r in result["rejections"]]
    else:
        raise ValueError(f"unknown verify scope {scope!r}")
    code = EXIT_OK if not result["counterexamples"] else EXIT_COUNTEREXAMPLE
    return CommandResult({"command": "verify", "input": inp, "result": result}, rows, code)


def _search_json(search) -> dict[str, Any]:
    rejections = []
    for r in search.rejections:
        entry: dict[str, Any] = {"partition": str(r.partition), "reason": r.reason}
        if r.coalition is not None:
            entry["coalition"] = list(r.coalition)
        if r.diagnoses:
            entry["minimax_agreements"] = [
                {
                    "agreement": d.agreement,
                    "loads": _loads(d.loads),
                    "envy_free": d.envy_free,
                    "credible": d.credible,
                    "pareto_optimal": d.pareto_optimal,
                    "base_weights": [{"weight": w, "base_weight": b} for w, b in d.base_weights],
                }
                for d in r.diagnoses
            ]
        if r.worst_max_load is not None:
            entry["worst_max_load"] = r.worst_max_load
            entry["suboptimal_probability"] = rat(r.suboptimal_probability)
        rejections.append(entry)
    found = search.partition
    return {
        "minimax": search.minimax,
        "partitions_checked": search.checked,
        "hat_c_optimal_partition": found.to_json() if found else None,
        "message": (f"ĉ-optimal partition {found}" if found
                    else "no ĉ-optimal partition exists"),
        "rejections": rejections,
    }


def run_mnp(inp: dict[str, Any]) -> CommandResult:
    sol = mnp_solve(inp["weights"], inp["m"], inp["objective"], cap=inp.get("cap"),
                    branch_and_bound=inp.get("bnb", False))
    result: dict[str, Any] = {
        "objective": sol.objective.value,
        "value": sol.value,
        "loads": _loads(sol.loads),
        "assignment": list(sol.assignment),
    }
    if inp.get("all"):
        result["argmin"] = [_loads(lv) for lv in sol.argmin]
    rows = [{"objective": sol.objective.value, "value": sol.value,
             "loads": " ".join(map(str, sol.loads))}]
    return CommandResult({"command": "mnp", "input": inp, "result": result}, rows)


def run_weighted(inp: dict[str, Any]) -> CommandResult:
    game = sio.weighted_game_from_json(inp["game"])
    obj = MnpObjective(inp.get("objective", "minimax"))
    sol = mnp_solve(game.weights, game.m, obj, branch_and_bound=True)
    structure = weighted_qualified_conditions(game.weights, game.m)
    search = find_hat_c_optimal_partition(game)
    result = {
        "mnp": {"objective": obj.value, "value": sol.value, "loads": _loads(sol.loads)},
        "grand_coalition_structure": (
            None if structure is None else
            {"b": structure.b, "all_distinct": structure.all_distinct,
             "groups": [{"weight": w, "per_resource": k, "resources": r}
                        for w, k, r in structure.groups]}
        ),
        **_search_json(search),
    }
    rows = [{"partition": r["partition"], "reason": r["reason"]} for r in result["rejections"]]
    return CommandResult({"command": "weighted", "input": inp, "result": result}, rows)


COMMANDS = {
    "analyze": run_analyze,
    "agreements": run_agreements,
    "verify": run_verify,
    "mnp": run_mnp,
    "weighted": run_weighted,
}


# ---------------------------------------------------------------------------
# argument handling


def _weights(text: str) -> list[int]:
    try:
        ws = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from exc
    if not ws:
        raise argparse.ArgumentTypeError("empty weight list")
    return ws


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "table"], default="json")
    common.add_argument("--output", "-o", help="write report here instead of stdout")
    common.add_argument("--cap", type=int, help="enumeration cap (default: SCG_CAP or 3**8)")
    parser = argparse.ArgumentParser(prog="scg", description=__doc__.splitlines()[0])
    parser.add_argument("--check", metavar="REPORT", help="re-run a JSON report and compare")
    sub = parser.add_subparsers(dest="command", parser_class=argparse.ArgumentParser)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    def game_opts(p):
        p.add_argument("--game", help="game JSON file")
        p.add_argument("--n", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--cost", default="linear", help="e.g. linear, quadratic, exp, table:1,2,4")

    a = sub.add_parser("analyze", help="induced equilibrium of a partition")
    game_opts(a)
    a.add_argument("--partition", required=True, help="partition JSON file or inline JSON")
    a.add_argument("--oracle", action="store_true", help="use the brute-force path")

    g = sub.add_parser("agreements", help="agreement predicates by load class")
    game_opts(g)
    g.add_argument("--size", type=int)
    g.add_argument("--partition")
    g.add_argument("--coalition", type=int, default=0)
    g.add_argument("--oracle", action="store_true", help="exhaustive Pareto check")

    v = sub.add_parser("verify", help="exhaustive checks of the optimality results")
    v.add_argument("scope", choices=["prop2", "lemma1", "theorem1", "weighted"])
    v.add_argument("--n", type=int)
    v.add_argument("--m", type=int, required=True)
    v.add_argument("--size", type=int)
    v.add_argument("--cost", default="linear")
    v.add_argument("--weights", type=_weights)
    v.add_argument("--all-partitions", action="store_true",
                   help="every set partition instead of one per size multiset (n <= 6)")
    v.add_argument("--oracle", action="store_true")

    mn = sub.add_parser("mnp", help="multiway number partitioning")
    mn.add_argument("--weights", type=_weights, required=True)
    mn.add_argument("--m", type=int, required=True)
    mn.add_argument("--objective", choices=[o.value for o in MnpObjective], default="minimax")
    mn.add_argument("--all", action="store_true", help="report every optimal load vector")
    mn.add_argument("--bnb", action="store_true", help="branch and bound instead of enumeration")

    w = sub.add_parser("weighted", help="weighted game: structures and partition search")
    w.add_argument("--game", help="weighted game JSON file")
    w.add_argument("--weights", type=_weights)
    w.add_argument("--m", type=int)
    w.add_argument("--cost", default="linear")
    w.add_argument("--objective", choices=[o.value for o in MnpObjective], default="minimax")
    return parser


def _json_arg(text: str):
    text = text.strip()
    if text.startswith("["):
        return json.loads(text)
    return sio.read_json(text)


def _game_input(args) -> dict[str, Any]:
    if args.game:
        return sio.read_json(args.game)
    if args.n is None or args.m is None:
        raise ValueError("give --game or both --n and --m")
    return {"n": args.n, "m": args.m, "cost": sio.parse_cost_option(args.cost)}


def inputs_from_args(args) -> dict[str, Any]:
    cmd = args.command
    if cmd == "analyze":
        return {"game": _game_input(args), "partition": _json_arg(args.partition),
                "oracle": args.oracle}
    if cmd == "agreements":
        if args.partition:
            return {"game": _game_input(args), "partition": _json_arg(args.partition),
                    "coalition": args.coalition, "oracle": args.oracle}
        if args.size is None or args.m is None:
            raise ValueError("give --size and --m, or --game and --partition")
        return {"size": args.size, "m": args.m, "cost": sio.parse_cost_option(args.cost),
                "oracle": args.oracle}
    if cmd == "verify":
        inp: dict[str, Any] = {"scope": args.scope, "m": args.m}
        if args.scope == "prop2":
            if args.size is None:
                raise ValueError("verify prop2 needs --size")
            inp.update(size=args.size, cost=sio.parse_cost_option(args.cost))
        elif args.scope in ("lemma1", "theorem1"):
            if args.n is None:
                raise ValueError(f"verify {args.scope} needs --n")
            inp.update(n=args.n, cost=sio.parse_cost_option(args.cost))
            if args.scope == "theorem1":
                if args.all_partitions and args.n > 6:
                    raise ValueError("--all-partitions is limited to n <= 6")
                inp.update(all_partitions=args.all_partitions, oracle=args.oracle)
        else:
            if not args.weights:
                raise ValueError("verify weighted needs --weights")
            inp["game"] = {"weights": args.weights, "m": args.m,
                           "cost": sio.parse_cost_option(args.cost)}
        return inp
    if cmd == "mnp":
        inp = {"weights": args.weights, "m": args.m, "objective": args.objective,
               "all": args.all, "bnb": args.bnb}
        if args.cap is not None:
            inp["cap"] = args.cap
        return inp
    if cmd == "weighted":
        if args.game:
            game = sio.read_json(args.game)
        elif args.weights and args.m:
            game = {"weights": args.weights, "m": args.m, "cost": sio.parse_cost_option(args.cost)}
        else:
            raise ValueError("give --game or --weights and --m")
        return {"game": game, "objective": args.objective}
    raise ValueError(f"unknown command {cmd!r}")


def render(res: CommandResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(res.report, indent=2) + "\n"
    if not res.rows:
        return ""
    cols = list(res.rows[0])
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        writer.writerows(res.rows)
        return buf.getvalue()
    cells = [[str(r.get(c, "")) for c in cols] for r in res.rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def check_report(path: str) -> tuple[int, str]:
    report = sio.read_json(path)
    cmd = report.get("command")
    if cmd not in COMMANDS or "input" not in report:
        return EXIT_INPUT, f"{path}: not a scg report\n"
    fresh = COMMANDS[cmd](report["input"]).report
    if json.loads(json.dumps(fresh)) != report:
        return EXIT_INPUT, f"{path}: report does not match a fresh run\n"
    return EXIT_OK, f"{path}: ok\n"


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cap = getattr(args, "cap", None)
    if cap is not None and cap <= 0:
        parser.error("--cap must be positive")
    saved = os.environ.get("SCG_CAP")
    if cap is not None:
        os.environ["SCG_CAP"] = str(cap)
    try:
        return _run(parser, args)
    finally:
        if saved is None:
            os.environ.pop("SCG_CAP", None)
        else:
            os.environ["SCG_CAP"] = saved


def _run(parser: argparse.ArgumentParser, args) -> int:
    try:
        default_cap()
        if args.check:
            code, msg = check_report(args.check)
            sys.stdout.write(msg)
            return code
        if not args.command:
            parser.error("a subcommand or --check is required")
        res = COMMANDS[args.command](inputs_from_args(args))
    except CapExceeded as exc:
        sys.stderr.write(f"scg: {exc}\n")
        return EXIT_CAP
    except (ValueError, TypeError, KeyError, OSError, InvalidCostFunction) as exc:
        sys.stderr.write(f"scg: invalid input: {exc}\n")
        return EXIT_INPUT
    text = render(res, args.format)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if res.code == EXIT_NO_EQUILIBRIUM:
        coalition = res.report["result"].get("no_equilibrium_coalition")
        sys.stderr.write(f"scg: no equilibrium: coalition {coalition} cannot agree\n")
    return res.code


if __name__ == "__main__":
    sys.exit(main())
