"""Command-line front end.

Exit codes: 0 success, 2 invalid instance, 3 guard exceeded, 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from bisect import bisect_right
from collections import Counter
from fractions import Fraction
from pathlib import Path

from .core import (GuardExceeded, HiderDistribution, InvalidInstance, LineInstance,
                   TreeInstance, format_rational, unit_profit)
from .equilibrium import IterationLimitExceeded, solve_equilibrium
from .figures import emit_figure_data
from .line import (compute_hw, efficient_boundaries, game_value_line, hider_coprime,
                   optimal_hider, play_partition, sample_seeker, verify_hider)
from .oracle import brute_force_best_response, enumerate_strategies, full_matrix_value
from .simulate import make_rng, sample_discrete, simulate
from .treedp import best_response_dp, labeling_to_strategy

EXIT_OK, EXIT_INVALID, EXIT_GUARD, EXIT_VERIFY = 0, 2, 3, 4


def _emit(obj, as_json: bool = True) -> None:
    print(json.dumps(obj, indent=2) if as_json else obj)


def _load_instance(path: str) -> TreeInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInstance(f"cannot read {path}: {exc}") from exc
    return TreeInstance.from_json(text)


def _check_line(n: int, k: int) -> None:
    LineInstance(n, k)


# -- line commands -----------------------------------------------------------


def line_solution(n: int, k: int) -> dict:
    _check_line(n, k)
    if k < 2:
        # the closed form assumes k >= 2; small budgets go through the full game LP
        sol = full_matrix_value(LineInstance(n, k).as_tree())
        return {"n": n, "k": k, "value": format_rational(sol.value), "h": None, "w": None,
                "gcd": None, "seeker_starts": None,
                "hider": [format_rational(q) for q in sol.hider], "method": "oracle"}
    value, x, y = game_value_line(n, k)
    out = {"n": n, "k": k, "value": format_rational(value)}
    if n > 2**k:
        hw = compute_hw(n, k)
        out.update(h=hw.h, w=hw.w, gcd=hw.g, seeker_starts=list(x.starts))
    else:
        out.update(h=None, w=None, gcd=None, seeker_starts=None)
    out["hider"] = [format_rational(q) for q in y]
    out["method"] = "closed-form"
    return out


def cmd_line_solve(args) -> int:
    out = line_solution(args.n, args.k)
    if args.json:
        _emit(out)
    else:
        print(f"value {out['value']}")
        if out["h"] is not None:
            print(f"h {out['h']}  w {out['w']}  gcd {out['gcd']}")
            print("seeker starts " + " ".join(map(str, out["seeker_starts"])))
        print("hider " + " ".join(out["hider"]))
    return EXIT_OK


def line_sample(n: int, k: int, seed: int, target: int | None = None, draws: int = 1) -> dict:
    """Draw start vertices from the greedy seeker and play the first against ``target``."""
    _check_line(n, k)
    if k < 2:
        raise InvalidInstance("line sampling uses the closed form, which needs k >= 2")
    rng = make_rng(seed)
    if n <= 2**k:
        # a single full binary search; there is nothing to draw
        starts, bounds = [None] * draws, list(range(n + 1))
    else:
        hw = compute_hw(n, k)
        idx = rng.integers(0, hw.w, size=draws)
        starts = [sample_seeker(n, k, int(t), hw) for t in idx]
        bounds = efficient_boundaries(starts[0], n, k)
    if target is None:
        target = int(sample_discrete(rng, optimal_hider(n, k).masses, 1)[0])
    if not 0 <= target < n:
        raise InvalidInstance(f"target {target} is not a vertex")
    steps = play_partition(bounds, target)
    i = bisect_right(bounds, target) - 1
    out = {"n": n, "k": k, "seed": seed, "start": starts[0], "target": target,
           "transcript": [{"query": list(e), "answer": a} for e, a in steps],
           "queries": len(steps), "found": bounds[i + 1] - bounds[i] == 1}
    if draws > 1:
        counts = Counter(starts)
        out["draws"] = draws
        out["start_counts"] = {str(v): counts[v] for v in sorted(counts, key=lambda v: (v is None, v))}
    return out


def cmd_line_sample(args) -> int:
    _emit(line_sample(args.n, args.k, args.seed, args.target, args.draws))
    return EXIT_OK


def cmd_line_hider(args) -> int:
    n, k = args.n, args.k
    _check_line(n, k)
    y = optimal_hider(n, k) if k >= 2 else None
    if y is None:
        raise InvalidInstance("the hider construction needs k >= 2")
    out = {"n": n, "k": k, "hider": [format_rational(q) for q in y]}
    passed = True
    if n > 2**k:
        hw = compute_hw(n, k)
        out.update(h=hw.h, w=hw.w, gcd=hw.g)
        if hw.coprime:
            layout = hider_coprime(n, k)[1]
            out["segments"] = [{"start": s.start, "length": s.length,
                                "mass": format_rational(s.mass)} for s in layout.segments]
        report = verify_hider(y, n, k)
        out["checks"] = {name: not bad for name, bad in report.checks.items()}
        passed = report.passed
    _emit(out)
    return EXIT_OK if passed else EXIT_VERIFY


# -- tree commands -----------------------------------------------------------


def cmd_tree_best_response(args) -> int:
    inst = _load_instance(args.instance)
    y = inst.hider or HiderDistribution.uniform(inst.n)
    br = best_response_dp(inst, y)
    labeling = {f"{u}-{v}": l for (u, v), l in zip(inst.edges, br.labeling)}
    _emit({"value": format_rational(br.value), "labeling": labeling,
           "strategy": labeling_to_strategy(br.labeling, inst).to_dict(),
           "table_entries": br.stats.table_entries})
    return EXIT_OK


def cmd_tree_solve(args) -> int:
    inst = _load_instance(args.instance)
    res = solve_equilibrium(inst, max_iters=args.max_iters)
    _emit(res.to_dict())
    return EXIT_OK


# -- verification ------------------------------------------------------------


def verify_line_family(k: int, n_max: int) -> list[dict]:
    rows = []
    for n in range(2**k + 1, n_max + 1):
        hw = compute_hw(n, k)
        row = {"n": n, "k": k, "closed_form": format_rational(hw.value)}
        try:
            sol = full_matrix_value(LineInstance(n, k).as_tree())
            row["oracle"] = format_rational(sol.value)
            row["agree"] = sol.value == hw.value
        except GuardExceeded:
            row["oracle"] = None
            row["agree"] = None
        row["hider_checks"] = verify_hider(optimal_hider(n, k), n, k).passed
        rows.append(row)
    return rows


def random_tree(rng: random.Random, n: int) -> tuple[tuple[int, int], ...]:
    return tuple((rng.randrange(i), i) for i in range(1, n))


def verify_tree_family(k: int, n_max: int, trials: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    rows = []
    for t in range(trials):
        n = rng.randint(2, n_max)
        profit = tuple(sorted((rng.randint(0, 5) for _ in range(k)), reverse=True))
        weights = [rng.randint(0, 6) for _ in range(n)]
        weights[rng.randrange(n)] += 1
        y = HiderDistribution(tuple(Fraction(a, sum(weights)) for a in weights))
        inst = TreeInstance(n, random_tree(rng, n), k, profit, y)
        catalog = enumerate_strategies(inst)
        dp = best_response_dp(inst).value
        bf, _ = brute_force_best_response(y, inst, catalog)
        eq = solve_equilibrium(inst).value
        full = full_matrix_value(inst, catalog).value
        rows.append({"trial": t, "n": n, "k": k, "best_response": format_rational(dp),
                     "brute_force": format_rational(bf), "equilibrium": format_rational(eq),
                     "full_matrix": format_rational(full), "agree": dp == bf and eq == full})
    return rows


def cmd_verify(args) -> int:
    if args.family == "line":
        ks = [args.k] if args.k is not None else [2, 3]
        rows = [r for k in ks for r in verify_line_family(k, args.n_max)]
        header = f"{'n':>4} {'k':>2} {'h/w':>8} {'oracle':>8} {'hider':>6} status"
        print(header)
        for r in rows:
            status = {True: "pass", False: "FAIL", None: "guard"}[r["agree"]]
            if not r["hider_checks"]:
                status = "FAIL"
            print(f"{r['n']:>4} {r['k']:>2} {r['closed_form']:>8} {str(r['oracle']):>8} "
                  f"{'ok' if r['hider_checks'] else 'bad':>6} {status}")
        failed = any(r["agree"] is False or not r["hider_checks"] for r in rows)
    else:
        k = args.k if args.k is not None else 2
        rows = verify_tree_family(k, args.n_max, args.trials, args.seed)
        print(f"{'trial':>5} {'n':>3} {'k':>2} {'best resp':>10} {'brute':>10} {'u*':>8} status")
        for r in rows:
            print(f"{r['trial']:>5} {r['n']:>3} {r['k']:>2} {r['best_response']:>10} "
                  f"{r['brute_force']:>10} {r['equilibrium']:>8} {'pass' if r['agree'] else 'FAIL'}")
        failed = not all(r["agree"] for r in rows)
    return EXIT_VERIFY if failed else EXIT_OK


# -- simulation and figures ----------------------------------------------------


def cmd_simulate(args) -> int:
    if args.instance:
        inst = _load_instance(args.instance)
        res = solve_equilibrium(inst)
        x, y, profit = res.seeker, res.hider, inst.profit
    else:
        if args.n is None or args.k is None:
            raise InvalidInstance("simulate needs --instance or both --n and --k")
        _check_line(args.n, args.k)
        if args.k < 2:
            raise InvalidInstance("line simulation uses the closed form, which needs k >= 2")
        _, x, y = game_value_line(args.n, args.k)
        profit = unit_profit(args.k)
    _emit(simulate(x, y, profit, args.trials, args.seed).to_dict())
    return EXIT_OK


def cmd_figure_data(args) -> int:
    print(emit_figure_data(args.figure, "json" if args.json else "csv"), end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="budgetsearch",
                                     description="Budgeted binary search games on trees and lines.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("line-solve", help="closed-form equilibrium on a line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_line_solve)

    p = sub.add_parser("line-sample", help="draw a seeker strategy and play it")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--target", type=int)
    p.add_argument("--draws", type=int, default=1, help="number of start vertices to draw")
    p.set_defaults(func=cmd_line_sample)

    p = sub.add_parser("line-hider", help="optimal hider on a line with its checks")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_line_hider)

    p = sub.add_parser("tree-best-response", help="seeker best response by labeling DP")
    p.add_argument("--instance", required=True)
    p.set_defaults(func=cmd_tree_best_response)

    p = sub.add_parser("tree-solve", help="exact equilibrium by column generation")
    p.add_argument("--instance", required=True)
    p.add_argument("--max-iters", type=int, default=500)
    p.set_defaults(func=cmd_tree_solve)

    p = sub.add_parser("verify", help="cross-check solvers against brute force")
    p.add_argument("--family", choices=["line", "tree"], required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo play of an equilibrium pair")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--instance")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("figure-data", help="data behind the worked line examples")
    p.add_argument("--figure", type=int, choices=[2, 3, 4], required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_figure_data)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidInstance as exc:
        print(f"invalid instance: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except GuardExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except IterationLimitExceeded as exc:
        print(f"guard exceeded: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
