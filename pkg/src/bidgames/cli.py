"""Command-line interface.

Subcommands cover the solver surface (solve-reachability, solve-parity,
solve-mp, value), match simulation, constraint export, and auction game
construction.  All output is machine-readable (JSON on stdout, CSV via
--out) and byte-deterministic for fixed arguments and seeds.  Ratios and
weights are parsed exactly: "1/3", "0.25", and "2" are all fine, binary
floating point never enters through the command line.

The environment variable GAME_SOLVER_TOL overrides the default
convergence tolerance of the threshold solvers.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import BidgamesError, IllegalBidError
from .gamefiles import dumps_game, load_auction_spec, load_game
from .auctions import build_auction_game
from .etr import emit_mp_threshbud, emit_parity_threshbud
from .graphs import GameGraph, bsccs, is_strongly_connected
from .random_turn import build_random_turn, nature_copy
from .ratios import BudgetRatio, format_rational, parse_rational
from .simulate import (
    MatchConfig,
    PaymentRule,
    TieBreak,
    estimate_meanpayoff,
    run_match,
    write_trace_csv,
)
from .stochastic import PotentialTable, potentials, solve_stochastic_mp
from .strategies import (
    QueueBidder,
    WalkBidder,
    WarmupBidder,
    always_zero,
    constant_fraction,
    uniform_random,
)
from .thresholds import (
    classify_bscc,
    critical_ratio,
    solve_meanpayoff_thresholds,
    solve_parity,
    solve_reachability,
)


def _default_tol() -> float:
    raw = os.environ.get("GAME_SOLVER_TOL")
    return float(raw) if raw else 1e-10


def _emit(obj: dict) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _witnesses(graph: GameGraph, values: dict[str, float]) -> dict[str, dict[str, str]]:
    out = {}
    for v in graph.vertices:
        succ = graph.edges[v]
        lo = min(succ, key=lambda u: (values[u], u))
        hi = min(succ, key=lambda u: (-values[u], u))
        out[v] = {"low": lo, "high": hi}
    return out


def _threshold_report(graph: GameGraph, thmap, extra: dict | None = None) -> dict:
    report = {
        "mode": thmap.mode,
        "thresholds": {v: thmap.values[v] for v in graph.vertices},
        "witnesses": _witnesses(graph, thmap.values),
        "residual": thmap.residual(graph),
        "sweeps": thmap.sweeps,
    }
    if extra:
        report.update(extra)
    return report


def _cmd_solve_reachability(args) -> int:
    graph = load_game(args.game)
    thmap = solve_reachability(graph, args.target, mode=args.mode, tol=args.tol)
    _emit(_threshold_report(graph, thmap, {"target": args.target}))
    return 0


def _cmd_solve_parity(args) -> int:
    graph = load_game(args.game)
    thmap = solve_parity(graph, tol=args.tol)
    comps = [
        {"members": sorted(c), "value": format_rational(classify_bscc(graph, c, "parity"))}
        for c in bsccs(graph)
    ]
    _emit(_threshold_report(graph, thmap, {"bsccs": comps}))
    return 0


def _cmd_solve_mp(args) -> int:
    graph = load_game(args.game)
    thmap = solve_meanpayoff_thresholds(graph, tol=args.tol)
    comps = [
        {"members": sorted(c), "value": format_rational(classify_bscc(graph, c, "meanpayoff"))}
        for c in bsccs(graph)
    ]
    _emit(_threshold_report(graph, thmap, {"bsccs": comps}))
    return 0


def _cmd_value(args) -> int:
    graph = load_game(args.game)
    ratio = BudgetRatio(parse_rational(args.ratio))
    if args.general:
        sol = solve_stochastic_mp(build_random_turn(graph, ratio))
        _emit(
            {
                "ratio": str(ratio),
                "values": {v: format_rational(sol.value[nature_copy(v)]) for v in graph.vertices},
            }
        )
        return 0
    table = potentials(graph, ratio)
    _emit(
        {
            "ratio": str(ratio),
            "value": format_rational(table.value),
            "potentials": {v: format_rational(table.pot[v]) for v in graph.vertices},
            "strengths": {v: format_rational(table.strength[v]) for v in graph.vertices},
            "witnesses": {
                v: {"up": table.plus_witness[v], "down": table.minus_witness[v]}
                for v in graph.vertices
            },
        }
    )
    return 0


def _table_for(graph: GameGraph, ratio_arg: str | None) -> PotentialTable:
    if ratio_arg is not None:
        r = parse_rational(ratio_arg)
    else:
        r = critical_ratio(graph)
    return potentials(graph, BudgetRatio(r))


def _build_strategy(
    spec: str,
    graph: GameGraph,
    table: PotentialTable,
    own: Fraction,
    opp: Fraction,
    seed: int,
    maximizer: bool,
):
    name, _, arg = spec.partition(":")
    if name == "walk":
        side_table = table if maximizer else potentials(graph.negated(), table.ratio)
        return WalkBidder(side_table, own, opp)
    if name == "warmup":
        if not maximizer:
            raise ValueError("warmup is a maximizer strategy")
        return WarmupBidder(graph, own, opp, int(arg or "1"))
    if name == "queue":
        mult = int(arg or "1")
        return QueueBidder(own / 2**20, mult, table, upward=maximizer)
    if name == "constant":
        return constant_fraction(parse_rational(arg or "1/2"), table, upward=maximizer)
    if name == "uniform":
        return uniform_random(seed if not arg else int(arg), table, upward=maximizer)
    if name == "zero":
        return always_zero(table, upward=maximizer)
    raise ValueError(f"unknown strategy {spec!r}")


_RULES = {r.value: r for r in PaymentRule}
_TIES = {t.value: t for t in TieBreak}


def _cmd_simulate(args) -> int:
    graph = load_game(args.game)
    b1, b2 = parse_rational(args.budgets[0]), parse_rational(args.budgets[1])
    table = _table_for(graph, args.ratio)
    start = args.start or graph.vertices[0]
    rule = _RULES[args.rule]
    tie = _TIES[args.tie]
    tails = []
    wins = []
    paths = []
    for seed in range(1, args.seeds + 1):
        cfg = MatchConfig(
            graph, start, b1, b2, args.rounds, rule=rule, tie=tie, seed=seed,
            initial_energy=parse_rational(args.energy),
        )
        p1 = _build_strategy(args.max, graph, table, b1, b2, seed, True)
        p2 = _build_strategy(args.min, graph, table, b2, b1, seed, False)
        trace = run_match(cfg, p1, p2)
        tails.append(estimate_meanpayoff(trace))
        wins.append([trace.wins(1), trace.wins(2)])
        if args.out:
            path = f"{args.out}-seed{seed}.csv"
            write_trace_csv(trace, path)
            paths.append(path)
    _emit(
        {
            "game": args.game,
            "start": start,
            "ratio": str(table.ratio),
            "rule": rule.value,
            "tie": tie.value,
            "rounds": args.rounds,
            "seeds": args.seeds,
            "budgets": [format_rational(b1), format_rational(b2)],
            "wins": wins,
            "tail_averages": [format_rational(t) for t in tails],
            "min_tail_average": format_rational(min(tails)),
            "invariant_violations": 0,
            "traces": paths,
        }
    )
    return 0


def _cmd_export_etr(args) -> int:
    graph = load_game(args.game)
    r = parse_rational(args.ratio)
    objective = args.objective
    if objective is None:
        objective = "parity" if all(v in graph.parity for v in graph.vertices) else "mp"
    if objective == "parity":
        program = emit_parity_threshbud(graph, args.vertex, r)
    else:
        program = emit_mp_threshbud(graph, args.vertex, r)
    text = program.text()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_auction(args) -> int:
    spec = load_auction_spec(args.rewards)
    if args.slots != spec.slots:
        raise ValueError(
            f"--slots {args.slots} disagrees with the reward file ({spec.slots} slots)"
        )
    game = build_auction_game(spec)
    text = dumps_game(game)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bidgames")
    sub = parser.add_subparsers(dest="command", required=True)
    tol = _default_tol()

    p = sub.add_parser("solve-reachability", help="threshold ratios for reaching a target")
    p.add_argument("game")
    p.add_argument("--target", required=True)
    p.add_argument("--mode", choices=["poorman", "richman"], default="poorman")
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(run=_cmd_solve_reachability)

    p = sub.add_parser("solve-parity", help="threshold ratios for the parity goal")
    p.add_argument("game")
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(run=_cmd_solve_parity)

    p = sub.add_parser("solve-mp", help="threshold ratios for nonnegative mean payoff")
    p.add_argument("game")
    p.add_argument("--tol", type=float, default=tol)
    p.set_defaults(run=_cmd_solve_mp)

    p = sub.add_parser("value", help="game value and potentials at a fixed ratio")
    p.add_argument("game")
    p.add_argument("--ratio", required=True)
    p.add_argument("--general", action="store_true",
                   help="allow non-strongly-connected games (values only)")
    p.set_defaults(run=_cmd_value)

    p = sub.add_parser("simulate", help="run seeded matches and report tail averages")
    p.add_argument("game")
    p.add_argument("--max", required=True, help="player 1 strategy, e.g. walk, constant:1/2")
    p.add_argument("--min", required=True, help="player 2 strategy, e.g. queue:2, uniform")
    p.add_argument("--budgets", nargs=2, required=True, metavar=("B1", "B2"))
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--seeds", type=int, default=1)
    p.add_argument("--rule", choices=sorted(_RULES), default="poorman")
    p.add_argument("--tie", choices=sorted(_TIES), default="min-wins")
    p.add_argument("--start", default=None)
    p.add_argument("--ratio", default=None, help="potential-table ratio; default: critical ratio")
    p.add_argument("--energy", default="0", help="initial energy for the trace")
    p.add_argument("--out", default=None, help="prefix for per-seed trace CSV files")
    p.set_defaults(run=_cmd_simulate)

    p = sub.add_parser("export-etr", help="emit the threshold system as SMT-LIB 2 (QF_NRA)")
    p.add_argument("game")
    p.add_argument("--vertex", required=True)
    p.add_argument("--ratio", required=True)
    p.add_argument("--objective", choices=["parity", "mp"], default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(run=_cmd_export_etr)

    p = sub.add_parser("auction", help="build the repeated-auction game graph")
    p.add_argument("--slots", type=int, required=True)
    p.add_argument("--rewards", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(run=_cmd_auction)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except IllegalBidError as exc:
        print(f"IllegalBid: player {exc.player} in round {exc.round_index}", file=sys.stderr)
        return 1
    except (BidgamesError, ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
