"""Exact solver for random-turn mean-payoff games.

Strategy iteration in the Hoffman-Karp style: fix Min's positional
strategy, solve the induced max-MDP by average-reward policy iteration
(exact rational gain/bias), then switch Min at every vertex where a
successor improves the lexicographic (gain, bias) evaluation; stop when
neither player can improve.  Random-turn-structured inputs are first
collapsed to one state per original vertex (nature's coin merges into the
transition mix), which keeps the linear systems at the original game's
size; values and strategies are expanded back to the three copies.

Potentials of a strongly connected game at ratio r are the bias values of
the solved collapsed game with weights shifted by the constant value:
pot(v) = (nu*pot(v+) + pot(v-))/(1+nu) + w(v) - value holds exactly, with
v+ / v- the solver's witnesses, and pot(v-) <= pot(u) <= pot(v+) for every
successor u.  Strengths are (pot(v+) - pot(v-))/(1+nu), normalized by
their maximum S.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import NonConvergenceError, NotStronglyConnectedError
from .graphs import GameGraph, is_strongly_connected
from .mdp import MdpAction, MdpModel, PolicyResult, policy_iteration
from .random_turn import Owner, StochasticGame, as_random_turn
from .ratios import BudgetRatio

_OUTER_CAP = 10_000


@dataclass(frozen=True)
class PositionalStrategyPair:
    max_choice: dict[str, str]
    min_choice: dict[str, str]


@dataclass(frozen=True)
class StochasticSolution:
    value: dict[str, Fraction]
    strategies: PositionalStrategyPair


@dataclass(frozen=True)
class PotentialTable:
    ratio: BudgetRatio
    value: Fraction
    pot: dict[str, Fraction]
    strength: dict[str, Fraction]
    normalized: dict[str, Fraction]
    max_strength: Fraction
    spread: Fraction
    plus_witness: dict[str, str]
    minus_witness: dict[str, str]
    strategies: PositionalStrategyPair


@dataclass(frozen=True)
class _CollapsedSolution:
    gain: dict[str, Fraction]
    bias: dict[str, Fraction]
    max_choice: dict[str, str]
    min_choice: dict[str, str]


def _hoffman_karp(
    min_sites: list[str],
    candidates: Callable[[str], tuple[str, ...]],
    build_inner: Callable[[dict[str, str]], MdpModel],
) -> tuple[PolicyResult, dict[str, str]]:
    """Generic outer loop; returns the final inner solve and Min's policy."""
    f = {v: candidates(v)[0] for v in min_sites}
    seen: set[tuple[str, ...]] = set()
    for _ in range(_OUTER_CAP):
        key = tuple(f[v] for v in min_sites)
        if key in seen:
            raise NonConvergenceError("strategy iteration revisited a Min policy")
        seen.add(key)
        res = policy_iteration(build_inner(f))
        improved = False
        for v in min_sites:
            cur = f[v]
            best = cur
            best_key = (res.gain[cur], res.bias[cur])
            for u in candidates(v):
                k = (res.gain[u], res.bias[u])
                if k < best_key:
                    best, best_key = u, k
            if best != cur:
                f[v] = best
                improved = True
        if not improved:
            return res, f
    raise NonConvergenceError("strategy iteration hit the outer iteration cap")


def _solve_collapsed(
    order: Iterable[str],
    succ: dict[str, tuple[str, ...]],
    weight: dict[str, Fraction],
    r: Fraction,
) -> _CollapsedSolution:
    states = tuple(order)

    def build_inner(f: dict[str, str]) -> MdpModel:
        actions: dict[str, tuple[MdpAction, ...]] = {}
        for v in states:
            acts = []
            for u in succ[v]:
                dist: dict[str, Fraction] = {u: r}
                dist[f[v]] = dist.get(f[v], Fraction(0)) + (1 - r)
                acts.append(MdpAction(u, dist))
            actions[v] = tuple(acts)
        return MdpModel(states, actions, {}, weight, "max")

    res, f = _hoffman_karp(list(states), lambda v: succ[v], build_inner)
    return _CollapsedSolution(res.gain, res.bias, dict(res.policy), f)


def solve_stochastic_mp(sg: StochasticGame) -> StochasticSolution:
    """Value and one-step-optimal positional strategies of a stochastic game."""
    sg.check()
    view = as_random_turn(sg)
    if view is not None:
        sol = _solve_collapsed(view.order, view.succ, view.weight, view.ratio)
        value: dict[str, Fraction] = {}
        max_choice: dict[str, str] = {}
        min_choice: dict[str, str] = {}
        for n in view.order:
            value[n] = sol.gain[n]
            value[view.maxcopy[n]] = sol.gain[sol.max_choice[n]]
            value[view.mincopy[n]] = sol.gain[sol.min_choice[n]]
            max_choice[view.maxcopy[n]] = sol.max_choice[n]
            min_choice[view.mincopy[n]] = sol.min_choice[n]
        return StochasticSolution(value, PositionalStrategyPair(max_choice, min_choice))

    min_sites = [v for v in sg.vertices if sg.owner[v] is Owner.MIN]

    def build_inner(f: dict[str, str]) -> MdpModel:
        actions = {
            v: tuple(MdpAction(u, {u: Fraction(1)}) for u in sg.edges[v])
            for v in sg.vertices
            if sg.owner[v] is Owner.MAX
        }
        chance: dict[str, dict[str, Fraction]] = {}
        for v in sg.vertices:
            if sg.owner[v] is Owner.NATURE:
                chance[v] = sg.prob[v]
            elif sg.owner[v] is Owner.MIN:
                chance[v] = {f[v]: Fraction(1)}
        return MdpModel(sg.vertices, actions, chance, sg.weight, "max")

    res, f = _hoffman_karp(min_sites, lambda v: sg.edges[v], build_inner)
    return StochasticSolution(dict(res.gain), PositionalStrategyPair(dict(res.policy), f))


def evaluate_strategy_pair(
    graph: GameGraph,
    ratio: BudgetRatio | Fraction,
    max_choice: dict[str, str],
    min_choice: dict[str, str],
) -> dict[str, Fraction]:
    """Exact per-vertex mean payoff when both players fix positional choices."""
    from .mdp import evaluate_markov_chain

    r = ratio.r if isinstance(ratio, BudgetRatio) else Fraction(ratio)
    trans: dict[str, dict[str, Fraction]] = {}
    for v in graph.vertices:
        dist = {max_choice[v]: r}
        u = min_choice[v]
        dist[u] = dist.get(u, Fraction(0)) + (1 - r)
        trans[v] = dist
    gain, _ = evaluate_markov_chain(graph.vertices, trans, graph.weight)
    return gain


def game_value(graph: GameGraph, ratio: BudgetRatio | Fraction) -> Fraction:
    """Exact mean-payoff value of a strongly connected game at one ratio."""
    r = ratio.r if isinstance(ratio, BudgetRatio) else Fraction(ratio)
    if not 0 <= r <= 1:
        raise ValueError(f"ratio must lie in [0, 1], got {r}")
    if not is_strongly_connected(graph):
        raise NotStronglyConnectedError("game_value requires a strongly connected game")
    sol = _solve_collapsed(graph.vertices, graph.edges, graph.weight, r)
    values = set(sol.gain.values())
    assert len(values) == 1, "strongly connected games have a constant value"
    return values.pop()


def potentials(graph: GameGraph, ratio: BudgetRatio | Fraction) -> PotentialTable:
    """Exact value, potentials, and strengths of a strongly connected game."""
    br = ratio if isinstance(ratio, BudgetRatio) else BudgetRatio(Fraction(ratio))
    r = br.r
    if not 0 < r < 1:
        raise ValueError(f"potentials need 0 < r < 1, got {r}")
    if not is_strongly_connected(graph):
        raise NotStronglyConnectedError("potentials require a strongly connected game")
    sol = _solve_collapsed(graph.vertices, graph.edges, graph.weight, r)

    values = set(sol.gain.values())
    assert len(values) == 1, "strongly connected games have a constant value"
    value = values.pop()

    plus, minus = sol.max_choice, sol.min_choice
    for v in graph.vertices:
        lo, hi = sol.bias[minus[v]], sol.bias[plus[v]]
        for u in graph.edges[v]:
            assert lo <= sol.bias[u] <= hi, "witnesses must bound every successor's potential"

    shift = min(sol.bias.values())
    pot = {v: sol.bias[v] - shift for v in graph.vertices}
    nu = br.nu
    strength = {v: (pot[plus[v]] - pot[minus[v]]) / (1 + nu) for v in graph.vertices}
    for v in graph.vertices:
        residual = pot[v] - ((nu * pot[plus[v]] + pot[minus[v]]) / (1 + nu) + graph.weight[v] - value)
        assert residual == 0, "potential recurrence must hold exactly"
    s_max = max(strength.values())
    normalized = {
        v: (strength[v] / s_max if s_max > 0 else Fraction(0)) for v in graph.vertices
    }
    return PotentialTable(
        ratio=br,
        value=value,
        pot=pot,
        strength=strength,
        normalized=normalized,
        max_strength=s_max,
        spread=max(pot.values()),
        plus_witness=plus,
        minus_witness=minus,
        strategies=PositionalStrategyPair(dict(plus), dict(minus)),
    )
