"""Stochastic turn-based games and the random-turn reduction.

A stochastic game here is a turn-based mean-payoff game whose vertices are
owned by Max, Min, or nature; nature vertices carry an exact rational
distribution over their successors.

The random-turn game of a graph game at ratio r replaces each vertex v by
three copies: v#max and v#min owned by the players, and a nature vertex
v#n that hands the move to v#max with probability r and to v#min with
probability 1-r.  Every copy keeps v's weight, so a round of the original
game contributes its weight twice over the two steps it takes in the
random-turn game and the long-run averages coincide.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .graphs import GameGraph
from .ratios import BudgetRatio


class Owner(enum.Enum):
    MAX = "max"
    MIN = "min"
    NATURE = "nature"


@dataclass(frozen=True)
class StochasticGame:
    vertices: tuple[str, ...]
    owner: dict[str, Owner]
    edges: dict[str, tuple[str, ...]]
    prob: dict[str, dict[str, Fraction]]
    weight: dict[str, Fraction]

    def check(self) -> None:
        for v in self.vertices:
            if not self.edges[v]:
                raise ValueError(f"stochastic game vertex {v!r} has no successor")
            if self.owner[v] is Owner.NATURE:
                dist = self.prob.get(v)
                if dist is None or set(dist) != set(self.edges[v]):
                    raise ValueError(f"nature vertex {v!r} distribution must cover its successors")
                if sum(dist.values()) != 1:
                    raise ValueError(f"nature vertex {v!r} probabilities must sum to 1")
                if any(p < 0 for p in dist.values()):
                    raise ValueError(f"nature vertex {v!r} has a negative probability")
            elif v in self.prob:
                raise ValueError(f"player vertex {v!r} must not carry probabilities")


def max_copy(v: str) -> str:
    return f"{v}#max"


def min_copy(v: str) -> str:
    return f"{v}#min"


def nature_copy(v: str) -> str:
    return f"{v}#n"


def build_random_turn(graph: GameGraph, ratio: BudgetRatio | Fraction) -> StochasticGame:
    r = ratio.r if isinstance(ratio, BudgetRatio) else Fraction(ratio)
    if not 0 <= r <= 1:
        raise ValueError(f"ratio must lie in [0, 1], got {r}")
    vertices: list[str] = []
    owner: dict[str, Owner] = {}
    edges: dict[str, tuple[str, ...]] = {}
    prob: dict[str, dict[str, Fraction]] = {}
    weight: dict[str, Fraction] = {}
    for v in graph.vertices:
        vm, vi, vn = max_copy(v), min_copy(v), nature_copy(v)
        succ_n = tuple(nature_copy(u) for u in graph.edges[v])
        vertices += [vm, vi, vn]
        owner[vm], owner[vi], owner[vn] = Owner.MAX, Owner.MIN, Owner.NATURE
        edges[vm] = succ_n
        edges[vi] = succ_n
        edges[vn] = (vm, vi)
        prob[vn] = {vm: r, vi: 1 - r}
        weight[vm] = weight[vi] = weight[vn] = graph.weight[v]
    sg = StochasticGame(tuple(vertices), owner, edges, prob, weight)
    sg.check()
    return sg


@dataclass(frozen=True)
class RandomTurnView:
    """A random-turn-structured stochastic game collapsed to one state per round.

    `order` lists the nature vertices (one per original vertex); `succ` is
    the original successor relation expressed over nature vertices.
    """

    order: tuple[str, ...]
    ratio: Fraction
    succ: dict[str, tuple[str, ...]]
    weight: dict[str, Fraction]
    maxcopy: dict[str, str]
    mincopy: dict[str, str]


def as_random_turn(sg: StochasticGame) -> RandomTurnView | None:
    """Recognize the random-turn structure; None when it does not apply."""
    nat = [v for v in sg.vertices if sg.owner[v] is Owner.NATURE]
    ratio: Fraction | None = None
    maxcopy: dict[str, str] = {}
    mincopy: dict[str, str] = {}
    for n in nat:
        succ = sg.edges[n]
        if len(succ) != 2:
            return None
        a, b = succ
        if sg.owner[a] is Owner.MAX and sg.owner[b] is Owner.MIN:
            m, i = a, b
        elif sg.owner[b] is Owner.MAX and sg.owner[a] is Owner.MIN:
            m, i = b, a
        else:
            return None
        r = sg.prob[n][m]
        if ratio is None:
            ratio = r
        elif ratio != r:
            return None
        if sg.edges[m] != sg.edges[i]:
            return None
        if any(sg.owner[u] is not Owner.NATURE for u in sg.edges[m]):
            return None
        if not (sg.weight[n] == sg.weight[m] == sg.weight[i]):
            return None
        maxcopy[n], mincopy[n] = m, i
    if ratio is None or len(maxcopy) * 3 != len(sg.vertices):
        return None
    if len(set(maxcopy.values())) != len(nat) or len(set(mincopy.values())) != len(nat):
        return None
    return RandomTurnView(
        order=tuple(nat),
        ratio=ratio,
        succ={n: sg.edges[maxcopy[n]] for n in nat},
        weight={n: sg.weight[n] for n in nat},
        maxcopy=maxcopy,
        mincopy=mincopy,
    )
