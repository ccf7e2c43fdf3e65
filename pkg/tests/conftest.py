"""Shared fixtures and seeded game generators."""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path

import pytest

from bidgames.graphs import GameGraph
from bidgames.stochastic import game_value

FIXTURES = Path(__file__).parent / "fixtures"

ALL_LOOP_EDGES = [("v1", "v1"), ("v1", "v2"), ("v2", "v1"), ("v2", "v2")]


def loops_game() -> GameGraph:
    return GameGraph.build(["v1", "v2"], ALL_LOOP_EDGES, {"v1": 1, "v2": -1})


def loops21_game() -> GameGraph:
    return GameGraph.build(["v1", "v2"], ALL_LOOP_EDGES, {"v1": 2, "v2": -1})


def chain_game() -> GameGraph:
    return GameGraph.build(
        ["u1", "u2", "v1", "v2"],
        [("u1", "u1"), ("u2", "u2"), ("v1", "u1"), ("v1", "v2"),
         ("v2", "v1"), ("v2", "u2")],
    )


def parity6_game() -> GameGraph:
    return GameGraph.build(
        ["a1", "a2", "b1", "b2", "w1", "w2"],
        [("w1", "w2"), ("w2", "w1"), ("b1", "b2"), ("b2", "b1"),
         ("a1", "w1"), ("a1", "a2"), ("a2", "a1"), ("a2", "b1")],
        None,
        {"a1": 0, "a2": 0, "b1": 1, "b2": 2, "w1": 1, "w2": 0},
    )


@pytest.fixture
def loops():
    return loops_game()


@pytest.fixture
def chain():
    return chain_game()


# ------------------------------------------------------------- generators


def random_sc_outdeg2(rng: random.Random, max_vertices: int = 10) -> GameGraph:
    """Strongly connected, exactly two successors per vertex, integer weights."""
    n = rng.randint(2, max_vertices)
    ids = [f"n{i}" for i in range(n)]
    edges = []
    for i, v in enumerate(ids):
        ring = ids[(i + 1) % n]
        extra = rng.choice([u for u in ids if u != ring])
        edges.append((v, ring))
        edges.append((v, extra))
    weights = {v: Fraction(rng.randint(-5, 5)) for v in ids}
    return GameGraph.build(ids, edges, weights)


def random_sc_game(rng: random.Random, max_vertices: int = 8) -> GameGraph:
    """Strongly connected with out-degrees in [2, 4]; weights in [-5, 5]."""
    n = rng.randint(2, max_vertices)
    ids = [f"n{i}" for i in range(n)]
    edges = []
    for i, v in enumerate(ids):
        succ = {ids[(i + 1) % n]}
        for _ in range(rng.randint(1, 3)):
            succ.add(rng.choice(ids))
        if len(succ) < 2:
            succ.add(rng.choice([u for u in ids if u not in succ]))
        edges.extend((v, u) for u in sorted(succ))
    weights = {v: Fraction(rng.randint(-5, 5)) for v in ids}
    return GameGraph.build(ids, edges, weights)


NICE_RATIOS = [Fraction(1, 2), Fraction(2, 5), Fraction(3, 5), Fraction(1, 3),
               Fraction(4, 7), Fraction(5, 9), Fraction(3, 8)]


def random_value0_game(rng: random.Random, max_vertices: int = 6):
    """A strongly connected game shifted to have value exactly 0 at a nice ratio."""
    graph = random_sc_game(rng, max_vertices)
    r = rng.choice(NICE_RATIOS)
    return graph.shifted(game_value(graph, r)), r


def random_double_reachability(rng: random.Random, max_vertices: int = 6) -> tuple[GameGraph, str, str]:
    """Interior ring plus two absorbing endpoints t0 (good) and t1 (bad)."""
    n = rng.randint(2, max_vertices - 2)
    ids = [f"m{i}" for i in range(n)]
    edges = [("t0", "t0"), ("t1", "t1"), (ids[0], "t0")]
    for i, v in enumerate(ids):
        edges.append((v, ids[(i + 1) % n]))
        edges.append((v, rng.choice(ids + ["t0", "t1"])))
    g = GameGraph.build(ids + ["t0", "t1"], edges)
    return g, "t0", "t1"


def random_parity_game(rng: random.Random, max_vertices: int = 12) -> GameGraph:
    n = rng.randint(2, max_vertices)
    ids = [f"p{i}" for i in range(n)]
    edges = []
    for v in ids:
        succ = {rng.choice(ids) for _ in range(rng.randint(1, 3))}
        edges.extend((v, u) for u in sorted(succ))
    parity = {v: rng.randint(0, 3) for v in ids}
    return GameGraph.build(ids, edges, None, parity)
