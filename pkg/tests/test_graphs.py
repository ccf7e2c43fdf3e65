"""Graph container, validation, components, and exact cycle means."""

import random
from fractions import Fraction
from itertools import permutations

import pytest

from bidgames.errors import GameValidationError
from bidgames.graphs import (
    GameGraph,
    bsccs,
    cycle_mean_extremes,
    is_strongly_connected,
    sccs,
    strongly_connected_components,
    validate,
    vertices_not_reaching,
)
from conftest import chain_game, loops_game, random_sc_game


def _reaches(graph: GameGraph) -> dict[str, set[str]]:
    out = {}
    for v in graph.vertices:
        seen = {v}
        todo = [v]
        while todo:
            u = todo.pop()
            for w in graph.edges[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        out[v] = seen
    return out


def _simple_cycle_means(graph: GameGraph) -> list[Fraction]:
    """Every simple cycle's mean weight, by brute force."""
    ids = list(graph.vertices)
    means = []
    for k in range(1, len(ids) + 1):
        for perm in permutations(ids, k):
            if perm[0] != min(perm):
                continue
            closed = all(perm[(i + 1) % k] in graph.edges[perm[i]] for i in range(k))
            if closed:
                means.append(Fraction(sum(graph.weight[v] for v in perm), k))
    return means


class TestBuild:
    def test_successor_order_canonical(self):
        g = GameGraph.build(["b", "a"], [("a", "b"), ("a", "a"), ("b", "a")])
        assert g.successors("a") == ("a", "b")
        assert g.vertices == ("a", "b")

    def test_default_weights_zero(self):
        g = loops_game()
        h = chain_game()
        assert all(h.weight[v] == 0 for v in h.vertices)
        assert g.weight["v1"] == 1 and g.weight["v2"] == -1

    def test_edge_list_round_trip(self):
        g = loops_game()
        assert GameGraph.build(g.vertices, g.edge_list(), dict(g.weight)) == g

    def test_duplicate_edges_collapse(self):
        g = GameGraph.build(["a"], [("a", "a"), ("a", "a")])
        assert g.successors("a") == ("a",)


class TestValidate:
    def test_clean_graph_passes(self):
        validate(loops_game())

    def test_sink_reported(self):
        g = GameGraph.build(["a", "b"], [("a", "b")])
        with pytest.raises(GameValidationError) as info:
            validate(g)
        assert any(kind == "SinkVertex" for kind, _, _ in info.value.violations)

    def test_missing_parity_reported(self):
        g = GameGraph.build(["a"], [("a", "a")], None, {})
        with pytest.raises(GameValidationError):
            validate(g, require_parity=True)


class TestTransforms:
    def test_negated(self):
        g = loops_game().negated()
        assert g.weight["v1"] == -1 and g.weight["v2"] == 1

    def test_shifted(self):
        g = loops_game().shifted(Fraction(1, 3))
        assert g.weight["v1"] == Fraction(2, 3)

    def test_induced_drops_outside_edges(self):
        g = chain_game().induced(["u1"])
        assert g.vertices == ("u1",)
        assert g.successors("u1") == ("u1",)


class TestComponents:
    def test_chain_sccs(self):
        comps = sccs(chain_game())
        assert frozenset({"u1"}) in comps
        assert frozenset({"v1", "v2"}) in comps
        assert len(comps) == 3

    def test_chain_bsccs(self):
        assert sorted(bsccs(chain_game()), key=sorted) == [
            frozenset({"u1"}), frozenset({"u2"})]

    def test_loops_strongly_connected(self):
        assert is_strongly_connected(loops_game())
        assert not is_strongly_connected(chain_game())

    def test_cross_oracle_random(self):
        rng = random.Random(71)
        for _ in range(60):
            g = random_sc_game(rng, 7)
            # random graphs built here are SC by construction; break them up
            n = rng.randint(1, len(g.vertices))
            ids = [f"x{i}" for i in range(n)]
            edges = [(v, rng.choice(ids)) for v in ids for _ in range(rng.randint(1, 2))]
            h = GameGraph.build(ids, edges)
            reach = _reaches(h)
            expected = set()
            for v in ids:
                comp = frozenset(u for u in ids if v in reach[u] and u in reach[v])
                expected.add(comp)
            got = set(strongly_connected_components(h.vertices, h.edges))
            assert got == expected


class TestReachability:
    def test_vertices_not_reaching_chain(self):
        assert vertices_not_reaching(chain_game(), ["u2"]) == {"u1"}
        assert vertices_not_reaching(chain_game(), ["u1"]) == {"u2"}

    def test_cross_oracle(self):
        rng = random.Random(83)
        for _ in range(60):
            n = rng.randint(2, 7)
            ids = [f"x{i}" for i in range(n)]
            edges = [(v, rng.choice(ids)) for v in ids for _ in range(2)]
            h = GameGraph.build(ids, edges)
            target = rng.choice(ids)
            reach = _reaches(h)
            expected = {v for v in ids if target not in reach[v]}
            assert vertices_not_reaching(h, [target]) == expected


class TestCycleMeans:
    def test_loops(self):
        assert cycle_mean_extremes(loops_game()) == (Fraction(-1), Fraction(1))

    def test_loops21(self):
        from conftest import loops21_game
        assert cycle_mean_extremes(loops21_game()) == (Fraction(-1), Fraction(2))

    def test_acyclic_raises(self):
        g = GameGraph.build(["a", "b"], [("a", "b")])
        with pytest.raises(ValueError):
            cycle_mean_extremes(g)

    def test_cross_oracle_random(self):
        rng = random.Random(97)
        for _ in range(40):
            g = random_sc_game(rng, 6)
            means = _simple_cycle_means(g)
            assert means
            assert cycle_mean_extremes(g) == (min(means), max(means))
