"""Game graphs and their structural analysis.

A game graph is a finite directed graph with rational vertex weights and
optional parity indices.  Every vertex must have at least one successor so
that infinite plays exist from everywhere.  Vertex order, successor order,
and all derived structures (SCC lists, BSCC lists) are canonical: sorted by
vertex id, so every downstream computation is deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .errors import GameValidationError
from .ratios import parse_rational


@dataclass(frozen=True)
class GameGraph:
    vertices: tuple[str, ...]
    edges: dict[str, tuple[str, ...]]
    weight: dict[str, Fraction]
    parity: dict[str, int] = field(default_factory=dict)

    @classmethod
    def build(
        cls,
        vertices: Iterable[str],
        edges: Iterable[tuple[str, str]],
        weights: Mapping[str, object] | None = None,
        parity: Mapping[str, int] | None = None,
    ) -> "GameGraph":
        vs = tuple(sorted(dict.fromkeys(str(v) for v in vertices)))
        succ: dict[str, list[str]] = {v: [] for v in vs}
        for u, w in edges:
            u, w = str(u), str(w)
            succ.setdefault(u, [])
            if w not in succ[u]:
                succ[u].append(w)
        canon = {v: tuple(sorted(succ.get(v, ()))) for v in vs}
        wmap = {v: Fraction(0) for v in vs}
        for v, x in (weights or {}).items():
            wmap[str(v)] = parse_rational(x)
        pmap = {str(v): int(p) for v, p in (parity or {}).items()}
        return cls(vs, canon, wmap, pmap)

    def successors(self, v: str) -> tuple[str, ...]:
        return self.edges[v]

    def edge_list(self) -> list[tuple[str, str]]:
        return [(u, w) for u in self.vertices for w in self.edges[u]]

    def negated(self) -> "GameGraph":
        """Same graph with all weights negated (role-swapped view)."""
        return GameGraph(
            self.vertices,
            self.edges,
            {v: -w for v, w in self.weight.items()},
            dict(self.parity),
        )

    def shifted(self, by: Fraction) -> "GameGraph":
        """Same graph with `by` subtracted from every weight."""
        return GameGraph(
            self.vertices,
            self.edges,
            {v: w - by for v, w in self.weight.items()},
            dict(self.parity),
        )

    def induced(self, keep: Iterable[str]) -> "GameGraph":
        """Subgraph induced by `keep`; edges leaving the set are dropped."""
        ks = set(keep)
        return GameGraph(
            tuple(v for v in self.vertices if v in ks),
            {v: tuple(w for w in self.edges[v] if w in ks) for v in self.vertices if v in ks},
            {v: w for v, w in self.weight.items() if v in ks},
            {v: p for v, p in self.parity.items() if v in ks},
        )


def validate(graph: GameGraph, require_parity: bool = False) -> None:
    """Check structural invariants; raise with every violation found."""
    violations: list[tuple[str, str, str]] = []
    declared = set(graph.vertices)
    for u in graph.vertices:
        for w in graph.edges[u]:
            if w not in declared:
                violations.append(("DanglingEdge", f"{u}->{w}", f"edge target {w!r} is not a declared vertex"))
        if not graph.edges[u]:
            violations.append(("SinkVertex", u, "every vertex needs at least one successor"))
        if require_parity and u not in graph.parity:
            violations.append(("MissingParity", u, "parity objective requested but vertex has no parity index"))
    if violations:
        raise GameValidationError(violations)


def strongly_connected_components(
    vertices: Iterable[str], successors: Mapping[str, Iterable[str]]
) -> list[frozenset[str]]:
    """Tarjan's algorithm, iterative; components in canonical order."""
    order = list(vertices)
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[frozenset[str]] = []
    counter = 0

    for root in order:
        if root in index:
            continue
        work: list[tuple[str, int]] = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            advanced = False
            succ = list(successors[v])
            for j in range(i, len(succ)):
                w = succ[j]
                if w not in index:
                    work.append((v, j + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    comps.sort(key=lambda c: min(c))
    return comps


def sccs(graph: GameGraph) -> list[frozenset[str]]:
    return strongly_connected_components(graph.vertices, graph.edges)


def bsccs(graph: GameGraph) -> list[frozenset[str]]:
    """Bottom strongly connected components: SCCs with no edge leaving them."""
    out = []
    for comp in sccs(graph):
        if all(w in comp for v in comp for w in graph.edges[v]):
            out.append(comp)
    return out


def is_strongly_connected(graph: GameGraph) -> bool:
    return len(sccs(graph)) == 1


def vertices_not_reaching(graph: GameGraph, targets: Iterable[str]) -> set[str]:
    """Vertices with no path (of any length >= 0) to any target vertex."""
    pred: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for u in graph.vertices:
        for w in graph.edges[u]:
            if w in pred:
                pred[w].append(u)
    seen = set()
    frontier = [t for t in targets if t in pred]
    seen.update(frontier)
    while frontier:
        nxt = []
        for v in frontier:
            for u in pred[v]:
                if u not in seen:
                    seen.add(u)
                    nxt.append(u)
        frontier = nxt
    return set(graph.vertices) - seen


def cycle_mean_extremes(graph: GameGraph) -> tuple[Fraction, Fraction]:
    """Exact (min, max) cycle mean of vertex weights over all cycles.

    Karp's dynamic program per SCC; an edge u->w carries weight(u), so a
    cycle's edge-weight sum equals the sum of its vertex weights.  Raises
    if the graph is acyclic.
    """
    lo: Fraction | None = None
    hi: Fraction | None = None
    for comp in sccs(graph):
        members = sorted(comp)
        has_cycle = len(members) > 1 or members[0] in graph.edges[members[0]]
        if not has_cycle:
            continue
        mn = _karp_min_mean(graph, members)
        mx = -_karp_min_mean(graph.negated(), members)
        lo = mn if lo is None else min(lo, mn)
        hi = mx if hi is None else max(hi, mx)
    if lo is None or hi is None:
        raise ValueError("graph has no cycle")
    return lo, hi


def _karp_min_mean(graph: GameGraph, members: list[str]) -> Fraction:
    n = len(members)
    idx = {v: i for i, v in enumerate(members)}
    # dist[k][v] = min weight of a k-edge walk from the source to v, inside the SCC.
    dist: list[list[Fraction | None]] = [[None] * n for _ in range(n + 1)]
    dist[0][0] = Fraction(0)
    for k in range(1, n + 1):
        row, prev = dist[k], dist[k - 1]
        for u in members:
            du = prev[idx[u]]
            if du is None:
                continue
            wu = du + graph.weight[u]
            for w in graph.edges[u]:
                if w in idx:
                    j = idx[w]
                    if row[j] is None or wu < row[j]:
                        row[j] = wu
    best: Fraction | None = None
    for j in range(n):
        dn = dist[n][j]
        if dn is None:
            continue
        worst: Fraction | None = None
        for k in range(n):
            dk = dist[k][j]
            if dk is None:
                continue
            val = Fraction(dn - dk, n - k)
            if worst is None or val > worst:
                worst = val
        if worst is not None and (best is None or worst < best):
            best = worst
    assert best is not None, "SCC with a cycle must yield a finite Karp value"
    return best
