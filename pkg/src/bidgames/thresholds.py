"""Threshold budget ratios for reachability, parity, and mean-payoff goals.

Interior thresholds satisfy a local recurrence over each vertex's extreme
successors (hi = largest current threshold among successors, lo =
smallest):

    poorman:  th(v) = hi / (1 - lo + hi)
    richman:  th(v) = (lo + hi) / 2

Both updates are monotone, so Gauss-Seidel sweeps from all zeros converge
upward to the least fixed point compatible with the clamped boundary.
Infinite-duration goals reduce to this boundary-value problem: bottom
SCCs are classified outright (parity by maximum index, mean payoff by
the ratio at which the random-turn value changes sign) and the rest of
the graph treats those classifications as boundary values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonConvergenceError, UnreachableBoundaryError
from .graphs import GameGraph, bsccs, cycle_mean_extremes, validate, vertices_not_reaching
from .stochastic import game_value

MODES = ("poorman", "richman")

_SWEEP_CAP = 1_000_000
_BISECTION_CAP = 200


def _local_update(mode: str, lo: float, hi: float) -> float:
    if mode == "poorman":
        denom = 1.0 - lo + hi
        assert denom >= 1.0, "extreme successors out of order"
        return hi / denom
    return (lo + hi) / 2.0


@dataclass(frozen=True)
class ThresholdMap:
    """Converged thresholds; `boundary` records the clamped vertices."""

    mode: str
    values: dict[str, float]
    boundary: dict[str, float]
    sweeps: int

    def residual(self, graph: GameGraph) -> float:
        worst = 0.0
        for v in graph.vertices:
            if v in self.boundary:
                continue
            succ = [self.values[u] for u in graph.edges[v]]
            target = _local_update(self.mode, min(succ), max(succ))
            worst = max(worst, abs(self.values[v] - target))
        return worst


def solve_generalized_reachability(
    graph: GameGraph,
    boundary: dict[str, float],
    mode: str = "poorman",
    tol: float = 1e-10,
) -> ThresholdMap:
    """Least-fixed-point thresholds for given boundary values in [0, 1]."""
    validate(graph)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if not boundary:
        raise ValueError("boundary must pin at least one vertex")
    clamp = {v: float(x) for v, x in boundary.items()}
    for v, x in clamp.items():
        if v not in graph.weight:
            raise ValueError(f"boundary vertex {v!r} is not in the graph")
        if not 0.0 <= x <= 1.0:
            raise ValueError(f"boundary value for {v!r} must lie in [0, 1], got {x}")
    stranded = vertices_not_reaching(graph, set(clamp)) - set(clamp)
    if stranded:
        raise UnreachableBoundaryError(min(stranded))

    # Interior vertices whose every reachable boundary vertex is pinned at
    # 1 are exactly 1 in the least fixed point (any fixed point with an
    # interior minimum below 1 propagates that minimum along a path into
    # the boundary), but both local updates lose their contraction at that
    # corner and sweeps only creep toward it; pin the region up front.
    below_one = {v for v, x in clamp.items() if x < 1.0}
    pinned = vertices_not_reaching(graph, below_one) - set(clamp)

    values = {v: clamp.get(v, 0.0) for v in graph.vertices}
    for v in pinned:
        values[v] = 1.0
    interior = [v for v in graph.vertices if v not in clamp and v not in pinned]
    for sweep in range(1, _SWEEP_CAP + 1):
        delta = 0.0
        for v in interior:
            succ = [values[u] for u in graph.edges[v]]
            new = _local_update(mode, min(succ), max(succ))
            delta = max(delta, abs(new - values[v]))
            values[v] = new
        if delta <= tol:
            return ThresholdMap(mode, values, clamp, sweep)
    raise NonConvergenceError(f"threshold sweeps did not settle within {_SWEEP_CAP} passes")


def solve_reachability(
    graph: GameGraph,
    target: str,
    mode: str = "poorman",
    tol: float = 1e-10,
) -> ThresholdMap:
    """Thresholds for forcing a visit to `target`.

    The target itself needs no budget; vertices with no path to the
    target are clamped at 1.
    """
    if target not in graph.weight:
        raise ValueError(f"target {target!r} is not in the graph")
    boundary = {v: 1.0 for v in vertices_not_reaching(graph, {target})}
    boundary[target] = 0.0
    return solve_generalized_reachability(graph, boundary, mode, tol)


def classify_bscc(
    graph: GameGraph,
    component: tuple[str, ...],
    objective: str,
    ratio_tol: Fraction = Fraction(1, 10**10),
) -> Fraction:
    """Threshold of a bottom SCC: 0/1 for parity, a crossing ratio for mean payoff."""
    if objective == "parity":
        top = max(graph.parity[v] for v in component)
        return Fraction(0) if top % 2 == 1 else Fraction(1)
    if objective == "meanpayoff":
        return critical_ratio(graph.induced(set(component)), ratio_tol)
    raise ValueError(f"objective must be 'parity' or 'meanpayoff', got {objective!r}")


def critical_ratio(graph: GameGraph, tol: Fraction = Fraction(1, 10**10)) -> Fraction:
    """Ratio where the random-turn mean-payoff value of an SC game crosses 0.

    Dyadic bisection; cycle-mean extremes settle games whose value never
    changes sign.  An exactly-zero probe value is returned as is.
    """
    low_mean, high_mean = cycle_mean_extremes(graph)
    if low_mean >= 0:
        return Fraction(0)
    if high_mean < 0:
        return Fraction(1)
    lo, hi = Fraction(0), Fraction(1)
    for _ in range(_BISECTION_CAP):
        if hi - lo <= tol:
            break
        mid = (lo + hi) / 2
        val = game_value(graph, mid)
        if val == 0:
            return mid
        if val < 0:
            lo = mid
        else:
            hi = mid
    if hi - lo > tol:
        raise NonConvergenceError("critical-ratio bisection hit its step cap")
    return (lo + hi) / 2


def solve_parity(graph: GameGraph, tol: float = 1e-10) -> ThresholdMap:
    """Thresholds for the highest-recurring-index-is-odd goal."""
    validate(graph, require_parity=True)
    boundary: dict[str, float] = {}
    for comp in bsccs(graph):
        x = float(classify_bscc(graph, comp, "parity"))
        for v in comp:
            boundary[v] = x
    return solve_generalized_reachability(graph, boundary, "poorman", tol)


def solve_meanpayoff_thresholds(
    graph: GameGraph,
    tol: float = 1e-10,
    ratio_tol: Fraction = Fraction(1, 10**10),
) -> ThresholdMap:
    """Thresholds for forcing nonnegative mean payoff."""
    validate(graph)
    boundary: dict[str, float] = {}
    for comp in bsccs(graph):
        x = float(classify_bscc(graph, comp, "meanpayoff", ratio_tol))
        for v in comp:
            boundary[v] = x
    return solve_generalized_reachability(graph, boundary, "poorman", tol)


def first_passage_check(
    graph: GameGraph,
    thmap: ThresholdMap,
    tol: float = 1e-9,
) -> float:
    """Largest gap between richman thresholds and an exact first-passage solve.

    Freezes each interior vertex's extreme successors as read off the
    converged map, solves the induced half-half linear system exactly,
    and reports the worst absolute deviation.
    """
    from .exactlin import solve_linear

    assert thmap.mode == "richman", "first-passage comparison applies to richman maps"
    interior = [v for v in graph.vertices if v not in thmap.boundary]
    index = {v: i for i, v in enumerate(interior)}
    n = len(interior)
    a = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0) for _ in range(n)]
    for v in interior:
        i = index[v]
        a[i][i] = Fraction(1)
        succ = sorted(graph.edges[v], key=lambda u: (thmap.values[u], u))
        for u in (succ[0], succ[-1]):
            if u in index:
                a[i][index[u]] -= Fraction(1, 2)
            else:
                b[i] += Fraction(1, 2) * Fraction(thmap.boundary[u])
    exact = solve_linear(a, b) if interior else []
    worst = 0.0
    for v, x in zip(interior, exact):
        worst = max(worst, abs(thmap.values[v] - float(x)))
    assert worst <= tol, f"richman map deviates from first-passage solve by {worst}"
    return worst
