"""Bidding strategies and their simulator-facing adapters.

Pure state types and transition functions come first (exact rational
arithmetic, no quantization, directly testable against worked examples).
The adapter classes at the bottom wrap them behind the bidder interface
the simulator drives: bid(vertex, own, opp, round_index), move(vertex),
settle(vertex, destination, won, own_after, opp_after, winning_bid).

Adapters floor outgoing bids onto a 96-bit-relative dyadic grid so that
long poorman matches keep budget denominators to powers of two; the
floor only ever reduces what the strategy pays, and each strategy's
invariant monitor runs on the exact post-round ledger, so a quantized
match that passes its monitors is sound evidence.  Two bids are sent
exactly: the budget walk's forcing bid (the opponent's entire budget)
and the warm-up bid at energy 1 (trimmed to the level unit, which still
strictly exceeds the opponent's budget and keeps the slack ledger flat).
"""

from __future__ import annotations

import heapq
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction

from .errors import InvariantBrokenError, PreconditionViolatedError
from .graphs import GameGraph
from .ratios import Dyadic, as_fraction, quantize_down, scaled_ceil, scaled_floor
from .stochastic import PotentialTable
from .thresholds import ThresholdMap

_BID_BITS = 96


# ---------------------------------------------------------------- budget walk


@dataclass(frozen=True)
class WalkState:
    """Bookkeeping position of the mean-payoff walk strategy.

    `x` starts at `kappa`, the smallest integer position whose target
    quotient nu*(1+2/kappa) is below the player's actual budget quotient.
    """

    x: Fraction
    nu: Fraction
    kappa: int
    table: PotentialTable


def walk_target_quotient(x: Fraction, nu: Fraction) -> Fraction:
    return nu * (1 + Fraction(2) / x)


def walk_bid_scale(x: Fraction, nu: Fraction) -> Fraction:
    return 2 * min(Fraction(1), nu) / (x * (x + 1))


def choose_kappa(nu: Fraction, own: Fraction, opp: Fraction) -> int:
    """Smallest integer position whose target quotient the budgets clear."""
    if opp <= 0:
        return 1
    q = Fraction(own) / Fraction(opp)
    if q <= nu:
        raise PreconditionViolatedError(
            f"budget quotient {q} does not exceed the game quotient {nu}"
        )
    k = int(2 * nu / (q - nu)) + 1
    assert walk_target_quotient(Fraction(k), nu) < q
    assert k == 1 or walk_target_quotient(Fraction(k - 1), nu) >= q
    return k


def start_walk(table: PotentialTable, own: Fraction, opp: Fraction) -> WalkState:
    nu = table.ratio.nu
    kappa = choose_kappa(nu, own, opp)
    return WalkState(Fraction(kappa), nu, kappa, table)


def max_walk_bid(state: WalkState, vertex: str) -> tuple[Fraction, str]:
    """Bid (in units of the opponent's budget) and the move on winning."""
    n = state.table.normalized[vertex]
    return n * walk_bid_scale(state.x, state.nu), state.table.plus_witness[vertex]


def update_walk(state: WalkState, n: Fraction, won: bool) -> WalkState:
    if won:
        return replace(state, x=state.x + n * min(Fraction(1), 1 / state.nu))
    step = n * min(Fraction(1), state.nu)
    if not state.x * (state.x + 1) > 2 * step:
        raise PreconditionViolatedError(
            "losing step at a forcing position: the bid should have won"
        )
    return replace(state, x=state.x - step)


def verify_walk_inequalities(x: Fraction, nu: Fraction, n: Fraction) -> bool:
    """Exact check of both walk-step inequalities at one sample point.

    The win form bounds the quotient after paying the bid; the lose form
    bounds it after the opponent's budget shrinks by at least the bid.
    """
    x, nu, n = Fraction(x), Fraction(nu), Fraction(n)
    if x <= 0 or nu <= 0 or not 0 <= n <= 1:
        raise ValueError("need x > 0, nu > 0, n in [0, 1]")
    down = n * min(Fraction(1), nu)
    if not x * (x + 1) > 2 * down:
        raise PreconditionViolatedError("sample violates the losing-step bound")
    bid = 2 * down / (x * (x + 1))
    here = walk_target_quotient(x, nu)
    up = n * min(Fraction(1), 1 / nu)
    win_ok = here - bid >= walk_target_quotient(x + up, nu)
    lose_ok = here / (1 - bid) >= walk_target_quotient(x - down, nu)
    return win_ok and lose_ok


# -------------------------------------------------------------------- warm-up


def triangle(k: int) -> int:
    return k * (k + 1) // 2


def lower_triangle(k: int) -> int:
    return k * (k - 1) // 2


@dataclass(frozen=True)
class WarmupState:
    k: int
    own: Fraction
    opp: Fraction


def warmup_slack(state: WarmupState) -> Fraction:
    total = state.own + state.opp
    return state.own - triangle(state.k + 1) * total / (state.k + 1) ** 2


def warmup_bid(state: WarmupState) -> Fraction:
    """One level unit plus half the slack above the level's required ratio."""
    if state.k < 1:
        raise PreconditionViolatedError("warm-up bids need energy coordinate >= 1")
    total = state.own + state.opp
    return total / (state.k + 1) ** 2 + warmup_slack(state) / 2


def warmup_invariant_ok(state: WarmupState) -> bool:
    return state.own * (state.k + 1) ** 2 > triangle(state.k + 1) * (state.own + state.opp)


def update_warmup(state: WarmupState, won: bool, own: Fraction, opp: Fraction) -> WarmupState:
    return WarmupState(state.k + (1 if won else -1), own, opp)


# ----------------------------------------------------------------- slush fund


@dataclass(frozen=True)
class SlushFundState:
    """Reachability ledger: exact real budget plus a slush reserve.

    The frozen threshold snapshot `fmap` and the derived schedule never
    change; only `real` and `slush` advance.  The first invariant
    real/(real + opponent) = fmap[current vertex] is restored exactly
    after every round, so any drift raises instead of compounding.
    """

    real: Fraction
    slush: Fraction
    target: str
    fmap: dict[str, Fraction]
    delta: dict[str, Fraction]
    dvar: dict[str, Fraction]
    move: dict[str, str]
    dist: dict[str, int]
    plus: dict[str, str]
    delta_min: Fraction
    gamma: Fraction


def _descent_moves(graph: GameGraph, fmap: dict[str, Fraction], target: str) -> dict[str, str]:
    hops = {target: 0}
    frontier = [target]
    pred: dict[str, list[str]] = {v: [] for v in graph.vertices}
    for v in graph.vertices:
        for u in graph.edges[v]:
            pred[u].append(v)
    while frontier:
        nxt = []
        for u in frontier:
            for v in pred[u]:
                if v not in hops:
                    hops[v] = hops[u] + 1
                    nxt.append(v)
        frontier = sorted(nxt)
    move: dict[str, str] = {target: min(graph.edges[target])}
    for v in graph.vertices:
        if v == target:
            continue
        if fmap[v] >= 1:
            move[v] = min(graph.edges[v])
        elif fmap[v] > 0:
            move[v] = min(graph.edges[v], key=lambda u: (fmap[u], u))
        else:
            reachable = [u for u in graph.edges[v] if u in hops]
            if not reachable:
                raise ValueError(f"vertex {v!r} has threshold 0 but no path to the target")
            move[v] = min(reachable, key=lambda u: (hops[u], u))
    return move


def init_slush_fund(
    graph: GameGraph,
    thresholds: ThresholdMap,
    target: str,
    own: Fraction,
    opp: Fraction,
    start: str,
) -> SlushFundState:
    own, opp = as_fraction(own), as_fraction(opp)
    fmap = {v: Fraction(thresholds.values[v]) for v in graph.vertices}
    f0 = fmap[start]
    if f0 >= 1 or own * 1 <= f0 * (own + opp):
        raise PreconditionViolatedError(
            f"initial ratio must exceed the threshold {float(f0):.6g} at {start!r}"
        )
    # deterministic ties: extreme threshold first, then smallest id
    plus = {
        v: min(u for u in graph.edges[v] if fmap[u] == max(fmap[w] for w in graph.edges[v]))
        for v in graph.vertices
    }
    minus = {
        v: min(u for u in graph.edges[v] if fmap[u] == min(fmap[w] for w in graph.edges[v]))
        for v in graph.vertices
    }
    delta: dict[str, Fraction] = {}
    for v in graph.vertices:
        f, fm = fmap[v], fmap[minus[v]]
        if f > 0 and fm < 1:
            delta[v] = max(Fraction(0), (f - fm) / (f * (1 - fm)))
        else:
            delta[v] = Fraction(0)
    move = _descent_moves(graph, fmap, target)

    dist: dict[str, int] = {target: 0}
    for v in graph.vertices:
        if fmap[v] >= 1 and v != target:
            dist[v] = len(graph.vertices)
            continue
        path = []
        u = v
        while u not in dist:
            if u in path:
                raise ValueError(
                    f"descent from {v!r} cycles; threshold residual too large for a strategy"
                )
            path.append(u)
            u = move[u]
        base = dist[u]
        for i, w in enumerate(reversed(path), start=1):
            dist[w] = base + i

    positive = [d for d in delta.values() if d > 0]
    delta_min = min(positive) if positive else Fraction(1)
    ladder = [Fraction(1)]
    for _ in range(1, len(graph.vertices)):
        ladder.append((2 / delta_min) * sum(ladder) + 1)
    gamma = 1 / (sum(ladder) + 1)
    dvar = {}
    for v in graph.vertices:
        idx = len(graph.vertices) - dist[v]
        dvar[v] = gamma * ladder[max(idx, 1) - 1]

    real = f0 * opp / (1 - f0)
    slush = own - real
    if slush <= 0:
        raise InvariantBrokenError("no slush left after funding the real budget")
    return SlushFundState(
        real=real, slush=slush, target=target, fmap=fmap, delta=delta,
        dvar=dvar, move=move, dist=dist, plus=plus, delta_min=delta_min,
        gamma=gamma,
    )


def reachability_bid(
    state: SlushFundState, thresholds: ThresholdMap, vertex: str
) -> tuple[Fraction, str]:
    """Bid a threshold-gap share of the real budget plus a slush installment."""
    assert vertex in state.fmap, "threshold map does not cover this vertex"
    if state.fmap[vertex] >= 1 and vertex != state.target:
        raise PreconditionViolatedError(f"{vertex!r} is losing at every budget ratio")
    bid = state.delta[vertex] * state.real + state.dvar[vertex] * state.slush
    return bid, state.move[vertex]


def update_slush_fund(
    state: SlushFundState,
    vertex: str,
    destination: str,
    won: bool,
    opponent_budget: Fraction,
) -> SlushFundState:
    """Exact rebalance restoring real/(real+opponent) = f(destination)."""
    bid = state.delta[vertex] * state.real + state.dvar[vertex] * state.slush
    total = state.real + state.slush - (bid if won else 0)
    fd = state.fmap[destination]
    if fd >= 1:
        raise InvariantBrokenError(f"moved to a losing vertex {destination!r}")
    real = fd * as_fraction(opponent_budget) / (1 - fd)
    slush = total - real
    if slush <= 0:
        raise InvariantBrokenError("slush fund depleted")
    if won:
        if slush != state.slush - state.dvar[vertex] * state.slush:
            raise InvariantBrokenError("winning round did not cost exactly the installment")
    else:
        if slush < state.slush:
            raise InvariantBrokenError("slush fund shrank on an opponent win")
        fp = state.fmap[state.plus[vertex]]
        if fp >= 1:
            # the bid was the opponent's whole budget plus an installment
            raise InvariantBrokenError("lost a bidding that the real budget forced")
        f = state.fmap[vertex]
        if f > 0 and fp > 0:
            # the tight transfer bound is provable against the frozen map
            # only where its local residual has the favorable sign
            fm = state.fmap[state.move[vertex]]
            ideal = f * (1 - fm) / (1 - f)
            if fp <= ideal:
                floor = state.slush + state.dvar[vertex] * state.slush * fp / (1 - fp)
                if slush < floor:
                    raise InvariantBrokenError(
                        "slush growth fell short of the guaranteed transfer"
                    )
    return replace(state, real=real, slush=slush)


# ------------------------------------------------------------- queue adversary


@dataclass
class QueueState:
    """Min's pending-bid queue; a heap plus a running maximum.

    Only minima are ever removed, so the cached maximum stays valid until
    the queue empties.
    """

    epsilon: Fraction
    multiplier: int = 1
    round_index: int = 1
    heap: list = field(default_factory=list)
    top: Fraction | None = None

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.multiplier < 1:
            raise ValueError("multiplier must be a positive integer")


_PROBE_CUTOFF = 128


def queue_min_bid(state: QueueState) -> Fraction:
    """Probe with a vanishing bid when empty, else replay the largest entry."""
    if not state.heap:
        if state.round_index > _PROBE_CUTOFF:
            return Fraction(0)
        return state.epsilon / (1 << state.round_index)
    return state.top


def queue_min_observe(state: QueueState, winning_bid: Fraction) -> QueueState:
    """Opponent won a bidding: remember their bid `multiplier` times."""
    b = winning_bid if isinstance(winning_bid, Dyadic) else Fraction(winning_bid)
    for _ in range(state.multiplier):
        heapq.heappush(state.heap, b)
    state.top = b if state.top is None else max(state.top, b)
    state.round_index += 1
    return state


def queue_min_pop(state: QueueState) -> QueueState:
    """Own bidding win: discard the smallest pending entry, if any."""
    if state.heap:
        heapq.heappop(state.heap)
        if not state.heap:
            state.top = None
    state.round_index += 1
    return state


# ----------------------------------------------------------- bidder adapters


class WalkBidder:
    """Budget-walk player; bids in currency, monitors the quotient invariant.

    Once the opponent is broke (possible only after they pay their entire
    budget to win a forced bidding), the walk freezes and the bidder
    switches to halving its own budget forever, still moving to the
    potential-increasing witness; every monitored invariant is vacuous or
    preserved from that point on.
    """

    def __init__(self, table: PotentialTable, own: Fraction, opp: Fraction):
        self.state = start_walk(table, as_fraction(own), as_fraction(opp))
        self.cleanup = False
        self._pending_n = Fraction(0)
        self._forced = False

    @property
    def walk_x(self) -> Fraction:
        return self.state.x

    def bid(self, vertex: str, own: Fraction, opp: Fraction, rnd: int) -> Fraction:
        if self.cleanup or opp == 0:
            self.cleanup = True
            return quantize_down(own / 2, _BID_BITS)
        n = self.state.table.normalized[vertex]
        self._pending_n = n
        scale = n * walk_bid_scale(self.state.x, self.state.nu)
        if scale >= 1:
            self._forced = True
            return opp
        self._forced = False
        return scaled_floor(scale, opp, _BID_BITS)

    def move(self, vertex: str) -> str:
        return self.state.table.plus_witness[vertex]

    def settle(self, vertex, destination, won, own_after, opp_after, winning_bid) -> None:
        if self.cleanup:
            return
        if won:
            self.state = update_walk(self.state, self._pending_n, True)
        elif opp_after == 0:
            self.cleanup = True
        else:
            self.state = update_walk(self.state, self._pending_n, False)
        if not self.cleanup:
            t = walk_target_quotient(self.state.x, self.state.nu)
            # own > t*opp, multiplied out so huge dyadic ledgers never
            # meet t's non-dyadic denominator
            if not own_after * t.denominator > opp_after * t.numerator:
                raise InvariantBrokenError(
                    f"walk quotient invariant failed at x={self.state.x}"
                )


class WarmupBidder:
    """Energy-game warm-up player on a weighted graph.

    Moves to the heaviest successor on winning.  At energy 1 it bids one
    level unit exactly, which strictly exceeds the opponent's whole
    budget whenever the level invariant holds, so energy 0 is never
    reached.
    """

    def __init__(self, graph: GameGraph, own: Fraction, opp: Fraction, energy: int):
        if energy < 1:
            raise PreconditionViolatedError("initial energy must be >= 1")
        self.graph = graph
        self.state = WarmupState(energy, as_fraction(own), as_fraction(opp))
        if not warmup_invariant_ok(self.state):
            raise PreconditionViolatedError("initial ratio below the warm-up requirement")

    @property
    def energy_coordinate(self) -> int:
        return self.state.k

    def bid(self, vertex: str, own: Fraction, opp: Fraction, rnd: int) -> Fraction:
        k = self.state.k
        if k == 1:
            return (own + opp) / 4
        # any bid in [one level unit, unit + slack) preserves the ledger
        # whether the round is won or lost; bid the ceil-quantized bottom:
        # a win then erodes slack by under one grid step, whereas bidding
        # inside the window burns a fixed slack fraction per win and a
        # long winning streak would squeeze the window onto the grid
        total = own + opp
        kk = (k + 1) ** 2
        b = scaled_ceil(Fraction(1, kk), total, _BID_BITS)
        if not (b * kk >= total and (own - b) * kk > (triangle(k + 1) - 1) * total):
            raise InvariantBrokenError(
                f"quantized warm-up bid left the level window at energy {k}"
            )
        return b

    def move(self, vertex: str) -> str:
        succ = self.graph.edges[vertex]
        best = max(self.graph.weight[u] for u in succ)
        return min(u for u in succ if self.graph.weight[u] == best)

    def settle(self, vertex, destination, won, own_after, opp_after, winning_bid) -> None:
        if not won and self.state.k == 1:
            raise InvariantBrokenError("lost a bidding that was forced at energy 1")
        self.state = update_warmup(self.state, won, own_after, opp_after)
        if not warmup_invariant_ok(self.state):
            raise InvariantBrokenError(
                f"ratio fell to the warm-up bound at energy {self.state.k}"
            )


class SlushFundBidder:
    """Reachability player: exact arithmetic, intended for short matches."""

    def __init__(
        self,
        graph: GameGraph,
        thresholds: ThresholdMap,
        target: str,
        own: Fraction,
        opp: Fraction,
        start: str,
    ):
        self.thresholds = thresholds
        self.state = init_slush_fund(graph, thresholds, target, own, opp, start)
        self.reached = start == target

    def bid(self, vertex: str, own: Fraction, opp: Fraction, rnd: int) -> Fraction:
        if self.reached:
            return Fraction(0)
        bid, _ = reachability_bid(self.state, self.thresholds, vertex)
        return bid

    def move(self, vertex: str) -> str:
        return self.state.move[vertex]

    def settle(self, vertex, destination, won, own_after, opp_after, winning_bid) -> None:
        if self.reached:
            return
        self.state = update_slush_fund(self.state, vertex, destination, won, opp_after)
        if destination == self.state.target:
            self.reached = True


class QueueBidder:
    """Queue adversary; optional potential table steers its moves."""

    def __init__(
        self,
        epsilon: Fraction,
        multiplier: int = 1,
        table: PotentialTable | None = None,
        graph: GameGraph | None = None,
        upward: bool = False,
    ):
        self.state = QueueState(Fraction(epsilon), multiplier)
        self.table = table
        self.graph = graph
        self.upward = upward
        self.empties = 0
        self.pops = 0

    def bid(self, vertex: str, own: Fraction, opp: Fraction, rnd: int) -> Fraction:
        if not self.state.heap:
            self.empties += 1
        return min(queue_min_bid(self.state), own)

    def move(self, vertex: str) -> str:
        if self.table is not None:
            w = self.table.plus_witness if self.upward else self.table.minus_witness
            return w[vertex]
        if self.graph is not None:
            return min(self.graph.edges[vertex])
        raise ValueError("queue bidder needs a potential table or a graph to move")

    def settle(self, vertex, destination, won, own_after, opp_after, winning_bid) -> None:
        if won:
            if self.state.heap:
                self.pops += 1
            queue_min_pop(self.state)
        else:
            queue_min_observe(self.state, winning_bid)


class _BaselineBidder:
    """Shared plumbing: capped bids, potential-minimizing default moves."""

    def __init__(
        self,
        table: PotentialTable | None = None,
        graph: GameGraph | None = None,
        upward: bool = False,
    ):
        self.table = table
        self.graph = graph
        self.upward = upward

    def move(self, vertex: str) -> str:
        if self.table is not None:
            w = self.table.plus_witness if self.upward else self.table.minus_witness
            return w[vertex]
        if self.graph is not None:
            return min(self.graph.edges[vertex])
        raise ValueError("baseline bidder needs a potential table or a graph to move")

    def settle(self, vertex, destination, won, own_after, opp_after, winning_bid) -> None:
        pass


class ConstantFractionBidder(_BaselineBidder):
    def __init__(self, p: Fraction, table=None, graph=None, upward=False):
        super().__init__(table, graph, upward)
        if not 0 <= p <= 1:
            raise ValueError("fraction must lie in [0, 1]")
        self.p = Fraction(p)

    def bid(self, vertex, own, opp, rnd) -> Fraction:
        return scaled_floor(self.p, own, _BID_BITS)


class UniformRandomBidder(_BaselineBidder):
    def __init__(self, seed: int, table=None, graph=None, upward=False):
        super().__init__(table, graph, upward)
        self.rng = random.Random(seed)

    def bid(self, vertex, own, opp, rnd) -> Fraction:
        u = Fraction(self.rng.getrandbits(53), 1 << 53)
        return quantize_down(u * own, _BID_BITS)


class AlwaysZeroBidder(_BaselineBidder):
    def bid(self, vertex, own, opp, rnd) -> Fraction:
        return Fraction(0)


def constant_fraction(p, table=None, graph=None, upward=False):
    return ConstantFractionBidder(p, table, graph, upward)


def uniform_random(seed, table=None, graph=None, upward=False):
    return UniformRandomBidder(seed, table, graph, upward)


def always_zero(table=None, graph=None, upward=False):
    return AlwaysZeroBidder(table, graph, upward)
