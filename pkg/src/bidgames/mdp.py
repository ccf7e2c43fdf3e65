"""Average-reward Markov decision processes with exact rational arithmetic.

Policy evaluation solves the multichain gain/bias equations per recurrent
class (stationary distribution, anchored bias) and extends them
harmonically to transient states; improvement is the classical two-stage
rule (gain first, then bias among gain-optimal actions, keeping the
current action on ties).  Everything is deterministic: states, actions,
and tie-breaks follow canonical order, so repeated runs give identical
policies.

Also hosts the out-degree-2 reduction from bidding games: each graph
vertex v with successors u1 < u2 becomes a controlled state v plus two
nature states v:1 and v:2, where choosing v:i sends the token to u_i with
probability r and to the other successor with probability 1-r.  The
controller maximizes when r >= 1/2 and minimizes otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NonConvergenceError, OutDegreeNotTwoError
from .exactlin import solve_linear
from .graphs import GameGraph, strongly_connected_components
from .ratios import BudgetRatio

_ITERATION_CAP = 10_000


@dataclass(frozen=True)
class MdpAction:
    label: str
    dist: dict[str, Fraction]


@dataclass(frozen=True)
class MdpModel:
    states: tuple[str, ...]
    actions: dict[str, tuple[MdpAction, ...]]
    chance: dict[str, dict[str, Fraction]]
    reward: dict[str, Fraction]
    sense: str = "max"

    def check(self) -> None:
        for s in self.states:
            if (s in self.actions) == (s in self.chance):
                raise ValueError(f"state {s!r} must be exactly one of controlled/chance")
            dists = [a.dist for a in self.actions[s]] if s in self.actions else [self.chance[s]]
            for dist in dists:
                if not dist or sum(dist.values()) != 1 or any(p < 0 for p in dist.values()):
                    raise ValueError(f"state {s!r} has a malformed distribution")
        if self.sense not in ("max", "min"):
            raise ValueError(f"sense must be 'max' or 'min', got {self.sense!r}")


@dataclass(frozen=True)
class PolicyResult:
    gain: dict[str, Fraction]
    bias: dict[str, Fraction]
    policy: dict[str, str]


def evaluate_markov_chain(
    states: tuple[str, ...],
    trans: dict[str, dict[str, Fraction]],
    reward: dict[str, Fraction],
) -> tuple[dict[str, Fraction], dict[str, Fraction]]:
    """Exact multichain gain/bias of a finite Markov chain.

    The bias is anchored to 0 at the smallest state of each recurrent
    class; transient states get the unique harmonic extension.
    """
    support = {s: tuple(sorted(t for t, p in trans[s].items() if p > 0)) for s in states}
    comps = strongly_connected_components(states, support)
    bottom = [sorted(c) for c in comps if all(t in c for s in c for t in support[s])]
    recurrent = {s for c in bottom for s in c}
    gain: dict[str, Fraction] = {}
    bias: dict[str, Fraction] = {}

    for members in bottom:
        k = len(members)
        pos = {s: i for i, s in enumerate(members)}
        # Stationary distribution: replace the first balance equation by sum=1.
        a = [[Fraction(0)] * k for _ in range(k)]
        b = [Fraction(0)] * k
        for j in range(k):
            a[0][j] = Fraction(1)
        b[0] = Fraction(1)
        for j in range(1, k):
            t = members[j]
            a[j][j] -= 1
            for s in members:
                p = trans[s].get(t, Fraction(0))
                if p:
                    a[j][pos[s]] += p
        pi = solve_linear(a, b)
        g = sum(pi[pos[s]] * reward[s] for s in members)
        for s in members:
            gain[s] = g
        # Bias: (I - P) h = reward - g with h(anchor) = 0; the anchor row is
        # redundant for an irreducible class, so replace it and check after.
        a = [[Fraction(0)] * k for _ in range(k)]
        b = [Fraction(0)] * k
        a[0][0] = Fraction(1)
        for i in range(1, k):
            s = members[i]
            a[i][i] += 1
            for t, p in trans[s].items():
                if p and t in pos:
                    a[i][pos[t]] -= p
            b[i] = reward[s] - g
        h = solve_linear(a, b)
        anchor = members[0]
        residual = h[0] - sum(trans[anchor].get(t, 0) * h[pos[t]] for t in members) - (reward[anchor] - g)
        assert residual == 0, "anchored bias must satisfy the dropped balance equation"
        for s in members:
            bias[s] = h[pos[s]]

    transient = [s for s in states if s not in recurrent]
    if transient:
        k = len(transient)
        pos = {s: i for i, s in enumerate(transient)}
        a = [[Fraction(0)] * k for _ in range(k)]
        b = [Fraction(0)] * k
        for i, s in enumerate(transient):
            a[i][i] += 1
            for t, p in trans[s].items():
                if not p:
                    continue
                if t in pos:
                    a[i][pos[t]] -= p
                else:
                    b[i] += p * gain[t]
        g_t = solve_linear(a, b)
        for s in transient:
            gain[s] = g_t[pos[s]]
        for i, s in enumerate(transient):
            b[i] = reward[s] - gain[s]
            for t, p in trans[s].items():
                if p and t not in pos:
                    b[i] += p * bias[t]
        h_t = solve_linear(a, b)
        for s in transient:
            bias[s] = h_t[pos[s]]
    return gain, bias


def policy_iteration(model: MdpModel) -> PolicyResult:
    """Multichain average-reward policy iteration; exact and deterministic."""
    model.check()
    if model.sense == "min":
        flipped = MdpModel(
            model.states,
            model.actions,
            model.chance,
            {s: -r for s, r in model.reward.items()},
            "max",
        )
        res = policy_iteration(flipped)
        return PolicyResult(
            {s: -g for s, g in res.gain.items()},
            {s: -h for s, h in res.bias.items()},
            res.policy,
        )

    controlled = [s for s in model.states if s in model.actions]
    policy = {s: 0 for s in controlled}

    def expectation(dist: dict[str, Fraction], values: dict[str, Fraction]) -> Fraction:
        return sum(p * values[t] for t, p in dist.items() if p)

    for _ in range(_ITERATION_CAP):
        trans = dict(model.chance)
        for s in controlled:
            trans[s] = model.actions[s][policy[s]].dist
        gain, bias = evaluate_markov_chain(model.states, trans, model.reward)

        switched = False
        q_gain: dict[str, list[Fraction]] = {}
        for s in controlled:
            qs = [expectation(a.dist, gain) for a in model.actions[s]]
            q_gain[s] = qs
            best = max(qs)
            if qs[policy[s]] < best:
                policy[s] = qs.index(best)
                switched = True
        if not switched:
            for s in controlled:
                qs = q_gain[s]
                best = max(qs)
                candidates = [k for k, q in enumerate(qs) if q == best]
                qh = {k: expectation(model.actions[s][k].dist, bias) for k in candidates}
                besth = max(qh.values())
                if policy[s] not in qh or qh[policy[s]] < besth:
                    policy[s] = next(k for k in candidates if qh[k] == besth)
                    switched = True
        if not switched:
            labels = {s: model.actions[s][policy[s]].label for s in controlled}
            return PolicyResult(gain, bias, labels)
    raise NonConvergenceError("policy iteration hit the iteration cap")


def solve_mdp_mp(model: MdpModel) -> dict[str, Fraction]:
    """Optimal long-run average reward per state (exact rationals)."""
    return policy_iteration(model).gain


def _nature_id(v: str, which: int) -> str:
    return f"{v}:{which}"


def build_outdeg2_mdp(graph: GameGraph, ratio: BudgetRatio | Fraction) -> MdpModel:
    """Reduce an out-degree-2 game at ratio r to an MDP with equal value."""
    r = ratio.r if isinstance(ratio, BudgetRatio) else Fraction(ratio)
    if not 0 <= r <= 1:
        raise ValueError(f"ratio must lie in [0, 1], got {r}")
    for v in graph.vertices:
        if len(graph.edges[v]) != 2:
            raise OutDegreeNotTwoError(v, len(graph.edges[v]))
    states: list[str] = []
    actions: dict[str, tuple[MdpAction, ...]] = {}
    chance: dict[str, dict[str, Fraction]] = {}
    reward: dict[str, Fraction] = {}
    for v in graph.vertices:
        u1, u2 = graph.edges[v]
        n1, n2 = _nature_id(v, 1), _nature_id(v, 2)
        states += [v, n1, n2]
        actions[v] = (
            MdpAction("1", {n1: Fraction(1)}),
            MdpAction("2", {n2: Fraction(1)}),
        )
        chance[n1] = {u1: r, u2: 1 - r}
        chance[n2] = {u1: 1 - r, u2: r}
        reward[v] = reward[n1] = reward[n2] = graph.weight[v]
    sense = "max" if r >= Fraction(1, 2) else "min"
    model = MdpModel(tuple(states), actions, chance, reward, sense)
    model.check()
    return model
