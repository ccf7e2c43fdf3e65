"""Repeated sequential-auction games over k slots.

The auction state is a pair (slot cursor, allocation bitstring).  Each
round auctions the cursor slot: the winner sets its bit to 1 (Max takes the
slot) or 0 (Min takes it), the cursor advances cyclically, and the stage
reward is the allocation's reward.  The induced game graph has vertices
{1..k} x {0,1}^k, so the long-run average reward of the bidding game over
this graph is the value of the repeated auction.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graphs import GameGraph


@dataclass(frozen=True)
class AuctionSpec:
    slots: int
    reward: dict[str, Fraction]

    def __post_init__(self) -> None:
        if self.slots < 1:
            raise ValueError(f"slots must be >= 1, got {self.slots}")
        missing = [bits for bits in _all_bitstrings(self.slots) if bits not in self.reward]
        if missing:
            raise ValueError(f"RewardMissing: no reward for allocations {missing}")
        bad = [bits for bits in self.reward if len(bits) != self.slots or set(bits) - {"0", "1"}]
        if bad:
            raise ValueError(f"malformed allocation keys: {bad}")


def _all_bitstrings(k: int) -> list[str]:
    return [format(i, f"0{k}b") for i in range(2**k)]


def vertex_id(slot: int, bits: str) -> str:
    return f"{slot}:{bits}"


def build_auction_game(spec: AuctionSpec) -> GameGraph:
    """Game graph of the repeated auction; weight(l, bits) = reward(bits)."""
    k = spec.slots
    vertices = []
    edges = []
    weights = {}
    for slot in range(1, k + 1):
        nxt = slot % k + 1
        for bits in _all_bitstrings(k):
            v = vertex_id(slot, bits)
            vertices.append(v)
            weights[v] = spec.reward[bits]
            taken = bits[: slot - 1] + "1" + bits[slot:]
            dropped = bits[: slot - 1] + "0" + bits[slot:]
            edges.append((v, vertex_id(nxt, taken)))
            edges.append((v, vertex_id(nxt, dropped)))
    return GameGraph.build(vertices, edges, weights)
