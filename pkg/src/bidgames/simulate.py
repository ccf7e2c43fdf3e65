"""Sealed-bid match simulator with exact bookkeeping.

Player 1 maximizes the long-run average of visited vertex weights,
player 2 minimizes it.  Each round both players submit a bid, the higher
bid wins (ties resolved by the configured rule), the winner pays per the
payment rule and moves the token along an edge of their choice.  All
accounting is exact: budgets and bids are Fractions, riding the gcd-free
Dyadic representation whenever their values are dyadic (which every
quantizing strategy preserves).  Every round's ledger is checked before
it is recorded, so a simulation that completes is also a certificate
that the accounting identities held throughout.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import IllegalBidError, InvariantBrokenError
from .graphs import GameGraph, validate
from .ratios import Dyadic, format_rational, to_dyadic
from .stochastic import PotentialTable


class PaymentRule(Enum):
    POORMAN = "poorman"
    RICHMAN = "richman"
    SECOND_PRICE = "second-price"


class TieBreak(Enum):
    MIN_WINS = "min-wins"
    MAX_WINS = "max-wins"
    ALTERNATE = "alternate"


@dataclass(frozen=True)
class MatchConfig:
    game: GameGraph
    start: str
    budget1: Fraction
    budget2: Fraction
    rounds: int
    rule: PaymentRule = PaymentRule.POORMAN
    tie: TieBreak = TieBreak.MIN_WINS
    seed: int = 0
    initial_energy: Fraction = Fraction(0)

    def __post_init__(self):
        validate(self.game)
        if self.start not in self.game.vertices:
            raise ValueError(f"start vertex {self.start!r} is not in the game")
        if self.budget1 < 0 or self.budget2 < 0 or self.budget1 + self.budget2 == 0:
            raise ValueError("budgets must be nonnegative with a positive total")
        if self.rounds < 0:
            raise ValueError("round count must be nonnegative")


@dataclass(frozen=True)
class RoundRecord:
    """One bidding round: `vertex` is where the bidding took place."""

    index: int
    vertex: str
    bid1: Fraction | Dyadic
    bid2: Fraction | Dyadic
    winner: int
    budget1: Fraction | Dyadic
    budget2: Fraction | Dyadic
    energy: Fraction
    walk_x: Fraction | None


@dataclass(frozen=True)
class PlayTrace:
    config: MatchConfig
    records: tuple[RoundRecord, ...]
    final_vertex: str

    def path(self) -> list[str]:
        return [r.vertex for r in self.records] + [self.final_vertex]

    def energies(self) -> list[Fraction]:
        return [r.energy for r in self.records]

    def wins(self, player: int) -> int:
        return sum(1 for r in self.records if r.winner == player)


def _tie_winner(tie: TieBreak, index: int) -> int:
    if tie is TieBreak.MIN_WINS:
        return 2
    if tie is TieBreak.MAX_WINS:
        return 1
    return 2 if index % 2 == 1 else 1


def _money(x) -> Fraction | Dyadic:
    """Budget amounts ride the gcd-free dyadic representation when exact."""
    d = to_dyadic(x)
    return Fraction(x) if d is None else d


def run_match(
    config: MatchConfig, player1, player2, *, observer=None, keep_records: bool = True
) -> PlayTrace:
    """Play `config.rounds` rounds; raise IllegalBidError mid-match.

    An IllegalBidError carries the partial trace accumulated so far.
    `observer`, if given, is called with every RoundRecord as it is
    settled; with keep_records=False the returned trace keeps none of
    them, which matters for long matches whose exact budgets grow by a
    few bits every round.
    """
    g = config.game
    v = config.start
    b1, b2 = _money(config.budget1), _money(config.budget2)
    energy = Fraction(config.initial_energy)
    records: list[RoundRecord] = []

    def partial() -> PlayTrace:
        return PlayTrace(config, tuple(records), v)

    for i in range(1, config.rounds + 1):
        bid1 = player1.bid(v, b1, b2, i)
        bid2 = player2.bid(v, b2, b1, i)
        if not isinstance(bid1, (int, Fraction, Dyadic)):
            bid1 = Fraction(bid1)
        if not isinstance(bid2, (int, Fraction, Dyadic)):
            bid2 = Fraction(bid2)
        if not 0 <= bid1 <= b1:
            raise IllegalBidError(1, i, partial())
        if not 0 <= bid2 <= b2:
            raise IllegalBidError(2, i, partial())
        if bid1 > bid2:
            winner = 1
        elif bid2 > bid1:
            winner = 2
        else:
            winner = _tie_winner(config.tie, i)

        total_before = b1 + b2
        if config.rule is PaymentRule.POORMAN:
            paid = bid1 if winner == 1 else bid2
            if winner == 1:
                b1 -= paid
            else:
                b2 -= paid
        elif config.rule is PaymentRule.RICHMAN:
            paid = bid1 if winner == 1 else bid2
            if winner == 1:
                b1, b2 = b1 - paid, b2 + paid
            else:
                b1, b2 = b1 + paid, b2 - paid
        else:
            paid = bid2 if winner == 1 else bid1
            if winner == 1:
                b1 -= paid
            else:
                b2 -= paid
        if b1 < 0 or b2 < 0:
            raise InvariantBrokenError("a budget went negative after payment")
        if config.rule is PaymentRule.RICHMAN:
            if b1 + b2 != total_before:
                raise InvariantBrokenError("richman payments must conserve the total")
        else:
            if b1 + b2 != total_before - paid:
                raise InvariantBrokenError("bank payments must leave the total short by the price")
        if config.rule is PaymentRule.SECOND_PRICE:
            if paid > (bid1 if winner == 1 else bid2):
                raise InvariantBrokenError("second-price winner paid above their own bid")

        mover = player1 if winner == 1 else player2
        dest = mover.move(v)
        if dest not in g.edges[v]:
            raise InvariantBrokenError(f"player {winner} moved along a missing edge {v!r}->{dest!r}")
        energy += g.weight[dest]

        winning_bid = bid1 if winner == 1 else bid2
        player1.settle(v, dest, winner == 1, b1, b2, winning_bid)
        player2.settle(v, dest, winner == 2, b2, b1, winning_bid)
        rec = RoundRecord(
            index=i, vertex=v, bid1=bid1, bid2=bid2, winner=winner,
            budget1=b1, budget2=b2, energy=energy,
            walk_x=getattr(player1, "walk_x", None),
        )
        if observer is not None:
            observer(rec)
        if keep_records:
            records.append(rec)
        v = dest
    return PlayTrace(config, tuple(records), v)


def check_path_inequality(
    trace: PlayTrace, table: PotentialTable, nu: Fraction | None = None
) -> Fraction:
    """Smallest prefix slack of the potential/strength path bound.

    A step counts as won exactly when it lands on the departed vertex's
    potential-increasing witness.  Weights enter by departed vertex and
    are centered by the game value, so the bound applies to any play of
    the game the table was computed for.  Returns the minimum slack over
    all prefixes (0 for an empty trace); a sound table never yields a
    negative slack.
    """
    if nu is None:
        nu = table.ratio.nu
    path = trace.path()
    pot = table.pot
    slack_min: Fraction | None = None
    rhs = Fraction(0)
    for i in range(1, len(path)):
        prev, here = path[i - 1], path[i]
        rhs += trace.config.game.weight[prev] - table.value
        if here == table.plus_witness[prev]:
            rhs -= table.strength[prev]
        else:
            rhs += nu * table.strength[prev]
        slack = rhs - (pot[path[0]] - pot[here])
        slack_min = slack if slack_min is None else min(slack_min, slack)
    return slack_min if slack_min is not None else Fraction(0)


def estimate_meanpayoff(trace: PlayTrace) -> Fraction:
    """Minimum average accumulated weight over the tail half of the play."""
    records = trace.records
    if not records:
        raise ValueError("cannot estimate a mean payoff from an empty trace")
    base = Fraction(trace.config.initial_energy)
    start = (len(records) + 1) // 2
    best: Fraction | None = None
    for n in range(start, len(records) + 1):
        avg = (records[n - 1].energy - base) / n
        best = avg if best is None else min(best, avg)
    return best


CSV_COLUMNS = ("round", "vertex", "bid1", "bid2", "winner", "budget1", "budget2", "energy", "walk_x")


def trace_csv_text(trace: PlayTrace) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in trace.records:
        writer.writerow(
            [
                r.index, r.vertex,
                format_rational(r.bid1), format_rational(r.bid2), r.winner,
                format_rational(r.budget1), format_rational(r.budget2),
                format_rational(r.energy),
                "" if r.walk_x is None else format_rational(r.walk_x),
            ]
        )
    return out.getvalue()


def write_trace_csv(trace: PlayTrace, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(trace_csv_text(trace))
