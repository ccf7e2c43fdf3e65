"""Exception types shared across the package."""

from __future__ import annotations


class BidgamesError(Exception):
    """Base class for all package-specific errors."""


class GameValidationError(BidgamesError):
    """A game graph violates structural invariants.

    `violations` lists every problem found as (code, subject, message)
    triples; codes are "DanglingEdge", "SinkVertex", "MissingParity".
    """

    def __init__(self, violations: list[tuple[str, str, str]]):
        self.violations = violations
        lines = "; ".join(f"{code}({subject}): {msg}" for code, subject, msg in violations)
        super().__init__(f"invalid game: {lines}")


class NotStronglyConnectedError(BidgamesError):
    """An operation that requires a strongly connected game got one that is not."""


class NonConvergenceError(BidgamesError):
    """An iterative solver hit its iteration cap; this signals a solver bug."""


class UnreachableBoundaryError(BidgamesError):
    """An interior vertex cannot reach any boundary vertex."""

    def __init__(self, vertex: str):
        self.vertex = vertex
        super().__init__(
            f"vertex {vertex!r} cannot reach the boundary; "
            "pre-assign it threshold 1 before solving"
        )


class OutDegreeNotTwoError(BidgamesError):
    """The out-degree-2 reduction requires exactly two successors everywhere."""

    def __init__(self, vertex: str, degree: int):
        self.vertex = vertex
        self.degree = degree
        super().__init__(f"vertex {vertex!r} has out-degree {degree}, expected 2")


class IllegalBidError(BidgamesError):
    """A strategy bid outside [0, budget]; carries the partial trace."""

    def __init__(self, player: str, round_index: int, trace=None):
        self.player = player
        self.round_index = round_index
        self.trace = trace
        super().__init__(f"illegal bid by {player} in round {round_index}")


class PreconditionViolatedError(BidgamesError):
    """A budget-walk update was applied in a state where the bid should have won."""


class InvariantBrokenError(BidgamesError):
    """A strategy's internal ledger invariant failed; signals a bug upstream."""
