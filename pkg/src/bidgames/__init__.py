"""Bidding games on graphs: threshold solvers, values, strategies, simulation."""

from .errors import (
    BidgamesError,
    GameValidationError,
    IllegalBidError,
    InvariantBrokenError,
    NonConvergenceError,
    NotStronglyConnectedError,
    OutDegreeNotTwoError,
    PreconditionViolatedError,
    UnreachableBoundaryError,
)
from .gamefiles import dumps_game, load_auction_spec, load_game, save_game
from .graphs import GameGraph, validate
from .ratios import BudgetRatio, format_rational, parse_rational
from .stochastic import game_value, potentials, solve_stochastic_mp
from .thresholds import (
    ThresholdMap,
    critical_ratio,
    solve_generalized_reachability,
    solve_meanpayoff_thresholds,
    solve_parity,
    solve_reachability,
)

__version__ = "0.1.0"

__all__ = [
    "BidgamesError",
    "BudgetRatio",
    "GameGraph",
    "GameValidationError",
    "IllegalBidError",
    "InvariantBrokenError",
    "NonConvergenceError",
    "NotStronglyConnectedError",
    "OutDegreeNotTwoError",
    "PreconditionViolatedError",
    "ThresholdMap",
    "UnreachableBoundaryError",
    "critical_ratio",
    "dumps_game",
    "format_rational",
    "game_value",
    "load_auction_spec",
    "load_game",
    "parse_rational",
    "potentials",
    "save_game",
    "solve_generalized_reachability",
    "solve_meanpayoff_thresholds",
    "solve_parity",
    "solve_reachability",
    "solve_stochastic_mp",
    "validate",
    "__version__",
]
