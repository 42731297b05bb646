"""Self-justifying Elo ratings."""

from .core import (
    SolveOutcome,
    SolverConfig,
    SolverError,
    classical_elo_map,
    contraction_bound,
    loop_bound,
    oracle_solve,
    phi_step,
    residual,
    small_k_slope,
    solve,
)

from .estimators import ClassicalElo, SelfJustifyingElo
from .ledger import (
    PeriodLedger,
    PlayerRegistry,
    PublishConfig,
    accumulate,
    classical_sequence,
    publish,
    rate_period,
)
from .structure import analyze, asymptotic_rating, solve_by_components

__version__ = "0.1.0"
