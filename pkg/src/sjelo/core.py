"""Classical Elo map and the fixed-point solver for self-justifying ratings.

Ratings live on the internal scale: a length-n float vector summing to zero.
Results are an n x n non-negative matrix ``p`` with zero diagonal, where
``p[i, j]`` is the number of points player i scored against player j.
"""

from dataclasses import dataclass, field, replace
import math

import numpy as np

from . import _kernel
from ._validation import check_positive, check_rating, check_results

__all__ = [
    "SolverConfig",
    "SolverState",
    "SolveOutcome",
    "SolverError",
    "logistic",
    "classical_elo_map",
    "residual",
    "contraction_bound",
    "phi_step",
    "loop_bound",
    "oracle_solve",
    "solve",
    "small_k_slope",
]

DEFAULT_C = 4
DEFAULT_RELATIVE_EPSILON = 1e-9


class SolverError(RuntimeError):
    """Raised when a solver exceeds its hard loop cap."""


@dataclass(frozen=True)
class SolverConfig:
    """Parameters of a solve.

    ``epsilon=None`` means 1e-9 * max(1, 2*k*sum(p)), resolved per matrix.
    ``max_loops=None`` means ten times the a-priori loop bound.
    """

    k: float = 1.0
    epsilon: float | None = None
    c: int = DEFAULT_C
    max_loops: int | None = None

    def __post_init__(self):
        check_positive(self.k, "k")
        if self.epsilon is not None:
            check_positive(self.epsilon, "epsilon")
        if int(self.c) != self.c or self.c < 0:
            raise ValueError(f"c must be a non-negative integer, got {self.c!r}")
        if self.max_loops is not None and self.max_loops < 1:
            raise ValueError(f"max_loops must be >= 1, got {self.max_loops!r}")

    def resolve_epsilon(self, p):
        if self.epsilon is not None:
            return float(self.epsilon)
        total = float(np.sum(p))
        return DEFAULT_RELATIVE_EPSILON * max(1.0, 2.0 * self.k * total)

    def resolved(self, p):
        """Copy with epsilon and max_loops filled in for the matrix ``p``."""
        cfg = replace(self, epsilon=self.resolve_epsilon(p))
        if cfg.max_loops is None:
            cfg = replace(cfg, max_loops=10 * loop_bound(p, cfg))
        return cfg


@dataclass
class SolverState:
    """Scalars of the adaptive solver at the end of one loop."""

    loop: int
    d: float
    d_perm: float
    xi: float
    w: int
    increased: bool


@dataclass
class SolveOutcome:
    rating: np.ndarray
    residual: float
    loops_used: int
    loop_bound: int
    xi_final: float
    epsilon: float
    stalled: bool = False
    history: list = field(default_factory=list, repr=False)


def logistic(t):
    """Evaluate 1 / (1 + exp(-t)) without overflow for any finite ``t``."""
    t = np.asarray(t, dtype=float)
    z = np.exp(-np.abs(t))
    return np.where(t >= 0, 1.0 / (1.0 + z), z / (1.0 + z))


def _elo_map(x, p, contested, k):
    # u[i, j] for i < j only; antisymmetry gives the lower triangle, so the
    # image sums to zero up to summation round-off.
    expected = logistic(x[:, None] - x[None, :])
    u = np.triu(p - contested * expected, 1)
    return k * (u.sum(axis=1) - u.sum(axis=0))


def classical_elo_map(x, p, k):
    """One classical Elo adjustment of the rating ``x`` under results ``p``.

    Returns ``k * sum_j (p_ij - (p_ij + p_ji) / (1 + exp(x_j - x_i)))`` for
    every player i. The result sums to zero and its L1 norm is at most
    ``2 * k * sum(p)``.
    """
    p = check_results(p)
    x = check_rating(x, p.shape[0])
    k = check_positive(k, "k")
    return _elo_map(x, p, p + p.T, k)


def residual(x, p, k):
    """L1 distance between ``x`` and its classical Elo image.

    This bounds the distance from ``x`` to the self-justifying rating.
    """
    x = check_rating(x)
    return float(np.abs(x - classical_elo_map(x, p, k)).sum())


def _bound(p, k):
    n = p.shape[0]
    g = k * (n - 1) / 4.0 * float(np.max(p + p.T)) if n > 1 else 0.0
    return g, g / (g + 1.0)


def contraction_bound(p, k):
    """Return ``(G, G / (G + 1))`` with ``G = k (n-1)/4 max(p_ij + p_ji)``.

    Damping with any xi in ``[G/(G+1), 1)`` makes :func:`phi_step` an
    L1 contraction with factor xi.
    """
    p = check_results(p)
    k = check_positive(k, "k")
    return _bound(p, k)


def phi_step(x, p, k, xi):
    """Damped Elo step ``xi * x + (1 - xi) * classical_elo_map(x, p, k)``."""
    if not 0.0 <= xi < 1.0:
        raise ValueError(f"xi must lie in [0, 1), got {xi!r}")
    x = check_rating(x)
    return xi * x + (1.0 - xi) * classical_elo_map(x, p, k)


def _loop_bound(p, k, epsilon, c):
    start = 2.0 * k * float(np.sum(p))
    if start <= epsilon:
        return 1
    g, _ = _bound(p, k)
    base = math.ceil((g + 1.0) * math.log(start / epsilon))
    # ceil(base * (c+2)/(c+1)) in integer arithmetic
    return -(-base * (c + 2) // (c + 1)) + 1


def loop_bound(p, cfg):
    """A-priori upper bound on the loops :func:`solve` needs."""
    p = check_results(p)
    return _loop_bound(p, cfg.k, cfg.resolve_epsilon(p), int(cfg.c))


def _l1(v):
    return float(np.abs(v).sum())


def oracle_solve(p, cfg):
    """Plain iteration of the damped map at the fixed safe damping G/(G+1).

    Slow but simple; kept as an independent reference for :func:`solve`.
    """
    p = check_results(p)
    cfg = cfg.resolved(p)
    contested = p + p.T
    _, xi = _bound(p, cfg.k)
    x = np.zeros(p.shape[0])
    loops = 0
    while loops < cfg.max_loops:
        loops += 1
        e = _elo_map(x, p, contested, cfg.k)
        d = _l1(x - e)
        if d <= cfg.epsilon:
            return SolveOutcome(
                rating=x,
                residual=d,
                loops_used=loops,
                loop_bound=_loop_bound(p, cfg.k, cfg.epsilon, int(cfg.c)),
                xi_final=xi,
                epsilon=cfg.epsilon,
            )
        x = xi * x + (1.0 - xi) * e
    raise SolverError(f"oracle did not reach epsilon={cfg.epsilon:g} in {cfg.max_loops} loops")


def solve(p, cfg=None, record=False):
    """Compute the self-justifying rating for results ``p``.

    Adaptive damped fixed-point iteration. Starts from the zero rating with
    damping G/(G+1), tries squaring the damping after successful loops and
    takes its square root (then holds it for ``cfg.c`` loops) whenever the
    residual fails to shrink by the expected factor. Returns once the
    residual is at most epsilon, which certifies the L1 distance to the
    exact fixed point.

    With ``record=True`` the outcome carries one :class:`SolverState` per
    loop that did not return.
    """
    p = check_results(p)
    cfg = (cfg or SolverConfig()).resolved(p)
    bound = _loop_bound(p, cfg.k, cfg.epsilon, int(cfg.c))
    g, xi_star = _bound(p, cfg.k)
    # exact arithmetic allows at most ~11 + log2(G + 1) loops in a row without
    # progress (xi climbing back to xi_star); more means round-off stall
    stall_limit = 64 + math.ceil(math.log2(1.0 + g))
    history = np.zeros((cfg.max_loops if record else 0, 5))
    x, d, loops, xi, status = _kernel.adaptive_solve(
        p, cfg.k, cfg.epsilon, int(cfg.c), xi_star, cfg.max_loops, stall_limit, history
    )
    if status == _kernel.EXHAUSTED:
        raise SolverError(
            f"solver exceeded max_loops={cfg.max_loops} "
            f"(best residual {d:g}, epsilon {cfg.epsilon:g})"
        )
    outcome = SolveOutcome(
        rating=x,
        residual=float(d),
        loops_used=int(loops),
        loop_bound=bound,
        xi_final=float(xi),
        epsilon=cfg.epsilon,
        stalled=status == _kernel.STALLED,
    )
    if record:
        outcome.history = [
            SolverState(i + 1, float(row[0]), float(row[1]), float(row[2]), int(row[3]), bool(row[4]))
            for i, row in enumerate(history[: loops - 1])
        ]
    return outcome


def small_k_slope(p):
    """Limit of ``solve(p, k) / k`` as k goes to zero: ``sum_j (p_ij - p_ji) / 2``."""
    p = check_results(p)
    return (p - p.T).sum(axis=1) / 2.0
