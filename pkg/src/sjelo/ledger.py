"""Players, per-period results, and the rating systems run over them."""

from dataclasses import dataclass, field
import math

import numpy as np

from ._validation import check_positive, check_rating, check_results, sum_tolerance
from .core import SolverConfig, _elo_map, solve
from .structure import asymptotic_rating

__all__ = [
    "PlayerRegistry",
    "PeriodLedger",
    "PublishConfig",
    "Verdict",
    "ClassicalTrace",
    "accumulate",
    "rate_period",
    "classical_sequence",
    "classify_trajectory",
    "check_classical_convergence",
    "publish",
    "gate_players",
    "ELO_SIGMA",
]

ELO_SIGMA = 400.0 / math.log(10.0)

# iterates inspected by the convergence verdict
VERDICT_WINDOW = 20


class PlayerRegistry:
    """Player identifiers with dense indices in first-seen order."""

    def __init__(self, ids=()):
        self._ids = []
        self._index = {}
        for pid in ids:
            self.add(pid)

    def add(self, pid):
        pid = str(pid)
        if pid not in self._index:
            self._index[pid] = len(self._ids)
            self._ids.append(pid)
        return self._index[pid]

    def index(self, pid):
        return self._index[pid]

    @property
    def ids(self):
        return tuple(self._ids)

    def __len__(self):
        return len(self._ids)

    def __iter__(self):
        return iter(self._ids)

    def __contains__(self, pid):
        return pid in self._index

    def __eq__(self, other):
        return isinstance(other, PlayerRegistry) and self._ids == other._ids

    def __repr__(self):
        return f"PlayerRegistry({self._ids!r})"


@dataclass
class PeriodLedger:
    """Result matrices of consecutive periods, all of the same size.

    ``decay=None`` weights every period equally; a float ``0 < decay < 1``
    multiplies older periods by ``decay`` per elapsed period.
    """

    periods: list
    decay: float | None = None
    n: int = field(init=False)

    def __post_init__(self):
        self.periods = [check_results(p, name=f"period {i}") for i, p in enumerate(self.periods)]
        sizes = {p.shape[0] for p in self.periods}
        if len(sizes) > 1:
            raise ValueError(f"periods disagree on player count: {sorted(sizes)}")
        self.n = sizes.pop() if sizes else 0
        if self.decay is not None and not 0.0 < self.decay < 1.0:
            raise ValueError(f"decay must lie in (0, 1), got {self.decay!r}")

    def __len__(self):
        return len(self.periods)


@dataclass(frozen=True)
class PublishConfig:
    mu: float = 1500.0
    sigma: float = ELO_SIGMA
    min_games: float = 0.0

    def __post_init__(self):
        check_positive(self.sigma, "sigma")
        if not self.min_games >= 0:
            raise ValueError(f"min_games must be non-negative, got {self.min_games!r}")


@dataclass
class Verdict:
    """Long-run behaviour of a classical rating trajectory.

    ``kind`` is "converged", "oscillating" or "undetermined". For
    "converged" ``attractors`` holds the limit; for "oscillating" it holds
    one representative per cluster, in the order they are visited.
    """

    kind: str
    period: int | None = None
    attractors: tuple = ()

    @property
    def limit(self):
        return self.attractors[0] if self.kind == "converged" else None


@dataclass
class ClassicalTrace:
    ratings: list
    verdict: Verdict


def _check_index(ledger, l):
    if not 0 <= l < len(ledger):
        raise IndexError(f"period index {l} out of range for {len(ledger)} periods")


def accumulate(ledger, l):
    """Weighted sum of the results of periods 0..l."""
    _check_index(ledger, l)
    if ledger.decay is None:
        return np.sum(ledger.periods[: l + 1], axis=0)
    q = np.zeros_like(ledger.periods[0])
    for p in ledger.periods[: l + 1]:
        q = ledger.decay * q + p
    return q


def rate_period(ledger, l, cfg=None):
    """Self-justifying rating at the end of period ``l``."""
    return solve(accumulate(ledger, l), cfg)


def _spread(points):
    return max(
        (float(np.abs(a - b).sum()) for i, a in enumerate(points) for b in points[i + 1 :]),
        default=0.0,
    )


def classify_trajectory(ratings, eps):
    """Verdict from the last iterates of a rating trajectory.

    Converged when the last iterates all lie within ``eps`` of each other;
    oscillating with period 2 when the even and odd iterates each do but the
    two clusters are at least ``10 * eps`` apart.
    """
    window = [np.asarray(r) for r in ratings[-VERDICT_WINDOW:]]
    if len(window) >= 2 and _spread(window) < eps:
        return Verdict("converged", None, (window[-1],))
    if len(window) >= 4:
        before_last, last = window[-2::-2], window[-1::-2]
        if (
            _spread(before_last) < eps
            and _spread(last) < eps
            and float(np.abs(before_last[0] - last[0]).sum()) >= 10 * eps
        ):
            return Verdict("oscillating", 2, (before_last[0], last[0]))
    return Verdict("undetermined")


def _trace_epsilon(ledger, cfg):
    if cfg.epsilon is not None:
        return cfg.epsilon
    largest = max(float(p.sum()) for p in ledger.periods)
    return cfg.resolve_epsilon(np.array([[largest]]))


def classical_sequence(ledger, cfg=None):
    """Classical Elo: ``x[l+1] = x[l] + classical_elo_map(x[l], p[l], k)`` from zero."""
    if len(ledger) == 0:
        raise ValueError("classical_sequence needs at least one period")
    cfg = cfg or SolverConfig()
    x = np.zeros(ledger.n)
    ratings = [x]
    for p in ledger.periods:
        x = x + _elo_map(x, p, p + p.T, cfg.k)
        ratings.append(x)
    return ClassicalTrace(ratings, classify_trajectory(ratings, _trace_epsilon(ledger, cfg)))


def check_classical_convergence(trace, p, cfg=None, tol=1e-6):
    """Whether a converged classical trace ends at the large-k self-justifying limit.

    ``trace`` must come from repeating the single result matrix ``p``.
    Returns False when the trace did not converge or the limit does not
    exist.
    """
    p = check_results(p)
    cfg = cfg or SolverConfig()
    contested = p + p.T
    for before, after in zip(trace.ratings, trace.ratings[1:]):
        step = _elo_map(before, p, contested, cfg.k)
        if np.abs(before + step - after).sum() > sum_tolerance(p.shape[0]) * (1 + np.abs(after).sum()):
            raise ValueError("trace was not produced by repeating p")
    if trace.verdict.kind != "converged":
        return False
    limit = asymptotic_rating(p, tol=tol / 10)
    if not limit.bounded:
        return False
    return float(np.abs(trace.verdict.limit - limit.rating).sum()) <= tol


def publish(x, pub=None):
    """Map internal ratings to the published scale ``mu + sigma * x``."""
    pub = pub or PublishConfig()
    x = check_rating(x)
    return pub.mu + pub.sigma * x


def gate_players(ledger, l, pub=None):
    """Split players by the points they contested up to period ``l``.

    A player is included when the points of all games involving them reach
    ``pub.min_games``. Returns ``(included, excluded, reduced)`` where the
    reduced matrix has the rows and columns of excluded players zeroed.
    """
    pub = pub or PublishConfig()
    q = accumulate(ledger, l)
    contested = q.sum(axis=1) + q.sum(axis=0)
    mask = contested >= pub.min_games
    included = [int(i) for i in np.flatnonzero(mask)]
    excluded = [int(i) for i in np.flatnonzero(~mask)]
    reduced = q * np.outer(mask, mask)
    return included, excluded, reduced
