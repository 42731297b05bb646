"""Result-graph connectivity and what it implies for the ratings.

The result graph has an edge i -> j whenever ``p[i, j] > 0``. Its weakly
connected components can be rated independently, and the ratings stay
bounded as k grows exactly when every component is strongly connected.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
import math
import warnings

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._validation import check_positive, check_results
from .core import SolverConfig, SolveOutcome, _elo_map, solve

__all__ = [
    "ConnectivityReport",
    "AsymptoticResult",
    "AsymptoticWarning",
    "analyze",
    "restrict",
    "solve_by_components",
    "asymptotic_rating",
]


class AsymptoticWarning(RuntimeWarning):
    pass


@dataclass(frozen=True)
class ConnectivityReport:
    """Weak components (sorted by smallest member) and their strong connectivity."""

    n: int
    components: tuple
    strong_flags: tuple

    @property
    def bounded(self):
        return all(self.strong_flags)

    def component_of(self, player):
        for comp in self.components:
            if player in comp:
                return comp
        raise IndexError(player)


def _result_graph(p):
    return csr_matrix((p > 0).astype(np.int8))


def analyze(p):
    """Partition players into weak components and flag the strongly connected ones.

    Isolated players form singleton components, which count as strongly
    connected.
    """
    p = check_results(p)
    graph = _result_graph(p)
    _, labels = connected_components(graph, directed=True, connection="weak")
    groups = {}
    for player, label in enumerate(labels):
        groups.setdefault(label, []).append(player)
    components = sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])
    flags = []
    for comp in components:
        if len(comp) == 1:
            flags.append(True)
            continue
        sub = graph[list(comp)][:, list(comp)]
        n_strong, _ = connected_components(sub, directed=True, connection="strong")
        flags.append(n_strong == 1)
    return ConnectivityReport(p.shape[0], tuple(components), tuple(flags))


def restrict(p, component, report=None):
    """Zero every cell of ``p`` that does not lie inside ``component``."""
    p = check_results(p)
    report = report or analyze(p)
    members = tuple(sorted(int(i) for i in component))
    if members not in report.components:
        raise ValueError(f"{members} is not a connected component of p")
    out = np.zeros_like(p)
    idx = np.ix_(members, members)
    out[idx] = p[idx]
    return out


def solve_by_components(p, cfg=None, max_workers=None):
    """Solve each weak component on its own and add the ratings up.

    Each of the m components is solved to precision epsilon / m, so the
    combined rating keeps the overall epsilon certificate. Components are
    independent and may be solved on ``max_workers`` threads; the merge
    order is fixed, so the result does not depend on scheduling.
    """
    p = check_results(p)
    cfg = cfg or SolverConfig()
    report = analyze(p)
    if len(report.components) == 1:
        return solve(p, cfg)

    eps = cfg.resolve_epsilon(p)
    part_cfg = replace(cfg, epsilon=eps / len(report.components))
    blocks = [p[np.ix_(comp, comp)] for comp in report.components]

    def run(block):
        return solve(block, part_cfg)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(block) for block in blocks]

    rating = np.zeros(p.shape[0])
    for comp, part in zip(report.components, parts):
        rating[list(comp)] = part.rating
    return SolveOutcome(
        rating=rating,
        residual=sum(part.residual for part in parts),
        loops_used=sum(part.loops_used for part in parts),
        loop_bound=sum(part.loop_bound for part in parts),
        xi_final=max(part.xi_final for part in parts),
        epsilon=eps,
        stalled=any(part.stalled for part in parts),
    )


@dataclass
class AsymptoticResult:
    """Large-k limit of the self-justifying rating.

    ``rating`` is None when the limit does not exist (``bounded`` is False).
    ``residual`` is the L1 norm of the unit-k classical Elo map at ``rating``.
    """

    bounded: bool
    rating: np.ndarray | None = None
    residual: float = math.nan
    k: float = math.nan
    converged: bool = False


def asymptotic_rating(p, tol=1e-9, k0=1.0, max_doublings=40, c=4):
    """Limit of ``solve(p, k)`` as k grows, or an unbounded verdict.

    Solves at k = k0 * 2**m for m = 0, 1, ... until two successive ratings
    differ by less than ``tol`` in L1 and the rating is a zero of the unit-k
    classical Elo map up to ``tol``. Emits :class:`AsymptoticWarning` and
    returns the last iterate when ``max_doublings`` is exhausted.
    """
    p = check_results(p)
    tol = check_positive(tol, "tol")
    k0 = check_positive(k0, "k0")
    if not analyze(p).bounded:
        return AsymptoticResult(bounded=False)

    contested = p + p.T
    total = float(p.sum())
    previous = None
    for m in range(max_doublings + 1):
        k = k0 * 2.0**m
        # rounding in k * p limits the attainable residual
        eps = max(tol / 10.0, 4.0 * np.finfo(float).eps * k * total)
        x = solve_by_components(p, SolverConfig(k=k, epsilon=eps, c=c)).rating
        res = float(np.abs(_elo_map(x, p, contested, 1.0)).sum())
        if previous is not None and np.abs(x - previous).sum() < tol and res <= tol:
            return AsymptoticResult(True, x, res, k, True)
        previous = x
    warnings.warn(
        f"asymptotic rating did not settle to tol={tol:g} by k={k:g} (residual {res:g})",
        AsymptoticWarning,
        stacklevel=2,
    )
    return AsymptoticResult(True, x, res, k, False)
