"""scikit-learn style wrappers around the rating solvers."""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_results
from .core import SolverConfig, logistic, solve
from .ledger import ELO_SIGMA, PeriodLedger, PublishConfig, classical_sequence, publish
from .structure import solve_by_components


class _RatingMixin:
    def predict_proba(self, pairs):
        """Expected share of the points for the first player of each pair.

        ``pairs`` is an (m, 2) integer array of player indices.
        """
        check_is_fitted(self, "rating_")
        pairs = np.asarray(pairs, dtype=int)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError(f"pairs must have shape (m, 2), got {pairs.shape}")
        x = self.rating_
        return logistic(x[pairs[:, 0]] - x[pairs[:, 1]])

    def transform(self, X=None):
        """Published ratings ``mu + sigma * rating_``."""
        check_is_fitted(self, "rating_")
        return publish(self.rating_, PublishConfig(mu=self.mu, sigma=self.sigma))


class SelfJustifyingElo(_RatingMixin, BaseEstimator):
    """Self-justifying Elo rating fitted to a result matrix.

    Parameters
    ----------
    k : float
        Dynamising parameter.
    epsilon : float or None
        L1 precision of the fitted rating; None uses a precision relative to
        ``2 * k * X.sum()``.
    c : int
        Continuity parameter of the adaptive solver.
    by_components : bool
        Solve each weakly connected component separately.
    mu, sigma : float
        Affine map to the published scale used by :meth:`transform`.

    Attributes
    ----------
    rating_ : ndarray of shape (n_players,)
    residual_ : float
        Certified L1 distance bound to the exact fixed point.
    n_iter_ : int
    """

    def __init__(self, k=1.0, epsilon=None, c=4, by_components=False, mu=1500.0, sigma=ELO_SIGMA):
        self.k = k
        self.epsilon = epsilon
        self.c = c
        self.by_components = by_components
        self.mu = mu
        self.sigma = sigma

    def fit(self, X, y=None):
        X = check_results(X, name="X")
        cfg = SolverConfig(k=self.k, epsilon=self.epsilon, c=self.c)
        outcome = (solve_by_components if self.by_components else solve)(X, cfg)
        self.rating_ = outcome.rating
        self.residual_ = outcome.residual
        self.n_iter_ = outcome.loops_used
        self.loop_bound_ = outcome.loop_bound
        self.stalled_ = outcome.stalled
        self.n_features_in_ = X.shape[0]
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform()


class ClassicalElo(_RatingMixin, BaseEstimator):
    """Sequential classical Elo over a list of per-period result matrices."""

    def __init__(self, k=1.0, mu=1500.0, sigma=ELO_SIGMA):
        self.k = k
        self.mu = mu
        self.sigma = sigma

    def fit(self, X, y=None):
        periods = [X] if np.ndim(X) == 2 else list(X)
        trace = classical_sequence(PeriodLedger(periods), SolverConfig(k=self.k))
        self.trace_ = trace
        self.rating_ = trace.ratings[-1]
        self.verdict_ = trace.verdict
        self.n_features_in_ = len(self.rating_)
        return self

    def fit_transform(self, X, y=None):
        return self.fit(X, y).transform()
