"""Properties of the self-justifying rating as a function of results and k."""

import numpy as np
from hypothesis import given, settings, strategies as st

from sjelo.core import SolverConfig, oracle_solve, solve

from helpers import l1, random_results

seeds = st.integers(0, 2**32 - 1)
EPS = 1e-8


def instance(seed, max_n=8):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, max_n + 1))
    return rng, random_results(rng, n, density=rng.uniform(0.3, 1.0)), float(rng.uniform(0.05, 2.0))


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_certificate_and_oracle_agreement(seed):
    _, p, k = instance(seed)
    cfg = SolverConfig(k=k, epsilon=EPS)
    a, b = solve(p, cfg), oracle_solve(p, cfg)
    assert a.residual <= EPS
    assert a.loops_used <= a.loop_bound
    assert l1(a.rating - b.rating) <= 2 * EPS
    assert abs(a.rating.sum()) <= p.shape[0] * 1e-12


@settings(max_examples=40, deadline=None)
@given(seeds, st.floats(0.05, 20.0))
def test_scale_identity(seed, scale):
    _, p, k = instance(seed)
    a = solve(scale * p, SolverConfig(k=k, epsilon=EPS)).rating
    b = solve(p, SolverConfig(k=k * scale, epsilon=EPS)).rating
    assert l1(a - b) <= 2 * EPS


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_lipschitz_in_results(seed):
    rng, p, k = instance(seed)
    q = np.clip(p + rng.normal(scale=1.0, size=p.shape), 0, None)
    np.fill_diagonal(q, 0)
    a = solve(p, SolverConfig(k=k, epsilon=EPS)).rating
    b = solve(q, SolverConfig(k=k, epsilon=EPS)).rating
    assert l1(a - b) <= 2 * k * l1(p - q) + 2 * EPS


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_more_points_raise_the_winner(seed):
    rng, p, k = instance(seed)
    n = p.shape[0]
    i, j = rng.choice(n, size=2, replace=False)
    q = p.copy()
    q[i, j] += max(10 * EPS / k, rng.uniform(0.01, 3.0))
    a = solve(p, SolverConfig(k=k, epsilon=EPS)).rating
    b = solve(q, SolverConfig(k=k, epsilon=EPS)).rating
    assert b[i] > a[i]
    assert b[j] < a[j]


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_permutation_equivariance(seed):
    rng, p, k = instance(seed)
    perm = rng.permutation(p.shape[0])
    a = solve(p[np.ix_(perm, perm)], SolverConfig(k=k, epsilon=EPS)).rating
    b = solve(p, SolverConfig(k=k, epsilon=EPS)).rating[perm]
    assert l1(a - b) <= 2 * EPS


@settings(max_examples=40, deadline=None)
@given(seeds)
def test_transpose_flips_sign(seed):
    _, p, k = instance(seed)
    a = solve(p.T, SolverConfig(k=k, epsilon=EPS)).rating
    b = solve(p, SolverConfig(k=k, epsilon=EPS)).rating
    assert l1(a + b) <= 2 * EPS


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(0, 8))
def test_loop_accounting_across_c(seed, c):
    _, p, k = instance(seed, max_n=12)
    out = solve(p, SolverConfig(k=k, c=c))
    assert out.loops_used <= out.loop_bound
    assert not out.stalled
