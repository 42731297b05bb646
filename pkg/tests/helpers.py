"""Independent reference computations and random instance generators."""

import math

import numpy as np


def bisect_two_player(a, b, k=1.0, tol=1e-15):
    """Self-justifying rating of player 0 when p01 = a, p10 = b.

    Player 0's rating x solves x = k (a - (a + b) / (1 + exp(-2x))); the
    right side decreases in x, so plain bisection brackets the root.
    """
    def f(x):
        return x - k * (a - (a + b) / (1.0 + math.exp(-2.0 * x)))

    lo, hi = -k * (a + b) - 1.0, k * (a + b) + 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def naive_elo_map(x, p, k):
    """Direct double loop over the defining sum, without any stabilisation."""
    n = len(x)
    out = np.zeros(n)
    for i in range(n):
        for j in range(n):
            if i != j:
                out[i] += p[i][j] - (p[i][j] + p[j][i]) / (1.0 + math.exp(x[j] - x[i]))
    return k * out


def random_results(rng, n, high=10.0, density=1.0, low=0.0):
    p = rng.uniform(low, high, size=(n, n))
    if density < 1.0:
        p *= rng.random((n, n)) < density
    np.fill_diagonal(p, 0.0)
    return p


def random_rating(rng, n, scale=3.0):
    x = rng.normal(scale=scale, size=n)
    return x - x.mean()


def random_block_diagonal(rng, max_n=10, density=0.7, low=0.0):
    sizes = []
    n = 0
    while n < 2 or (n < max_n - 2 and rng.random() < 0.6):
        s = int(rng.integers(1 if sizes else 2, 5))
        sizes.append(s)
        n += s
    p = np.zeros((n, n))
    start = 0
    for s in sizes:
        p[start:start + s, start:start + s] = random_results(rng, s, density=density, low=low)
        start += s
    perm = rng.permutation(n)
    return p[np.ix_(perm, perm)]


def l1(v):
    return float(np.abs(np.asarray(v)).sum())


def empirical_growth(solve_norm, ks):
    """True when the rating norm keeps growing over a doubling k grid.

    Bounded families approach their limit like 1/k, so increments halve per
    doubling; unbounded ones grow logarithmically and increments stay put.
    """
    norms = [solve_norm(k) for k in ks]
    last, previous = norms[-1] - norms[-2], norms[-2] - norms[-3]
    return last > 1e-3 and last >= 0.75 * previous


def break_strong_connectivity(rng, p):
    """Zero the scoring row of one player in a block of size >= 2."""
    q = p.copy()
    candidates = [i for i in range(len(q)) if (q[i] + q[:, i]).sum() > 0]
    i = int(rng.choice(candidates))
    q[i, :] = 0.0
    return q
