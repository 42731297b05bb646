"""Compiled inner loop of the adaptive solver."""

import math

import numba
import numpy as np

CONVERGED = 0
STALLED = 1
EXHAUSTED = 2


@numba.njit(cache=True)
def elo_map_into(x, p, k, out):
    n = x.shape[0]
    for i in range(n):
        out[i] = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            contested = p[i, j] + p[j, i]
            if contested == 0.0:
                continue
            t = x[i] - x[j]
            z = math.exp(-abs(t))
            if t >= 0.0:
                expected = 1.0 / (1.0 + z)
            else:
                expected = z / (1.0 + z)
            u = p[i, j] - contested * expected
            out[i] += u
            out[j] -= u
    for i in range(n):
        out[i] *= k


@numba.njit(cache=True)
def adaptive_solve(p, k, eps, c, xi_star, max_loops, stall_limit, history):
    """Run the adaptive loop; ``history`` rows get (d, d_perm, xi, w, increased).

    Returns (rating, residual, loops, xi, status).
    """
    n = p.shape[0]
    record = history.shape[0]
    x = np.zeros(n)
    e = np.empty(n)
    x_perm = np.zeros(n)
    e_perm = np.zeros(n)
    xi = xi_star
    d_perm = np.inf
    w = 0
    stuck = 0
    loops = 0
    while loops < max_loops:
        loops += 1
        elo_map_into(x, p, k, e)
        d = 0.0
        for i in range(n):
            d += abs(x[i] - e[i])
        if d <= eps:
            return x, d, loops, xi, CONVERGED

        increased = d > xi * d_perm
        if increased:
            # xi_star is the largest damping the iteration ever needs
            xi = min(math.sqrt(xi), xi_star)
            w = c
        elif w > 0:
            w -= 1
        else:
            xi = xi * xi

        if d < d_perm:
            x_perm[:] = x
            e_perm[:] = e
            d_perm = d
            stuck = 0
        else:
            stuck += 1
            if stuck >= stall_limit:
                return x_perm, d_perm, loops, xi, STALLED

        if loops <= record:
            row = history[loops - 1]
            row[0] = d
            row[1] = d_perm
            row[2] = xi
            row[3] = w
            row[4] = 1.0 if increased else 0.0

        mean = 0.0
        for i in range(n):
            x[i] = xi * x_perm[i] + (1.0 - xi) * e_perm[i]
            mean += x[i]
        mean /= n
        for i in range(n):
            x[i] -= mean
    return x_perm, d_perm, loops, xi, EXHAUSTED
