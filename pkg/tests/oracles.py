"""Independent brute-force oracles the tests check the library against.

Everything here is deliberately naive (queues, set comprehensions, dense
linear algebra, grid search) and shares no code paths with the package.
"""

import math
from collections import deque

import numpy as np


def bfs_distances(size, edges):
    """All-pairs unit-weight shortest paths by literal breadth-first search."""
    adj = [[] for _ in range(size)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    dist = np.full((size, size), -1, dtype=int)
    for src in range(size):
        dist[src, src] = 0
        q = deque([src])
        while q:
            x = q.popleft()
            for y in adj[x]:
                if dist[src, y] < 0:
                    dist[src, y] = dist[src, x] + 1
                    q.append(y)
    if (dist < 0).any():
        raise ValueError("graph is disconnected")
    return dist


def pairs_within(dist, radius):
    size = dist.shape[0]
    return {(x, y) for x in range(size) for y in range(size) if dist[x, y] <= radius}


def compose_pairs(e_pairs, f_pairs, size):
    by_first = {}
    for x, z in e_pairs:
        by_first.setdefault(x, set()).add(z)
    out = set()
    for x in range(size):
        for z in by_first.get(x, ()):
            for z2, y in f_pairs:
                if z2 == z:
                    out.add((x, y))
    return out


def greedy_net(dist, radius):
    chosen = []
    for x in range(dist.shape[0]):
        if all(dist[x, s] >= radius for s in chosen):
            chosen.append(x)
    return chosen


def dense_restricted_norm(a_dense):
    """||A - P||_2 from a dense block, by full SVD."""
    m = a_dense.shape[0]
    return float(np.linalg.svd(a_dense - np.full((m, m), 1.0 / m), compute_uv=False)[0])


def circulant_lambda(n):
    """Cycle with {identity, step, step back}: second-largest Markov eigenvalue."""
    return (2.0 + math.cos(2.0 * math.pi / n)) / 3.0


def cycle_markov_dense(n):
    rot = np.roll(np.eye(n), 1, axis=0)
    return (2.0 * np.eye(n) + (rot + rot.T) / 2.0) / 3.0


def grid_search_pnorm(m_dense, p, rng, grid_points=20000, elites=12):
    """Dense random grid plus simplex polish of the elite points.

    Evaluates raw ratios ||Mx||_p / ||x||_p only, so the result is always a
    lower estimate of the true norm; the polish shares nothing with the
    duality-map ascent it is used to check.
    """
    from scipy.optimize import minimize

    dim = m_dense.shape[1]

    def ratio(x):
        nx = np.power(np.abs(x), p).sum() ** (1.0 / p)
        if nx == 0:
            return 0.0
        y = m_dense @ (x / nx)
        return float(np.power(np.abs(y), p).sum() ** (1.0 / p))

    grid = rng.standard_normal((grid_points, dim))
    vals = np.array([ratio(x) for x in grid])
    starts = [grid[i] for i in np.argsort(vals)[::-1][:elites]]
    starts += [rng.standard_normal(dim) for _ in range(100)]
    best = float(vals.max())
    for x0 in starts:
        res = minimize(lambda x: -ratio(x), x0, method="Nelder-Mead",
                       options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 8000})
        best = max(best, -float(res.fun))
    return best


def null_space_dimension(mat, tol=1e-8):
    s = np.linalg.svd(mat, compute_uv=False)
    return int((s <= tol).sum()) + max(0, mat.shape[1] - len(s))
