"""Brute-force reference implementations, independent of the package code paths."""

from itertools import combinations

import numpy as np


def comparisons_bruteforce(m, profile):
    M = np.zeros((m, m))
    for ranking, w in profile:
        for a in range(m):
            for b in range(a + 1, m):
                M[ranking[a] - 1, ranking[b] - 1] += w
    return M


def coalition_bruteforce(m, profile, coalition):
    coalition = set(coalition)
    s_over = {}
    for j in range(1, m + 1):
        if j in coalition:
            continue
        total = 0.0
        for ranking, w in profile:
            if all(ranking.index(i) < ranking.index(j) for i in coalition):
                total += w
        s_over[j] = total
    plu = sum(w for ranking, w in profile if set(ranking[: len(coalition)]) == coalition)
    return s_over, plu


def biased_bruteforce(m, profile, x):
    """Distances from the pairwise definition: max/min over all ranked pairs."""
    d = np.zeros((m, len(profile)))
    for t, (ranking, _) in enumerate(profile):
        rank = {c: k for k, c in enumerate(ranking)}
        y = 0.5 * max(
            x[i - 1] - x[j - 1]
            for i in range(1, m + 1)
            for j in range(1, m + 1)
            if rank[i] <= rank[j]
        )
        for i in range(1, m + 1):
            d[i - 1, t] = y + min(x[j - 1] for j in range(1, m + 1) if rank[i] <= rank[j])
    return d


def three_hop_ok(d, tol=1e-9):
    """Check d(j,v) <= d(j,u) + d(i,u) + d(i,v) for all i, j, u, v."""
    m, T = d.shape
    for i in range(m):
        for j in range(m):
            for u in range(T):
                for v in range(T):
                    if d[j, v] > d[j, u] + d[i, u] + d[i, v] + tol:
                        return False
    return True


def lp_vertex_oracle(A, b, c, tol=1e-9):
    """Status and optimum of max c.x, Ax <= b, x >= 0 by enumerating vertices.

    Feasible set is pointed (x >= 0), so it is nonempty iff it has a vertex.
    Unboundedness is decided by the vertices of the normalized recession cone
    {d >= 0, A d <= 0, sum d = 1}.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    r, n = A.shape
    H = np.vstack([A, -np.eye(n)])
    h = np.concatenate([b, np.zeros(n)])

    best = None
    for idx in combinations(range(r + n), n):
        sub = H[list(idx)]
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        x = np.linalg.solve(sub, h[list(idx)])
        if np.all(H @ x <= h + 1e-8):
            val = c @ x
            if best is None or val > best:
                best = val
    if best is None:
        return "Infeasible", None

    # recession cone vertices: n-1 active cone constraints plus sum d = 1
    Hc = np.vstack([A, -np.eye(n)])
    for idx in combinations(range(r + n), n - 1):
        sub = np.vstack([Hc[list(idx)], np.ones((1, n))]) if n > 1 else np.ones((1, 1))
        if abs(np.linalg.det(sub)) < 1e-10:
            continue
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        d = np.linalg.solve(sub, rhs)
        if np.all(Hc @ d <= 1e-9) and c @ d > 1e-9:
            return "Unbounded", None
    if n == 1 and r == 0 and c[0] > 0:
        return "Unbounded", None
    return "Optimal", float(best)


def random_lp(rng, n=None, r=None):
    n = n or int(rng.integers(1, 5))
    r = r if r is not None else int(rng.integers(0, 9))
    A = rng.integers(-3, 4, size=(r, n)).astype(float)
    b = rng.integers(-2, 6, size=r).astype(float)
    c = rng.integers(-2, 4, size=n).astype(float)
    return A, b, c
