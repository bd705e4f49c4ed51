"""Pure-Python/numpy versions of the hot kernels.

Used when the compiled ``_kernels`` extension is unavailable, and as the
reference the extension is benchmarked and tested against. Both modules
implement the same pivot and tie-breaking rules, so they return identical
results on identical inputs.
"""

import numpy as np

OPTIMAL = 0
UNBOUNDED = 1
ITERATION_LIMIT = 2


def simplex_iterate(T, basis, n_enter, pivot_tol, opt_tol, max_iter):
    """Run Bland's-rule simplex iterations on a tableau in place.

    ``T`` has one row per constraint plus a final reduced-cost row; the last
    column is the right-hand side. Only columns ``< n_enter`` may enter.

    Returns ``(status, iterations, column)`` where ``column`` is the entering
    column that proved unboundedness (``-1`` otherwise).
    """
    rows = T.shape[0] - 1
    rhs = T.shape[1] - 1
    for it in range(max_iter):
        cost = T[rows, :n_enter]
        candidates = np.flatnonzero(cost < -opt_tol)
        if candidates.size == 0:
            return OPTIMAL, it, -1
        j = int(candidates[0])
        col = T[:rows, j]
        # pivot tolerance scales with the column so rounding noise never pivots
        eligible = np.flatnonzero(col > pivot_tol * max(1.0, float(np.abs(col).max(initial=0.0))))
        if eligible.size == 0:
            return UNBOUNDED, it, j
        # negative right-hand sides are rounding drift; treat them as 0
        ratios = np.maximum(T[eligible, rhs], 0.0) / col[eligible]
        best = ratios.min()
        ties = eligible[ratios <= best + 1e-12]
        r = int(ties[np.argmin(basis[ties])])
        if T[r, rhs] < 0.0:
            T[r, rhs] = 0.0
        pivot(T, r, j)
        basis[r] = j
    return ITERATION_LIMIT, max_iter, -1


def pivot(T, r, j):
    T[r] /= T[r, j]
    factors = T[:, j].copy()
    factors[r] = 0.0
    T -= np.outer(factors, T[r])
    T[:, j] = 0.0
    T[r, j] = 1.0


def floyd_warshall(D, nxt):
    """All-pairs shortest paths in place; ``nxt`` receives successor nodes."""
    n = D.shape[0]
    for k in range(n):
        via = D[:, k, None] + D[None, k, :]
        better = via < D
        if better.any():
            D[better] = via[better]
            rows = np.nonzero(better)[0]
            nxt[better] = nxt[rows, k]
