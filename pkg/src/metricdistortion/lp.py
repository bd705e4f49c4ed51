"""Dense two-phase simplex for ``maximize c.x  s.t.  A x <= b, x >= 0``.

Bland's rule throughout, so the pivot sequence is deterministic and cannot
cycle. The pivot loop itself lives in :mod:`metricdistortion.kernels`; this
module handles the phases and keeps the tableau consistent with the input.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import kernels
from ._kernels_py import pivot

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-7
OPT_TOL = 1e-9
CHUNK = 64  # pivots between drift checks
DRIFT_TOL = 1e-9


class Status(str, enum.Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass
class LpProblem:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        n = self.c.size
        A = np.asarray(self.A, dtype=float)
        if A.size == 0:
            A = A.reshape(0, n)
        if A.ndim != 2:
            raise ValueError("A must be a 2-D matrix")
        self.A = A
        self.b = np.asarray(self.b, dtype=float).ravel()
        r = self.A.shape[0]
        if self.A.shape[1] != n or self.b.size != r:
            raise ValueError(
                f"dimension mismatch: A is {self.A.shape}, b has {self.b.size}, c has {n}"
            )
        if not (np.all(np.isfinite(self.A)) and np.all(np.isfinite(self.b)) and np.all(np.isfinite(self.c))):
            raise ValueError("LP data must be finite")


@dataclass
class LpSolution:
    status: Status
    objective: float | None = None
    x: np.ndarray | None = None
    tight: frozenset[int] = field(default_factory=frozenset)
    ray: np.ndarray | None = None  # improving direction when unbounded
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


class SimplexError(RuntimeError):
    pass


class _Phase:
    """Original standard-form data for one phase, used to rebuild the tableau.

    Long degenerate pivot sequences accumulate rounding error; the pivot loop
    runs in chunks and the tableau is recomputed as ``B^-1 [S | rhs]`` when
    the basic solution drifts from the original equations, and once more
    before any terminal status is accepted.
    """

    def __init__(self, S, rhs, cost, n_enter, max_iter):
        self.S = S
        self.rhs = rhs
        self.cost = cost
        self.n_enter = n_enter
        self.max_iter = max_iter

    def drift(self, T, basis) -> float:
        rows = basis.size
        return float(np.abs(self.S[:, basis] @ T[:rows, -1] - self.rhs).max(initial=0.0))

    def rebuild(self, T, basis) -> None:
        rows = basis.size
        if rows:
            try:
                X = np.linalg.solve(self.S[:, basis], np.column_stack([self.S, self.rhs]))
            except np.linalg.LinAlgError:
                raise SimplexError("basis became singular") from None
            X[:, basis] = np.eye(rows)
            T[:rows] = X
        self.price(T, basis)

    def price(self, T, basis) -> None:
        rows = basis.size
        cb = self.cost[basis]
        T[rows, :-1] = self.cost - cb @ T[:rows, :-1]
        T[rows, -1] = -(cb @ T[:rows, -1])

    def run(self, T, basis):
        total = 0
        verified = False
        while True:
            budget = min(CHUNK, self.max_iter - total)
            if budget <= 0:
                raise SimplexError(f"simplex did not terminate within {self.max_iter} pivots")
            status, its, col = kernels.simplex_iterate(T, basis, self.n_enter, PIVOT_TOL, OPT_TOL, budget)
            total += its
            if status == kernels.ITERATION_LIMIT:
                verified = False
                if self.drift(T, basis) > DRIFT_TOL:
                    self.rebuild(T, basis)
                continue
            if verified and its == 0:
                return status, total, col
            if status == kernels.OPTIMAL and self.certified(T, basis):
                return status, total, col
            self.rebuild(T, basis)
            verified = True

    def certified(self, T, basis) -> bool:
        """Whether the basis is optimal when recomputed from the original data."""
        rows = basis.size
        if rows == 0:
            return True
        try:
            lu = lu_factor(self.S[:, basis], check_finite=False)
        except (ValueError, np.linalg.LinAlgError):
            return False
        x_b = lu_solve(lu, self.rhs, check_finite=False)
        y = lu_solve(lu, self.cost[basis], trans=1, check_finite=False)
        reduced = self.cost[: self.n_enter] - y @ self.S[:, : self.n_enter]
        if not (np.all(np.isfinite(x_b)) and x_b.min() >= -DRIFT_TOL and reduced.min() >= -OPT_TOL):
            return False
        T[:rows, -1] = x_b
        T[rows, -1] = -(self.cost[basis] @ x_b)
        return True


def solve(lp: LpProblem, max_iter: int | None = None) -> LpSolution:
    """Solve ``lp`` and return status, optimum, a vertex optimizer and tight rows."""
    A, b, c = lp.A, lp.b, lp.c
    r, n = A.shape
    if max_iter is None:
        max_iter = 50 * (r + n) + 1000

    neg = b < 0
    art_rows = np.flatnonzero(neg)
    k = art_rows.size
    ncol = n + r + k
    T = np.zeros((r + 1, ncol + 1))
    sign = np.where(neg, -1.0, 1.0)
    T[:r, :n] = A * sign[:, None]
    T[np.arange(r), n + np.arange(r)] = sign
    T[:r, -1] = b * sign
    basis = n + np.arange(r, dtype=np.intp)
    T[art_rows, n + r + np.arange(k)] = 1.0
    basis[art_rows] = n + r + np.arange(k)
    S = T[:r, : n + r].copy()
    rhs = T[:r, -1].copy()
    keep = np.ones(r, dtype=bool)
    iterations = 0

    if k:
        # phase 1: minimize the sum of artificials
        cost1 = np.zeros(ncol)
        cost1[n + r:] = 1.0
        phase1 = _Phase(T[:r, :ncol].copy(), T[:r, -1].copy(), cost1, ncol, max_iter)
        phase1.price(T, basis)
        _, its, _ = phase1.run(T, basis)
        iterations += its
        if -T[r, -1] > FEAS_TOL:
            return LpSolution(Status.INFEASIBLE, iterations=iterations)
        for row in range(r):
            if basis[row] >= n + r:
                cols = np.flatnonzero(np.abs(T[row, : n + r]) > PIVOT_TOL)
                if cols.size:
                    pivot(T, row, int(cols[0]))
                    basis[row] = cols[0]
                else:
                    keep[row] = False
        T = np.ascontiguousarray(np.delete(T, np.s_[n + r:ncol], axis=1)[np.append(keep, True)])
        basis = np.ascontiguousarray(basis[keep])

    # phase 2: minimize -c.x
    cost = np.zeros(n + r)
    cost[:n] = -c
    rows = T.shape[0] - 1
    phase2 = _Phase(S[keep], rhs[keep], cost, n + r, max_iter)
    phase2.price(T, basis)
    status, its, col = phase2.run(T, basis)
    iterations += its

    full = np.zeros(n + r)
    full[basis] = T[:rows, -1]
    if status == kernels.UNBOUNDED:
        ray = np.zeros(n + r)
        ray[col] = 1.0
        ray[basis] = -T[:rows, col]
        return LpSolution(Status.UNBOUNDED, ray=ray[:n], iterations=iterations)

    x = np.clip(full[:n], 0.0, None)
    slack = b - A @ x
    tight = frozenset(int(i) for i in np.flatnonzero(np.abs(slack) <= FEAS_TOL * np.maximum(1.0, np.abs(b))))
    return LpSolution(Status.OPTIMAL, float(c @ x), x, tight, iterations=iterations)

