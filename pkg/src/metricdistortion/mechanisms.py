"""Randomized election mechanisms built on the weight LPs.

Each LP maximizes the total unnormalized weight ``sum(p)`` subject to one
linear constraint per metric (or metric family); the lottery is the
normalized optimizer. Two scalings are in use and every result records which
one applies:

* ``"1+1/beta"`` -- constraints carry full social-cost gaps (explicit metric
  lists, and the m = 3 instance-optimal LP in :mod:`.adversary`);
* ``"1+2/beta"`` -- constraints are halved (comparisons-matrix LP, subset LP).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .election import Election, comparisons_matrix, plurality_vector
from .lp import LpProblem, Status, solve
from .metrics import MetricSpace

FULL_GAP = "1+1/beta"
HALF_GAP = "1+2/beta"
MAX_SUBSET_M = 20


@dataclass
class MechanismResult:
    lottery: np.ndarray
    beta: float | None
    guarantee: float
    convention: str | None
    tight_constraints: tuple[int, ...] = ()
    scope: str = "all metrics"
    weights: np.ndarray | None = field(default=None, repr=False)

    def to_dict(self) -> dict:
        return {
            "lottery": [float(v) for v in self.lottery],
            "beta": self.beta,
            "guarantee": self.guarantee,
            "convention": self.convention,
            "scope": self.scope,
            "tight_constraints": list(self.tight_constraints),
        }


def guarantee_from_beta(beta: float, convention: str) -> float:
    """Distortion bound implied by an LP optimum; unbounded LPs cap at 1."""
    if math.isinf(beta):
        return 1.0
    if beta <= 0:
        return math.inf
    return 1.0 + (1.0 if convention == FULL_GAP else 2.0) / beta


def solve_weight_lp(A, b, convention: str, scope: str = "all metrics") -> MechanismResult:
    """Maximize ``sum(p)`` s.t. ``A p <= b``, ``p >= 0`` and wrap the result.

    All coefficients here are nonnegative, so the LP is unbounded exactly when
    some candidate's column is zero; those candidates share the lottery
    equally. A zero optimum leaves the lottery undetermined and falls back to
    uniform with an infinite guarantee.
    """
    A = np.asarray(A, dtype=float)
    m = A.shape[1]
    sol = solve(LpProblem(A, b, np.ones(m)))
    if sol.status is Status.INFEASIBLE:
        raise RuntimeError("weight LP reported infeasible although p = 0 is feasible")
    if sol.status is Status.UNBOUNDED:
        free = np.all(A <= 0, axis=0)
        if not free.any():
            free = sol.ray > 0
        lottery = free / free.sum()
        return MechanismResult(lottery, math.inf, 1.0, convention, (), scope)
    beta = sol.objective
    if beta <= 0:
        return MechanismResult(np.full(m, 1.0 / m), 0.0, math.inf, convention, tuple(sorted(sol.tight)), scope, sol.x)
    return MechanismResult(
        sol.x / sol.x.sum(),
        beta,
        guarantee_from_beta(beta, convention),
        convention,
        tuple(sorted(sol.tight)),
        scope,
        sol.x,
    )


def metric_constraint(d: MetricSpace) -> tuple[np.ndarray, float]:
    """Row and right-hand side of the constraint a single metric imposes."""
    sc = d.social_costs()
    best = sc.min()
    return sc - best, float(best)


def lp_a_lottery(e: Election, metrics: Sequence[MetricSpace]) -> MechanismResult:
    """Optimal lottery against an explicit list of metrics."""
    if not metrics:
        raise ValueError("need at least one metric")
    rows, rhs = zip(*(metric_constraint(d) for d in metrics))
    for d in metrics:
        if d.distances.shape != (e.m, e.n_types):
            raise ValueError("metric does not match the election")
    return solve_weight_lp(np.vstack(rows), np.asarray(rhs), FULL_GAP, "listed metrics")


def lp_b_lottery(e: Election) -> MechanismResult:
    """Lottery from ``M p <= 1 - plu``; its guarantee is proven for (0,1,2,3)-metrics only."""
    M = comparisons_matrix(e)
    plu = plurality_vector(e)
    return solve_weight_lp(M, 1.0 - plu, HALF_GAP, "(0,1,2,3)-metrics; all metrics conjectural")


def subset_masks(m: int):
    """Nonempty proper subsets of ``1..m`` as boolean masks, by bitmask order."""
    for bits in range(1, 2**m - 1):
        yield np.array([(bits >> k) & 1 for k in range(m)], dtype=bool)


def lp_c_constraints(e: Election) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``sum_{j not in I} s_{I>j} p_j <= 1 - max_{i in I} s_{i > rest}``."""
    if e.m > MAX_SUBSET_M:
        raise ValueError(f"subset LP enumerates 2^m constraints; m must be <= {MAX_SUBSET_M}")
    pos = e.positions
    w = e.weights
    rows, rhs = [], []
    for mask in subset_masks(e.m):
        worst_member = pos[:, mask].max(axis=1)
        best_outside = pos[:, ~mask].min(axis=1)
        row = np.zeros(e.m)
        for j in np.flatnonzero(~mask):
            row[j] = w[worst_member < pos[:, j]].sum()
        top = max(w[pos[:, i] < best_outside].sum() for i in np.flatnonzero(mask))
        rows.append(row)
        rhs.append(1.0 - top)
    return np.vstack(rows), np.asarray(rhs)


def lp_c_lottery(e: Election) -> MechanismResult:
    """Lottery from the subset LP; its guarantee holds against every metric."""
    A, b = lp_c_constraints(e)
    return solve_weight_lp(A, b, HALF_GAP, "all metrics")


def smart_dictatorship(e: Election) -> MechanismResult:
    """Choose ``i`` with probability proportional to ``plu(i) / (1 - plu(i))``."""
    plu = plurality_vector(e)
    guarantee = 3.0 - 2.0 * float(plu @ plu)
    unanimous = np.flatnonzero(plu >= 1.0 - 1e-12)
    if unanimous.size:
        lottery = np.zeros(e.m)
        lottery[unanimous[0]] = 1.0
        return MechanismResult(lottery, math.inf, max(guarantee, 1.0), None, (), "all metrics")
    q = plu / (1.0 - plu)
    return MechanismResult(q / q.sum(), float(q.sum()), guarantee, None, (), "all metrics", q)


def random_dictatorship(e: Election) -> MechanismResult:
    """Choose a uniformly random voter's favourite."""
    return MechanismResult(plurality_vector(e), None, 3.0, None, (), "all metrics")


MECHANISMS = {
    "lpB": lp_b_lottery,
    "lpC": lp_c_lottery,
    "smart": smart_dictatorship,
    "rd": random_dictatorship,
}
