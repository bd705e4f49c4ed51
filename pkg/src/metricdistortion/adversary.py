"""Worst-case metrics for a fixed lottery, and the m = 3 optimal lottery.

:func:`worst_case_distortion` solves one LP per candidate ``j*`` over the
candidate-to-type distances, normalizing ``SC(j*) = 1`` and requiring every
other social cost to be at least 1, so the linear objective
``sum_i p_i SC(i)`` equals the distortion. Ordinal constraints and all
3-hop constraints ``d(j,v) <= d(j,u) + d(i,u) + d(i,v)`` make the result a
valid closure metric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .election import Election, coalition_stats, comparisons_matrix, remove_candidate
from .lp import LpProblem, Status, solve
from .mechanisms import FULL_GAP, MechanismResult, solve_weight_lp, subset_masks
from .metrics import MetricSpace, build_biased, candidate_distances, validate_lottery, validate_metric

UNANIMITY_TOL = 1e-12


@dataclass
class AdversaryResult:
    distortion: float
    witness: MetricSpace | None
    reference: int | None
    diagnostic: str = ""
    per_reference: dict[int, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        from .metrics import metric_to_dict

        return {
            "distortion": self.distortion,
            "reference": self.reference,
            "diagnostic": self.diagnostic,
            "witness": metric_to_dict(self.witness) if self.witness is not None else None,
        }


def metric_constraints(e: Election) -> tuple[np.ndarray, np.ndarray]:
    """Ordinal and 3-hop rows ``G d <= 0`` over variables ``d[i, t]`` (row-major)."""
    m, T = e.m, e.n_types
    var = np.arange(m * T).reshape(m, T)
    rows = []
    for t, ranking in enumerate(e.rankings):
        for hi, lo in zip(ranking, ranking[1:]):
            rows.append(((var[hi - 1, t], 1.0), (var[lo - 1, t], -1.0)))
    n_ord = len(rows)
    G_ord = np.zeros((n_ord, m * T))
    for k, ((a, ca), (b, cb)) in enumerate(rows):
        G_ord[k, a] = ca
        G_ord[k, b] = cb

    # d(j,v) - d(j,u) - d(i,u) - d(i,v) <= 0 for i != j, u != v
    js, is_, vs, us = np.meshgrid(np.arange(m), np.arange(m), np.arange(T), np.arange(T), indexing="ij")
    keep = (js != is_) & (vs != us)
    js, is_, vs, us = js[keep], is_[keep], vs[keep], us[keep]
    G_hop = np.zeros((js.size, m * T))
    k = np.arange(js.size)
    G_hop[k, var[js, vs]] += 1.0
    G_hop[k, var[js, us]] -= 1.0
    G_hop[k, var[is_, us]] -= 1.0
    G_hop[k, var[is_, vs]] -= 1.0
    G = np.vstack([G_ord, G_hop])
    return G, np.zeros(G.shape[0])


def worst_case_distortion(e: Election, p) -> AdversaryResult:
    """Exact worst-case distortion of lottery ``p`` over all consistent metrics."""
    p = validate_lottery(p, e.m)
    m, T = e.m, e.n_types
    w = e.weights
    G, h = metric_constraints(e)
    # SC rows: sc_rows[i] . d = SC(i)
    sc_rows = np.zeros((m, m * T))
    for i in range(m):
        sc_rows[i, i * T:(i + 1) * T] = w
    objective = p @ sc_rows

    best = None
    per_ref = {}
    for ref in range(m):
        others = np.delete(np.arange(m), ref)
        A = np.vstack([G, sc_rows[[ref]], -sc_rows[[ref]], -sc_rows[others]])
        b = np.concatenate([h, [1.0, -1.0], -np.ones(m - 1)])
        sol = solve(LpProblem(A, b, objective))
        if sol.status is Status.UNBOUNDED:
            return AdversaryResult(
                math.inf,
                None,
                ref + 1,
                "lottery weights an undominatable candidate",
                per_ref,
            )
        if sol.status is not Status.OPTIMAL:
            raise RuntimeError(f"adversary LP for reference {ref + 1} is {sol.status.value}")
        per_ref[ref + 1] = sol.objective
        if best is None or sol.objective > best[0] + 1e-12:
            best = (sol.objective, ref, sol.x)
    value, ref, x = best
    witness = MetricSpace(x.reshape(m, T), e)
    return AdversaryResult(value, witness, ref + 1, "", per_ref)


def generalized_constraints(e: Election) -> tuple[np.ndarray, np.ndarray]:
    """Rows ``2 sum_{j not in I} s_{I>j} p_j <= 1 - plu(I)`` for every proper ``I``."""
    rows, rhs = [], []
    for mask in subset_masks(e.m):
        coalition = [int(i) + 1 for i in np.flatnonzero(mask)]
        s_over, plu_I = coalition_stats(e, coalition)
        row = np.zeros(e.m)
        for j, s in s_over.items():
            row[j - 1] = 2.0 * s
        rows.append(row)
        rhs.append(1.0 - plu_I)
    return np.vstack(rows), np.asarray(rhs)


def _generalized_lp(e: Election) -> MechanismResult:
    A, b = generalized_constraints(e)
    return solve_weight_lp(A, b, FULL_GAP, "all metrics (instance-optimal)")


def optimal_lottery_m3(e: Election) -> MechanismResult:
    """Instance-optimal lottery for a 3-candidate election.

    Solves the LP over the six generalized (0,1,2,3)-metric constraints. If
    some candidate is ranked below another by every voter it gets weight 0
    and the problem is solved on the remaining two candidates.
    """
    if e.m != 3:
        raise ValueError(f"optimal_lottery_m3 needs m = 3, got m = {e.m}")
    M = comparisons_matrix(e)
    beaten = [i for i in range(3) if np.any(M[:, i] >= 1.0 - UNANIMITY_TOL)]
    if beaten:
        drop = beaten[0] + 1
        sub, kept = remove_candidate(e, drop)
        res = _generalized_lp(sub)
        lottery = np.zeros(3)
        lottery[np.asarray(kept) - 1] = res.lottery
        res.lottery = lottery
        if res.weights is not None:
            weights = np.zeros(3)
            weights[np.asarray(kept) - 1] = res.weights
            res.weights = weights
        res.tight_constraints = ()
        return res
    return _generalized_lp(e)


@dataclass
class DominanceReport:
    holds: bool
    reference: int
    x: np.ndarray
    original_costs: np.ndarray
    biased_costs: np.ndarray
    biased: MetricSpace = field(repr=False)


def check_biased_dominance(e: Election, d: MetricSpace, tol: float = 1e-9) -> DominanceReport:
    """Compare ``d`` with the biased metric built from closure distances to its best candidate."""
    report = validate_metric(d)
    if not report.ok:
        raise ValueError(f"metric is invalid: {report.first.message}")
    sc = d.social_costs()
    star = int(np.argmin(sc))
    x = candidate_distances(d)[:, star].copy()
    x[star] = 0.0
    hat = build_biased(e, x)
    sc_hat = hat.social_costs()
    holds = bool(
        sc_hat[star] <= sc[star] + tol
        and np.all((sc_hat - sc_hat[star]) >= (sc - sc[star]) - tol)
    )
    return DominanceReport(holds, star + 1, x, sc, sc_hat, hat)
