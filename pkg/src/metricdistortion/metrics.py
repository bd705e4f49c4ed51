"""Metric spaces consistent with an election.

A :class:`MetricSpace` stores only candidate-to-type distances; every other
distance is the shortest-path closure of the bipartite graph they define.
The builders here produce the adversarial families used by the mechanisms
and lower bounds, and :func:`validate_metric` checks any distance table for
nonnegativity, ordinal consistency and closure consistency.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import kernels
from .election import Election, ElectionError, _coalition_mask, election_from_dict, election_to_dict, make_election

METRIC_TOL = 1e-9
LOTTERY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MetricSpace:
    """Distances ``distances[i-1, t]`` from candidate ``i`` to voter type ``t``."""

    distances: np.ndarray
    election: Election = field(repr=False)

    def __post_init__(self):
        d = np.array(self.distances, dtype=float)
        if d.shape != (self.election.m, self.election.n_types):
            raise ValueError(
                f"distance table has shape {d.shape}, expected "
                f"{(self.election.m, self.election.n_types)}"
            )
        d.setflags(write=False)
        object.__setattr__(self, "distances", d)

    def social_costs(self) -> np.ndarray:
        return self.distances @ self.election.weights

    def with_distance(self, i: int, t: int, value: float) -> "MetricSpace":
        d = self.distances.copy()
        d[i - 1, t] = value
        return MetricSpace(d, self.election)


@dataclass
class Violation:
    kind: str  # "shape", "negative", "ordinal" or "closure"
    message: str
    candidate: int | None = None
    type_index: int | None = None
    path: list[tuple[str, int]] | None = None


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def first(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.ok


def validate_lottery(p, m: int | None = None, tol: float = 1e-6) -> np.ndarray:
    """Return ``p`` as a probability vector, renormalizing small drift."""
    p = np.asarray(p, dtype=float).ravel()
    if m is not None and p.shape != (m,):
        raise ValueError(f"lottery has {p.size} entries, expected {m}")
    if not np.all(np.isfinite(p)) or np.any(p < -LOTTERY_TOL):
        raise ValueError("lottery entries must be finite and nonnegative")
    total = p.sum()
    if abs(total - 1.0) > tol:
        raise ValueError(f"lottery sums to {total!r}, expected 1")
    p = np.clip(p, 0.0, None)
    return p / p.sum()


# -- builders -----------------------------------------------------------------


def build_0123(e: Election, i: int) -> MetricSpace:
    """The (0,1,2,3)-metric biased toward candidate ``i``."""
    if not 1 <= i <= e.m:
        raise ValueError(f"candidate {i} out of range 1..{e.m}")
    pos = e.positions
    base = np.where(pos[:, i - 1] == 0, 0.0, 1.0)
    below_i = pos > pos[:, [i - 1]]  # j ranked below i
    d = base[None, :] + 2.0 * below_i.T
    return MetricSpace(d, e)


def build_13(e: Election, i: int) -> MetricSpace:
    """The (1,3)-metric for ``i``: ``i`` at 1 from everyone, rivals at 1 or 3."""
    if not 1 <= i <= e.m:
        raise ValueError(f"candidate {i} out of range 1..{e.m}")
    pos = e.positions
    beats_i = pos < pos[:, [i - 1]]
    for j in range(1, e.m + 1):
        if j != i and not beats_i[:, j - 1].any():
            raise ElectionError(f"candidate {j} is ranked below {i} by every voter type")
    d = np.where(beats_i.T, 1.0, 3.0)
    d[i - 1] = 1.0
    return MetricSpace(d, e)


def build_biased(e: Election, x) -> MetricSpace:
    """Biased metric for the candidate-distance vector ``x``.

    For each type, ``y = max(x_i - x_j) / 2`` over pairs with ``i`` ranked at
    or above ``j``, and candidate ``i`` sits at ``y + min x_j`` over ``j`` at
    or below ``i``.
    """
    x = np.asarray(x, dtype=float).ravel()
    if x.shape != (e.m,):
        raise ValueError(f"x has {x.size} entries, expected {e.m}")
    if np.any(x < 0) or not np.all(np.isfinite(x)):
        raise ValueError("x must be finite and nonnegative")
    if not np.any(x == 0):
        raise ValueError("x must have at least one zero entry")
    order = np.asarray(e.rankings) - 1  # T x m, best first
    xs = x[order]
    suffix_min = np.minimum.accumulate(xs[:, ::-1], axis=1)[:, ::-1]
    y = 0.5 * (xs - suffix_min).max(axis=1)
    d = np.empty((e.m, e.n_types))
    rows = np.arange(e.n_types)[:, None]
    d[order, np.broadcast_to(rows, order.shape)] = y[:, None] + suffix_min
    return MetricSpace(d, e)


def build_generalized_0123(e: Election, coalition: Iterable[int]) -> MetricSpace:
    """Generalized (0,1,2,3)-metric for a nonempty proper coalition ``I``."""
    mask = _coalition_mask(e, coalition)
    pos = e.positions
    worst_member = pos[:, mask].max(axis=1)
    base = np.where(worst_member == mask.sum() - 1, 0.0, 1.0)
    d = np.tile(base, (e.m, 1))
    for j in np.flatnonzero(~mask):
        d[j] += 2.0 * (worst_member < pos[:, j])
    return MetricSpace(d, e)


def indicator_vector(m: int, coalition: Iterable[int]) -> np.ndarray:
    """The 0/2 vector that is 0 on ``coalition`` and 2 elsewhere."""
    x = np.full(m, 2.0)
    x[np.asarray(sorted(coalition)) - 1] = 0.0
    return x


def euclidean_instance(
    rng: np.random.Generator, m: int, n_voters: int = 40
) -> tuple[Election, MetricSpace]:
    """Election induced by random points in the unit square, with its metric.

    Voters sharing a ranking are merged into one type whose distances are the
    group averages; averaging preserves both ordinal and closure consistency.
    Ties in a voter's ranking are broken by candidate id.
    """
    cand = rng.random((m, 2))
    voters = rng.random((n_voters, 2))
    dist = np.linalg.norm(voters[:, None, :] - cand[None, :, :], axis=2)
    groups: dict[tuple[int, ...], list[int]] = {}
    for v in range(n_voters):
        ranking = tuple(int(c) + 1 for c in np.argsort(dist[v], kind="stable"))
        groups.setdefault(ranking, []).append(v)
    rankings = sorted(groups)
    e = make_election(m, [(r, len(groups[r]) / n_voters) for r in rankings])
    d = np.column_stack([dist[groups[r]].mean(axis=0) for r in rankings])
    return e, MetricSpace(d, e)


# -- closure and validation ---------------------------------------------------


def closure(d: MetricSpace) -> tuple[np.ndarray, np.ndarray]:
    """All-pairs shortest paths over candidates ``0..m-1`` and types ``m..m+T-1``.

    Returns the distance matrix and the successor matrix for path recovery.
    """
    m, T = d.distances.shape
    n = m + T
    D = np.full((n, n), np.inf)
    np.fill_diagonal(D, 0.0)
    D[:m, m:] = d.distances
    D[m:, :m] = d.distances.T
    nxt = np.tile(np.arange(n, dtype=np.intp), (n, 1))
    kernels.floyd_warshall(D, nxt)
    return D, nxt


def candidate_distances(d: MetricSpace) -> np.ndarray:
    """Closure distances between candidates (``m x m``)."""
    m = d.distances.shape[0]
    return closure(d)[0][:m, :m]


def _path(nxt: np.ndarray, u: int, v: int, m: int) -> list[tuple[str, int]]:
    nodes = [u]
    while u != v:
        u = int(nxt[u, v])
        nodes.append(u)
    return [("candidate", k + 1) if k < m else ("type", k - m) for k in nodes]


def validate_metric(d: MetricSpace, tol: float = METRIC_TOL) -> ValidationReport:
    """Check nonnegativity, ordinal consistency and closure consistency."""
    e = d.election
    dist = d.distances
    violations: list[Violation] = []
    if dist.shape != (e.m, e.n_types):
        return ValidationReport([Violation("shape", f"shape {dist.shape} does not match election")])
    if not np.all(np.isfinite(dist)):
        return ValidationReport([Violation("negative", "distances must be finite")])

    for i, t in zip(*np.nonzero(dist < 0)):
        violations.append(
            Violation("negative", f"d({i + 1}, type {t}) = {dist[i, t]} < 0", i + 1, int(t))
        )

    for t, ranking in enumerate(e.rankings):
        for a in range(e.m):
            for b in range(a + 1, e.m):
                hi, lo = ranking[a], ranking[b]
                if dist[hi - 1, t] > dist[lo - 1, t] + tol:
                    violations.append(
                        Violation(
                            "ordinal",
                            f"type {t} ranks {hi} above {lo} but "
                            f"d({hi}) = {dist[hi - 1, t]} > d({lo}) = {dist[lo - 1, t]}",
                            hi,
                            t,
                        )
                    )

    D, nxt = closure(d)
    m = e.m
    for i in range(m):
        for t in range(e.n_types):
            shortest = D[i, m + t]
            if dist[i, t] > shortest + tol:
                path = _path(nxt, i, m + t, m)
                violations.append(
                    Violation(
                        "closure",
                        f"edge d({i + 1}, type {t}) = {dist[i, t]} exceeds path of length "
                        f"{shortest} via {path}",
                        i + 1,
                        t,
                        path,
                    )
                )
    return ValidationReport(violations)


# -- costs --------------------------------------------------------------------


def social_cost(d: MetricSpace, i: int) -> float:
    """Voter-weighted average distance from candidate ``i``."""
    return float(d.distances[i - 1] @ d.election.weights)


def distortion(e: Election, d: MetricSpace, p) -> float:
    """Expected social cost of lottery ``p`` over the optimal social cost."""
    if d.election is not e and d.distances.shape != (e.m, e.n_types):
        raise ValueError("metric is not defined over this election")
    p = validate_lottery(p, e.m)
    sc = d.distances @ e.weights
    expected = float(p @ sc)
    best = float(sc.min())
    if best <= 0.0:
        return 1.0 if expected <= 0.0 else float("inf")
    return expected / best


# -- serialization ------------------------------------------------------------


def metric_to_dict(d: MetricSpace, include_election: bool = True) -> dict:
    doc = {
        "candidates": d.election.m,
        "types": d.election.n_types,
        "d": d.distances.tolist(),
    }
    if include_election:
        doc["election"] = election_to_dict(d.election)
    return doc


def metric_from_dict(doc: dict, election: Election | None = None) -> MetricSpace:
    if not isinstance(doc, dict) or not {"candidates", "types", "d"} <= doc.keys():
        raise ValueError('metric document needs keys "candidates", "types" and "d"')
    if election is None:
        if "election" not in doc:
            raise ValueError("metric document has no embedded election; pass one explicitly")
        election = election_from_dict(doc["election"])
    d = np.asarray(doc["d"], dtype=float)
    if d.shape != (doc["candidates"], doc["types"]):
        raise ValueError(f"distance table shape {d.shape} disagrees with header")
    return MetricSpace(d, election)


def dump_metric(d: MetricSpace) -> str:
    return json.dumps(metric_to_dict(d), indent=2)
