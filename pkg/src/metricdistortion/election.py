"""Elections as weighted ranking profiles, and their ordinal statistics.

Candidates are labelled ``1..m``. An election stores one entry per distinct
ranking ("type") together with the fraction of voters holding it; every
statistic used elsewhere in the package (comparisons matrix, plurality
vector, coalition shares) is a weighted count over these types.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from itertools import permutations
from typing import Iterable, Sequence

import numpy as np

WEIGHT_SUM_TOL = 1e-6
WEIGHT_INVARIANT_TOL = 1e-9


class ElectionError(ValueError):
    """An election document or profile violates the data model."""


@dataclass(frozen=True)
class RankingType:
    ranking: tuple[int, ...]
    weight: float


@dataclass(frozen=True, eq=False)
class Election:
    """A profile of distinct strict rankings over ``m`` candidates.

    Use :func:`make_election` or :func:`load_election` to build one; they
    validate and renormalize. ``rankings[t]`` lists candidates from most to
    least preferred.
    """

    m: int
    rankings: tuple[tuple[int, ...], ...]
    weights: np.ndarray = field(repr=False)

    @property
    def n_types(self) -> int:
        return len(self.rankings)

    @property
    def profile(self) -> list[RankingType]:
        return [RankingType(r, float(w)) for r, w in zip(self.rankings, self.weights)]

    @cached_property
    def positions(self) -> np.ndarray:
        """``positions[t, i-1]`` is the rank (0 = top) of candidate ``i`` in type ``t``."""
        pos = np.empty((self.n_types, self.m), dtype=np.intp)
        for t, r in enumerate(self.rankings):
            pos[t, np.asarray(r) - 1] = np.arange(self.m)
        pos.setflags(write=False)
        return pos

    def prefers(self, t: int, i: int, j: int) -> bool:
        """Whether type ``t`` ranks candidate ``i`` strictly above ``j``."""
        return self.positions[t, i - 1] < self.positions[t, j - 1]


def make_election(m: int, profile: Iterable[tuple[Sequence[int], float]]) -> Election:
    """Validate ``(ranking, weight)`` pairs and return an :class:`Election`."""
    if not isinstance(m, (int, np.integer)) or isinstance(m, bool) or m < 2:
        raise ElectionError(f"m must be an integer >= 2, got {m!r}")
    m = int(m)
    rankings = []
    weights = []
    expected = set(range(1, m + 1))
    for ranking, weight in profile:
        ranking = tuple(int(c) for c in ranking)
        if len(ranking) != m or set(ranking) != expected:
            raise ElectionError(f"ranking {ranking} is not a permutation of 1..{m}")
        if ranking in rankings:
            raise ElectionError(f"duplicate ranking {ranking}")
        weight = float(weight)
        if not math.isfinite(weight) or weight < 0:
            raise ElectionError(f"weight of {ranking} must be finite and >= 0, got {weight}")
        rankings.append(ranking)
        weights.append(weight)
    if not rankings:
        raise ElectionError("profile is empty")
    w = np.asarray(weights, dtype=float)
    total = w.sum()
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ElectionError(f"weights sum to {total!r}, expected 1 within {WEIGHT_SUM_TOL}")
    w = w / total
    w.setflags(write=False)
    return Election(m, tuple(rankings), w)


def load_election(source) -> Election:
    """Parse an election from JSON bytes, text, a path, or a readable stream.

    Schema: ``{"m": int, "profile": [{"ranking": [int, ...], "weight": number}, ...]}``.
    """
    if hasattr(source, "read"):
        raw = source.read()
    elif isinstance(source, (bytes, bytearray)):
        raw = bytes(source)
    elif isinstance(source, str) and source.lstrip().startswith("{"):
        raw = source
    else:
        with open(source, "rb") as fh:
            raw = fh.read()
    if isinstance(raw, (bytes, bytearray)):
        raw = raw.decode("utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ElectionError(f"malformed JSON: {exc}") from None
    return election_from_dict(doc)


def election_from_dict(doc) -> Election:
    if not isinstance(doc, dict) or "m" not in doc or "profile" not in doc:
        raise ElectionError('election document needs keys "m" and "profile"')
    profile = doc["profile"]
    if not isinstance(profile, list):
        raise ElectionError('"profile" must be a list')
    pairs = []
    for entry in profile:
        if not isinstance(entry, dict) or "ranking" not in entry or "weight" not in entry:
            raise ElectionError('each profile entry needs "ranking" and "weight"')
        ranking, weight = entry["ranking"], entry["weight"]
        if not isinstance(ranking, list) or not all(
            isinstance(c, int) and not isinstance(c, bool) for c in ranking
        ):
            raise ElectionError(f"ranking must be a list of integers, got {ranking!r}")
        if not isinstance(weight, (int, float)) or isinstance(weight, bool):
            raise ElectionError(f"weight must be a number, got {weight!r}")
        pairs.append((ranking, weight))
    return make_election(doc["m"], pairs)


def election_to_dict(e: Election) -> dict:
    return {
        "m": e.m,
        "profile": [
            {"ranking": list(r), "weight": float(w)} for r, w in zip(e.rankings, e.weights)
        ],
    }


def dump_election(e: Election, fp: io.TextIOBase | None = None) -> str:
    text = json.dumps(election_to_dict(e), indent=2)
    if fp is not None:
        fp.write(text + "\n")
    return text


def comparisons_matrix(e: Election) -> np.ndarray:
    """``M[i-1, j-1]`` is the fraction of voters ranking ``i`` above ``j``."""
    pos = e.positions
    above = pos[:, :, None] < pos[:, None, :]
    return np.einsum("t,tij->ij", e.weights, above.astype(float))


def plurality_vector(e: Election) -> np.ndarray:
    """Fraction of voters ranking each candidate first."""
    plu = np.zeros(e.m)
    for r, w in zip(e.rankings, e.weights):
        plu[r[0] - 1] += w
    return plu


def _coalition_mask(e: Election, coalition: Iterable[int]) -> np.ndarray:
    members = sorted({int(i) for i in coalition})
    if not members or len(members) >= e.m or members[0] < 1 or members[-1] > e.m:
        raise ElectionError(f"coalition must be a nonempty proper subset of 1..{e.m}")
    mask = np.zeros(e.m, dtype=bool)
    mask[np.asarray(members) - 1] = True
    return mask


def coalition_stats(e: Election, coalition: Iterable[int]) -> tuple[dict[int, float], float]:
    """Shares for a coalition ``I``.

    Returns ``(s_over, plu_I)``: ``s_over[j]`` for ``j`` outside ``I`` is the
    fraction of voters ranking every member of ``I`` above ``j``, and
    ``plu_I`` is the fraction whose top ``|I|`` positions are exactly ``I``.
    """
    mask = _coalition_mask(e, coalition)
    worst_member = e.positions[:, mask].max(axis=1)
    s_over = {}
    for j in np.flatnonzero(~mask):
        s_over[int(j) + 1] = float(e.weights[worst_member < e.positions[:, j]].sum())
    plu_I = float(e.weights[worst_member == mask.sum() - 1].sum())
    return s_over, plu_I


def top_over_rest(e: Election, i: int, coalition: Iterable[int]) -> float:
    """Fraction of voters ranking ``i`` above every candidate outside ``coalition``."""
    mask = _coalition_mask(e, coalition)
    best_outside = e.positions[:, ~mask].min(axis=1)
    return float(e.weights[e.positions[:, i - 1] < best_outside].sum())


def remove_candidate(e: Election, i: int) -> tuple[Election, list[int]]:
    """Erase ``i`` from every ranking, merging types that become identical.

    Returns the sub-election (relabelled ``1..m-1``) and the original label
    of each new candidate.
    """
    if e.m <= 2:
        raise ElectionError("cannot remove a candidate from a 2-candidate election")
    kept = [c for c in range(1, e.m + 1) if c != i]
    relabel = {c: k + 1 for k, c in enumerate(kept)}
    merged: dict[tuple[int, ...], float] = {}
    for r, w in zip(e.rankings, e.weights):
        key = tuple(relabel[c] for c in r if c != i)
        merged[key] = merged.get(key, 0.0) + float(w)
    return make_election(e.m - 1, merged.items()), kept


def random_election(
    rng: np.random.Generator, m: int, n_types: int | None = None, concentration: float = 1.0
) -> Election:
    """Random profile: ``n_types`` distinct rankings with Dirichlet weights."""
    n_perm = math.factorial(m)
    if n_types is None:
        n_types = int(rng.integers(1, min(n_perm, 8) + 1))
    n_types = min(n_types, n_perm)
    if n_perm <= 5040:
        all_perms = list(permutations(range(1, m + 1)))
        idx = rng.choice(n_perm, size=n_types, replace=False)
        chosen = [all_perms[k] for k in sorted(idx)]
    else:
        seen: set[tuple[int, ...]] = set()
        while len(seen) < n_types:
            seen.add(tuple(int(c) for c in rng.permutation(m) + 1))
        chosen = sorted(seen)
    w = rng.dirichlet(np.full(n_types, concentration))
    return make_election(m, zip(chosen, w / w.sum()))
