"""Lower-bound elections and the closed-form quantities around them.

The family is parameterized by ``(a, b, c, k)`` with ``m = k + 3``: the
comparisons matrix has first row ``a``, second row ``b``, third row ``c``
above the diagonal and ``1/2`` between the last ``k`` candidates, and the
plurality vector is ``(a, b, 1 - a - b, 0, ..., 0)``. For admissible
parameters ``1^T M^{-1} (1 - plu)`` upper-bounds the comparisons-matrix LP,
giving the distortion lower bound ``1 + 2 / beta``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np
from scipy.optimize import minimize

from .election import Election, make_election

ADMISSIBILITY_MARGIN = 1e-9
MAX_EXPLICIT_M = 10

# Reported rows (m, a, b, c, beta, distortion); c is None for m = 3.
REPORTED_ROWS = (
    (3, 0.473356, 0.423961, None, 1.94907, 2.02613),
    (4, 0.459994, 0.406749, 0.363254, 1.90554, 2.04957),
    (5, 0.452953, 0.400474, 0.373050, 1.88106, 2.06323),
    (6, 0.448571, 0.397287, 0.378427, 1.86556, 2.07206),
    (7, 0.445576, 0.395377, 0.381835, 1.85490, 2.07822),
    (8, 0.443396, 0.394112, 0.38419, 1.84712, 2.08276),
    (9, 0.441738, 0.393215, 0.385916, 1.84120, 2.08625),
    (10, 0.440434, 0.392546, 0.387236, 1.83654, 2.08900),
    (50, 0.431584, 0.388789, 0.395418, 1.80493, 2.10807),
    (100, 0.430538, 0.388426, 0.396305, 1.80121, 2.11036),
    (1000, 0.429608, 0.388115, 0.397081, 1.79790, 2.11241),
    (math.inf, 0.429505, 0.388082, 0.397166, 1.79753, 2.11264),
)


class AdmissibilityError(ValueError):
    pass


@dataclass(frozen=True)
class LowerBoundParams:
    a: float
    b: float
    c: float | None = None
    k: int | float = 0  # math.inf for the limit

    @property
    def m(self) -> int | float:
        return self.k + 3

    @property
    def c_value(self) -> float:
        return 0.0 if self.c is None or self.k == 0 else float(self.c)


@dataclass(frozen=True)
class BoundRow:
    m: int | float
    a: float
    b: float
    c: float | None
    beta: float

    @property
    def distortion_lb(self) -> float:
        return 1.0 + 2.0 / self.beta


def admissibility_violations(params: LowerBoundParams) -> list[str]:
    a, b, c, k = params.a, params.b, params.c_value, params.k
    eps = ADMISSIBILITY_MARGIN
    problems = []
    if not (eps < a < 1 - eps and eps < b < 1 - eps):
        problems.append("a and b must lie in (0, 1)")
        return problems
    if k != 0 and (params.c is None or not eps < params.c < 1 - eps):
        problems.append("c must lie in (0, 1) when m >= 4")
        return problems
    if a + b > 1 + eps:
        problems.append("a + b must be at most 1")
    if not b < 0.5 - eps:
        problems.append("b must be < 1/2")
    if k != 0:
        if not c < 0.5 - eps:
            problems.append("c must be < 1/2")
        if a + b + c < 1 - eps:
            problems.append("a + b + c must be >= 1")
    if not 1 - 2 * c * (1 - c) > b * (1 - b) / (1 - a) + eps:
        problems.append("1 - 2c(1 - c) must exceed b(1 - b)/(1 - a)")
    return problems


def check_admissible(params: LowerBoundParams) -> None:
    problems = admissibility_violations(params)
    if problems:
        raise AdmissibilityError("admissibility violated: " + "; ".join(problems))


def is_admissible(params: LowerBoundParams) -> bool:
    return not admissibility_violations(params)


def mandplu(m: int, a: float, b: float, c: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """The target comparisons matrix and plurality vector of the family."""
    M = np.full((m, m), 0.5)
    M[0, 1:] = a
    M[1:, 0] = 1 - a
    M[1, 2:] = b
    M[2:, 1] = 1 - b
    if m > 3:
        M[2, 3:] = c
        M[3:, 2] = 1 - c
    np.fill_diagonal(M, 0.0)
    plu = np.zeros(m)
    plu[:3] = a, b, 1 - a - b
    return M, plu


def build_lower_bound_election(m: int, params: LowerBoundParams) -> Election:
    """Explicit profile whose statistics match the family (``3 <= m <= 10``)."""
    if not 3 <= m <= MAX_EXPLICIT_M:
        raise ValueError(f"explicit construction supports 3 <= m <= {MAX_EXPLICIT_M}, got {m}")
    if params.k != m - 3:
        params = LowerBoundParams(params.a, params.b, params.c, m - 3)
    check_admissible(params)
    a, b = params.a, params.b
    if m == 3:
        profile = [((1, 3, 2), a), ((2, 3, 1), b), ((3, 2, 1), 1 - a - b)]
        return make_election(3, [(r, w) for r, w in profile if w > 0])

    c = params.c
    share = (1 - c) / (a + b)
    # "4" below stands for the block of candidates 4..m
    skeleton = [
        ((1, 4, 3, 2), a * share),
        ((1, 3, 4, 2), a * (1 - share)),
        ((2, 4, 3, 1), b * share),
        ((2, 3, 4, 1), b * (1 - share)),
        ((3, 4, 2, 1), 1 - a - b),
    ]
    blocks = list(permutations(range(4, m + 1)))
    profile = []
    for ranking, weight in skeleton:
        if weight <= 0:
            continue
        for block in blocks:
            expanded = []
            for c_ in ranking:
                expanded.extend(block if c_ == 4 else (c_,))
            profile.append((tuple(expanded), weight / len(blocks)))
    return make_election(m, profile)


def _k_terms(params: LowerBoundParams):
    k = params.k
    c = params.c_value
    return k, c, (k + 1) - 2 * k * c * (1 - c)


def m_inverse_column_sums(params: LowerBoundParams) -> np.ndarray:
    """Closed-form column sums ``1^T M^{-1}`` of the family's comparisons matrix."""
    check_admissible(params)
    if math.isinf(params.k):
        raise ValueError("column sums need a finite k")
    a, b = params.a, params.b
    k, c, denom = _k_terms(params)
    k = int(k)
    sums = [
        -(k + 1) * b * (1 - b) / (a * (1 - a)) + denom / a,
        ((k + 1) * (1 - b) - 2 * k * c * (1 - c)) / (1 - a),
        b * ((k + 1) - 2 * k * c) / (1 - a),
    ] + [2 * b * c / (1 - a)] * k
    return np.asarray(sums) / denom


def beta(params: LowerBoundParams) -> float:
    """Closed form of ``1^T M^{-1} (1 - plu)`` for the family."""
    check_admissible(params)
    if math.isinf(params.k):
        return beta_limit(params.a, params.b, params.c)
    a, b = params.a, params.b
    k, c, denom = _k_terms(params)
    first = (-(k + 1) * b * (1 - b) + denom * (1 - a)) / a
    second = (
        (k + 1) * (1 - b) ** 2
        - 2 * k * c * (1 - c) * (1 - b)
        + b * ((k + 1) - 2 * k * c) * (a + b)
        + 2 * k * b * c  # columns 4..m, each weighted by 1 - plu = 1
    ) / (1 - a)
    return (first + second) / denom


def beta_limit(a: float, b: float, c: float) -> float:
    """Limit of :func:`beta` as ``k`` grows without bound."""
    check_admissible(LowerBoundParams(a, b, c, math.inf))
    q = 1 - 2 * c * (1 - c)
    first = (-b * (1 - b) + q * (1 - a)) / a
    second = ((1 - b) ** 2 - 2 * c * (1 - c) * (1 - b) + b * (1 - 2 * c) * (a + b) + 2 * b * c) / (1 - a)
    return (first + second) / q


def beta_numeric(m: int, params: LowerBoundParams) -> float:
    M, plu = mandplu(m, params.a, params.b, params.c)
    return float(np.ones(m) @ np.linalg.solve(M, 1 - plu))


# -- optimization -------------------------------------------------------------


def grid_then_nelder_mead(f, lower, upper, step=0.02, n_starts=5, tol=1e-10):
    """Minimize ``f`` (``inf`` outside the feasible set) over a box.

    Evaluates a regular grid, then refines the best ``n_starts`` grid points
    with Nelder-Mead and returns ``(x, f(x))`` of the best refinement.
    """
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    axes = [np.arange(lo + step / 2, hi, step) for lo, hi in zip(lower, upper)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, lower.size)
    values = np.array([f(x) for x in grid])
    finite = np.flatnonzero(np.isfinite(values))
    if finite.size == 0:
        raise RuntimeError("no feasible grid point")
    starts = finite[np.argsort(values[finite], kind="stable")[:n_starts]]
    best_x, best_f = None, math.inf
    for s in starts:
        res = minimize(
            f,
            grid[s],
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": tol, "maxiter": 20000, "maxfev": 40000, "adaptive": True},
        )
        if res.fun < best_f:
            best_x, best_f = np.asarray(res.x), float(res.fun)
    return best_x, best_f


def _beta_objective(k):
    def f(v):
        if k == 0:
            params = LowerBoundParams(v[0], v[1], None, 0)
        else:
            params = LowerBoundParams(v[0], v[1], v[2], k)
        if not is_admissible(params):
            return math.inf
        return beta(params)

    return f


def optimize_beta(k: int | float) -> BoundRow:
    """Minimize ``beta`` over the admissible region for ``m = k + 3`` (``k`` may be ``inf``)."""
    if k == 0:
        x, val = grid_then_nelder_mead(_beta_objective(0), [0, 0], [1, 0.5])
        return BoundRow(3, float(x[0]), float(x[1]), None, val)
    x, val = grid_then_nelder_mead(_beta_objective(k), [0, 0, 0], [1, 0.5, 0.5])
    return BoundRow(k + 3, float(x[0]), float(x[1]), float(x[2]), val)


def table_rows(ms) -> list[BoundRow]:
    return [optimize_beta(m - 3) for m in ms]


def table_csv(rows) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["m", "a", "b", "c", "beta", "distortion_lb"])
    for row in rows:
        m = "inf" if math.isinf(row.m) else str(int(row.m))
        c = "" if row.c is None else f"{row.c:.6g}"
        writer.writerow([m, f"{row.a:.6g}", f"{row.b:.6g}", c, f"{row.beta:.6g}", f"{row.distortion_lb:.6g}"])
    return out.getvalue()


def reported_row(m) -> tuple | None:
    for row in REPORTED_ROWS:
        if row[0] == m:
            return row
    return None


# -- three-candidate case analysis --------------------------------------------

CASES = ("I", "II", "III")


def case_matrix(x: float, y: float, z: float) -> np.ndarray:
    return np.array([[0, x, 1 - y], [1 - x, 0, z], [y, 1 - z, 0]], dtype=float)


def case_plurality(case: str, x: float, y: float, z: float) -> np.ndarray:
    if case == "I":
        return np.array([1 - y, z, y - z])
    if case == "II":
        return np.array([x, z, 1 - (x + z)])
    if case == "III":
        return np.array([x, 1 - x, 0.0])
    raise ValueError(f"unknown case {case!r}")


def in_case_region(case: str, x: float, y: float, z: float, tol: float = 1e-12) -> bool:
    if min(x, y, z) < -tol or max(x, y, z) > 1 + tol:
        return False
    if case == "I":
        return x + y >= 1 - tol and x + z <= 1 + tol and y >= z - tol
    if case == "II":
        return x + y <= 1 + tol and x + z <= 1 + tol and x + y + z >= 1 - tol
    if case == "III":
        return x + y <= 1 + tol and x + z >= 1 - tol
    raise ValueError(f"unknown case {case!r}")


class SingularCaseError(ValueError):
    pass


def case_objective(case: str, x: float, y: float, z: float) -> float:
    """Closed-form ``1^T M^{-1} (1 - plu)`` for one of the three support patterns."""
    det = x * y * z + (1 - x) * (1 - y) * (1 - z)
    if det <= 1e-12:
        raise SingularCaseError(f"comparisons matrix is singular at {(x, y, z)}")
    if case == "I":
        num = x**2 * (-y + z + 1) - x * (y - z - 1) * (y + z - 2) + y * (2 * y - 3) + (z - 1) * z + 2
    elif case == "II":
        num = x**2 * (y + z - 1) + x**3 + x * (-y * z + z - 1) - (y * (z - 1) - 2 * z) * (y + z) - 2 * y - 3 * z + 2
    elif case == "III":
        num = x**2 * (y - z + 2) + x * ((y - 1) * y - (z - 3) * z - 3) + y * (z - 1) + (z - 2) * z + 2
    else:
        raise ValueError(f"unknown case {case!r}")
    return num / det


def case_objective_numeric(case: str, x: float, y: float, z: float) -> float:
    M = case_matrix(x, y, z)
    plu = case_plurality(case, x, y, z)
    return float(np.ones(3) @ np.linalg.solve(M, 1 - plu))


def minimize_case(case: str) -> tuple[np.ndarray, float]:
    """Minimum of the case objective over its region."""
    if case not in CASES:
        raise ValueError(f"unknown case {case!r}")

    def f(v):
        x, y, z = v
        if not in_case_region(case, x, y, z, tol=0.0):
            return math.inf
        try:
            return case_objective(case, x, y, z)
        except SingularCaseError:
            return math.inf

    return grid_then_nelder_mead(f, [0, 0, 0], [1, 1, 1])


# -- constants for the comparisons-matrix LP ----------------------------------


def bisect_root(f, lo: float, hi: float, tol: float = 1e-14) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise ValueError("no sign change on the bracket")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


@dataclass(frozen=True)
class UpperBoundConstants:
    y_star: float
    objective_lb: float
    distortion_ub: float
    improved_objective_lb: float
    improved_distortion_ub: float


def ub_0123_constants() -> UpperBoundConstants:
    """Where ``1 + sqrt(y)`` meets ``1 / y`` (and the sharper variant's meeting point).

    ``y = 1 - ||plu||^2``. The sharper variant replaces ``1 / y`` with
    ``3 (1 - y) + 1/2``; with ``s = sqrt(y)`` that is ``3 s^2 + s - 5/2 = 0``.
    """
    y_star = bisect_root(lambda y: y**3 - y**2 + 2 * y - 1, 0.0, 1.0)
    objective = 1.0 / y_star
    s = (-1 + math.sqrt(1 + 4 * 3 * 2.5)) / 6
    improved = 1 + s
    return UpperBoundConstants(y_star, objective, 1 + 2 / objective, improved, 1 + 2 / improved)


def clevermatrix_bound(x) -> float:
    """Lower bound ``1 + sqrt(1 - ||x||^2)`` on ``sum(p)`` when ``M p = 1 - x``."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    sq = float(x @ x)
    if math.sqrt(sq) > 1 + 1e-12:
        raise ValueError(f"||x|| = {math.sqrt(sq)} exceeds 1")
    return 1.0 + math.sqrt(max(0.0, 1.0 - sq))
