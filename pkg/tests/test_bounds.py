import math

import numpy as np
import pytest

from metricdistortion.bounds import (
    REPORTED_ROWS,
    AdmissibilityError,
    BoundRow,
    LowerBoundParams,
    SingularCaseError,
    beta,
    beta_limit,
    beta_numeric,
    bisect_root,
    build_lower_bound_election,
    case_objective,
    case_objective_numeric,
    clevermatrix_bound,
    in_case_region,
    is_admissible,
    m_inverse_column_sums,
    mandplu,
    optimize_beta,
    reported_row,
    table_csv,
    ub_0123_constants,
)
from metricdistortion.election import comparisons_matrix, plurality_vector
from metricdistortion.mechanisms import lp_b_lottery


def _table_params(row):
    m, a, b, c = row[:4]
    return LowerBoundParams(a, b, c, m - 3)


def _random_admissible(rng, k):
    while True:
        a, b, c = rng.random(), rng.random() * 0.5, rng.random() * 0.5
        p = LowerBoundParams(a, b, c if k else None, k)
        if is_admissible(p):
            return p


@pytest.mark.parametrize("m", range(3, 9))
def test_construction_matches_target_statistics(m):
    row = reported_row(m)
    e = build_lower_bound_election(m, _table_params(row))
    M, plu = mandplu(m, row[1], row[2], row[3])
    assert np.allclose(comparisons_matrix(e), M, atol=1e-12)
    assert np.allclose(plurality_vector(e), plu, atol=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize("m", [9, 10])
def test_construction_matches_target_statistics_large(m):
    row = reported_row(m)
    e = build_lower_bound_election(m, _table_params(row))
    M, plu = mandplu(m, row[1], row[2], row[3])
    assert np.allclose(comparisons_matrix(e), M, atol=1e-12)
    assert np.allclose(plurality_vector(e), plu, atol=1e-12)


@pytest.mark.parametrize("k", [0, 1, 2, 3, 5, 9])
def test_column_sums_against_numeric_inverse(k, rng):
    for _ in range(40):
        p = _random_admissible(rng, k)
        M, _ = mandplu(k + 3, p.a, p.b, p.c)
        expected = np.ones(k + 3) @ np.linalg.inv(M)
        assert np.allclose(m_inverse_column_sums(p), expected, rtol=1e-9, atol=1e-9)


@pytest.mark.parametrize("k", [0, 1, 2, 4, 7, 20])
def test_beta_against_numeric(k, rng):
    for _ in range(40):
        p = _random_admissible(rng, k)
        assert beta(p) == pytest.approx(beta_numeric(k + 3, p), rel=1e-9)


def test_beta_limit_is_limit(rng):
    for _ in range(20):
        p = _random_admissible(rng, 1)
        big = beta(LowerBoundParams(p.a, p.b, p.c, 10**8))
        assert beta_limit(p.a, p.b, p.c) == pytest.approx(big, rel=1e-6)


@pytest.mark.parametrize("row", REPORTED_ROWS, ids=lambda r: f"m={r[0]}")
def test_closed_form_at_reported_parameters(row):
    m, a, b, c, reported_beta, reported_lb = row
    value = beta(LowerBoundParams(a, b, c, m - 3))
    assert value == pytest.approx(reported_beta, abs=1e-5)
    assert BoundRow(m, a, b, c, value).distortion_lb == pytest.approx(reported_lb, abs=1e-5)


@pytest.mark.parametrize("m", [3, 4, 5])
def test_lp_b_attains_closed_form(m):
    row = reported_row(m)
    e = build_lower_bound_election(m, _table_params(row))
    assert lp_b_lottery(e).beta == pytest.approx(beta(_table_params(row)), abs=1e-7)


def test_m4_lottery_block_proportion():
    a, b, c = 0.459994, 0.406749, 0.363254
    e = build_lower_bound_election(4, LowerBoundParams(a, b, c, 1))
    w = dict(zip(e.rankings, e.weights))
    assert w[(1, 4, 3, 2)] == pytest.approx(a * (1 - c) / (a + b))
    assert w[(1, 4, 3, 2)] == pytest.approx(0.337931, abs=1e-6)


def test_reported_distortions_increase_with_m():
    lbs = [row[5] for row in REPORTED_ROWS]
    assert all(x < y for x, y in zip(lbs, lbs[1:]))


@pytest.mark.parametrize("k", [0, 1])
def test_optimizer_reproduces_rows(k):
    row = optimize_beta(k)
    ref = reported_row(k + 3)
    assert row.beta == pytest.approx(ref[4], abs=1e-5)
    assert row.distortion_lb == pytest.approx(ref[5], abs=1e-5)


def test_optimizer_limit_row():
    row = optimize_beta(math.inf)
    assert math.isinf(row.m)
    assert row.beta == pytest.approx(1.79753, abs=1e-5)


@pytest.mark.parametrize(
    "params",
    [
        LowerBoundParams(0.3, 0.3, 0.3, 1),
        LowerBoundParams(0.7, 0.4, None, 0),
        LowerBoundParams(0.4, 0.55, None, 0),
        LowerBoundParams(0.4, 0.3, 0.6, 1),
        LowerBoundParams(0.4, 0.3, None, 1),
        LowerBoundParams(0.0, 0.3, None, 0),
    ],
)
def test_inadmissible_parameters_rejected(params):
    assert not is_admissible(params)
    with pytest.raises(AdmissibilityError):
        beta(params)


def test_table_csv_format():
    text = table_csv([BoundRow(3, 0.473356, 0.423961, None, 1.949074), BoundRow(math.inf, 0.4, 0.4, 0.4, 1.8)])
    lines = text.splitlines()
    assert lines[0] == "m,a,b,c,beta,distortion_lb"
    assert lines[1] == "3,0.473356,0.423961,,1.94907,2.02613"
    assert lines[2].startswith("inf,")


# -- case analysis ------------------------------------------------------------


def _region_points(rng, case, n):
    pts = []
    while len(pts) < n:
        x, y, z = rng.random(3)
        if in_case_region(case, x, y, z) and x * y * z + (1 - x) * (1 - y) * (1 - z) > 1e-3:
            pts.append((x, y, z))
    return pts


@pytest.mark.parametrize("case", ["I", "II", "III"])
def test_case_closed_form_against_numeric(case, rng):
    for x, y, z in _region_points(rng, case, 200):
        assert case_objective(case, x, y, z) == pytest.approx(
            case_objective_numeric(case, x, y, z), rel=1e-9, abs=1e-9
        )


def test_case_spot_values():
    r6 = math.sqrt(6)
    assert case_objective("I", 0.5, 3 - r6, r6 - 2) == pytest.approx(r6 - 0.5, abs=1e-12)
    assert case_objective("II", 1 / 3, 1 / 3, 1 / 3) == pytest.approx(2, abs=1e-12)
    for x in np.linspace(0.05, 0.95, 19):
        assert case_objective("III", x, 1 - x, 1 - x) == pytest.approx(1 / (x * (1 - x)) - 2, abs=1e-9)


def test_case_local_minima_are_stationary():
    r6 = math.sqrt(6)
    for case, point in (("I", (0.5, 3 - r6, r6 - 2)), ("II", (1 / 3, 1 / 3, 1 / 3))):
        h = 1e-6
        for axis in range(3):
            lo, hi = list(point), list(point)
            lo[axis] -= h
            hi[axis] += h
            grad = (case_objective(case, *hi) - case_objective(case, *lo)) / (2 * h)
            assert abs(grad) < 1e-6


def test_case_boundary_point_of_m3_instance():
    # the m = 3 table election sits in the Case II region at (a, 1 - a, b)
    a, b = 0.473356, 0.423961
    assert in_case_region("II", a, 1 - a, b)
    assert case_objective("II", a, 1 - a, b) == pytest.approx(1.94907, abs=1e-5)


def test_singular_case_raises():
    with pytest.raises(SingularCaseError):
        case_objective("I", 1.0, 0.0, 1.0)


# -- constants ----------------------------------------------------------------


def test_upper_bound_constants():
    k = ub_0123_constants()
    assert k.y_star**3 - k.y_star**2 + 2 * k.y_star - 1 == pytest.approx(0, abs=1e-12)
    assert 1 + math.sqrt(k.y_star) == pytest.approx(1 / k.y_star, abs=1e-10)
    assert k.y_star == pytest.approx(0.569840, abs=1e-6)
    assert k.objective_lb == pytest.approx(1.754878, abs=1e-6)
    assert k.distortion_ub == pytest.approx(2.139681, abs=1e-6)
    assert k.improved_objective_lb == pytest.approx((5 + math.sqrt(31)) / 6, abs=1e-12)
    assert k.improved_distortion_ub == pytest.approx(1 + 12 / (5 + math.sqrt(31)), abs=1e-12)


def test_bisect_root():
    assert bisect_root(lambda x: x * x - 2, 0, 2) == pytest.approx(math.sqrt(2), abs=1e-13)
    with pytest.raises(ValueError):
        bisect_root(lambda x: x * x + 1, 0, 1)


def test_clevermatrix_bound():
    assert clevermatrix_bound([0, 0]) == 2
    assert clevermatrix_bound([1, 0]) == 1
    with pytest.raises(ValueError):
        clevermatrix_bound([1, 1])
