import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from metricdistortion.election import comparisons_matrix, make_election, plurality_vector, random_election
from metricdistortion.mechanisms import (
    FULL_GAP,
    HALF_GAP,
    guarantee_from_beta,
    lp_a_lottery,
    lp_b_lottery,
    lp_c_constraints,
    lp_c_lottery,
    random_dictatorship,
    smart_dictatorship,
    solve_weight_lp,
)
from metricdistortion.metrics import build_0123, distortion


def _0123_family(e):
    return [build_0123(e, i) for i in range(1, e.m + 1)]


def test_lb3_lp_a(lb3):
    res = lp_a_lottery(lb3, _0123_family(lb3))
    assert res.beta == pytest.approx(0.974537, abs=1e-6)
    assert res.guarantee == pytest.approx(2.026128, abs=1e-6)
    assert res.convention == FULL_GAP
    for d in _0123_family(lb3):
        assert distortion(lb3, d, res.lottery) <= res.guarantee + 1e-9


def test_lb3_lp_b_and_c(lb3):
    b = lp_b_lottery(lb3)
    c = lp_c_lottery(lb3)
    assert b.beta == pytest.approx(1.949074, abs=1e-6)
    assert c.beta == pytest.approx(1.949074, abs=1e-6)
    assert b.guarantee == pytest.approx(1 + 2 / 1.949074, abs=1e-6)
    assert b.convention == HALF_GAP
    assert b.scope.startswith("(0,1,2,3)")
    assert c.scope == "all metrics"
    assert len(b.tight_constraints) >= 1


def test_lb3_smart_dictatorship(lb3):
    res = smart_dictatorship(lb3)
    assert res.lottery == pytest.approx([0.513831, 0.420750, 0.065419], abs=1e-5)
    assert res.beta == pytest.approx(1.74924, abs=1e-5)
    plu = plurality_vector(lb3)
    assert res.guarantee == pytest.approx(3 - 2 * plu @ plu)


def test_random_dictatorship(lb3):
    res = random_dictatorship(lb3)
    assert np.allclose(res.lottery, plurality_vector(lb3))
    assert res.guarantee == 3


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_lp_a_over_0123_family_equals_lp_b(m, seed):
    e = random_election(np.random.default_rng(seed), m)
    a = lp_a_lottery(e, _0123_family(e))
    b = lp_b_lottery(e)
    if math.isinf(b.beta):
        assert math.isinf(a.beta)
    else:
        assert a.beta == pytest.approx(b.beta / 2, rel=1e-7, abs=1e-9)
        assert a.guarantee == pytest.approx(b.guarantee, rel=1e-7)


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_lp_c_contains_lp_b_rows(m, seed):
    e = random_election(np.random.default_rng(seed), m)
    A, rhs = lp_c_constraints(e)
    M = comparisons_matrix(e)
    plu = plurality_vector(e)
    for i in range(m):
        bits = 1 << i
        assert np.allclose(A[bits - 1], M[i])
        assert rhs[bits - 1] == pytest.approx(1 - plu[i])
    assert lp_c_lottery(e).beta <= lp_b_lottery(e).beta + 1e-9


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_lotteries_are_distributions(m, seed):
    e = random_election(np.random.default_rng(seed), m)
    for mech in (lp_b_lottery, lp_c_lottery, smart_dictatorship, random_dictatorship):
        p = mech(e).lottery
        assert np.all(p >= 0)
        assert p.sum() == pytest.approx(1.0)


@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_smart_weights_feasible_for_lp_b(m, seed):
    e = random_election(np.random.default_rng(seed), m)
    plu = plurality_vector(e)
    if plu.max() >= 1 - 1e-12:
        return
    q = plu / (1 - plu)
    assert np.all(comparisons_matrix(e) @ q <= 1 - plu + 1e-9)
    assert lp_b_lottery(e).beta >= q.sum() - 1e-9


def test_unanimous_profile_is_unbounded():
    e = make_election(3, [((2, 1, 3), 1.0)])
    for mech in (lp_b_lottery, lp_c_lottery):
        res = mech(e)
        assert math.isinf(res.beta)
        assert res.guarantee == 1.0
        assert np.allclose(res.lottery, [0, 1, 0])
    assert np.allclose(smart_dictatorship(e).lottery, [0, 1, 0])


def test_zero_optimum_falls_back_to_uniform():
    res = solve_weight_lp(np.ones((2, 3)), np.zeros(2), FULL_GAP)
    assert res.beta == 0
    assert math.isinf(res.guarantee)
    assert np.allclose(res.lottery, 1 / 3)


def test_guarantee_conventions():
    assert guarantee_from_beta(2.0, FULL_GAP) == 1.5
    assert guarantee_from_beta(2.0, HALF_GAP) == 2.0
    assert guarantee_from_beta(math.inf, HALF_GAP) == 1.0
    assert math.isinf(guarantee_from_beta(0.0, HALF_GAP))


def test_lp_a_rejects_empty():
    e = make_election(2, [((1, 2), 1.0)])
    with pytest.raises(ValueError):
        lp_a_lottery(e, [])
