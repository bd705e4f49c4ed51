"""Randomized voting mechanisms and worst-case metric distortion.

Modules: :mod:`.election` (profiles and ordinal statistics), :mod:`.metrics`
(consistent metric families and closure validation), :mod:`.lp` (dense
simplex), :mod:`.mechanisms` (weight-LP lotteries and dictatorship rules),
:mod:`.adversary` (worst-case metrics, m = 3 optimal lottery) and
:mod:`.bounds` (lower-bound family, table reproduction, case analysis).
"""

from .adversary import (
    AdversaryResult,
    check_biased_dominance,
    optimal_lottery_m3,
    worst_case_distortion,
)
from .bounds import (
    BoundRow,
    LowerBoundParams,
    beta,
    beta_limit,
    build_lower_bound_election,
    case_objective,
    clevermatrix_bound,
    m_inverse_column_sums,
    minimize_case,
    optimize_beta,
    ub_0123_constants,
)
from .election import (
    Election,
    ElectionError,
    coalition_stats,
    comparisons_matrix,
    load_election,
    make_election,
    plurality_vector,
)
from .kernels import BACKEND
from .lp import LpProblem, LpSolution, Status, solve
from .mechanisms import (
    MechanismResult,
    lp_a_lottery,
    lp_b_lottery,
    lp_c_lottery,
    random_dictatorship,
    smart_dictatorship,
)
from .metrics import (
    MetricSpace,
    build_0123,
    build_13,
    build_biased,
    build_generalized_0123,
    distortion,
    social_cost,
    validate_metric,
)

__version__ = "0.1.0"

__all__ = [
    "AdversaryResult",
    "BACKEND",
    "BoundRow",
    "Election",
    "ElectionError",
    "LowerBoundParams",
    "LpProblem",
    "LpSolution",
    "MechanismResult",
    "MetricSpace",
    "Status",
    "beta",
    "beta_limit",
    "build_0123",
    "build_13",
    "build_biased",
    "build_generalized_0123",
    "build_lower_bound_election",
    "case_objective",
    "check_biased_dominance",
    "clevermatrix_bound",
    "coalition_stats",
    "comparisons_matrix",
    "distortion",
    "load_election",
    "lp_a_lottery",
    "lp_b_lottery",
    "lp_c_lottery",
    "m_inverse_column_sums",
    "make_election",
    "minimize_case",
    "optimal_lottery_m3",
    "optimize_beta",
    "plurality_vector",
    "random_dictatorship",
    "smart_dictatorship",
    "social_cost",
    "solve",
    "ub_0123_constants",
    "validate_metric",
    "worst_case_distortion",
    "__version__",
]
