"""Randomized core reduction for large ill-posed total least squares problems.

The solver touches ``A`` only through products with ``A`` and ``A.T``: an
adaptive randomized range finder with subspace iteration gives an approximate
SVD, the SVD and ``b`` define a small bordered diagonal core problem, and the
core is solved in closed form and mapped back.

>>> import randtls
>>> prob = randtls.make_problem_1d("shaw", 256)
>>> sol = randtls.solve_randomized_tls(prob.op, prob.b, randtls.RangeFinderConfig(seed=1))
"""

__version__ = "0.1.0"

from .bounds import BoundReport, bound_report, c_delta, gu_range_bound, halko_range_bound, power_epsilon
from .corered import CoreProblem, RandSvd, build_core, randomized_svd
from .errors import (
    InvalidInputError,
    InvalidTruncationError,
    NearNongenericError,
    NongenericProblemError,
    NumericalFailure,
    RandTLSError,
    RankOverflowError,
)
from .linalg import SvdFactors, householder_qr, jacobi_svd, singular_values, spectral_norm, svd_dense
from .operators import (
    DenseOperator,
    KroneckerOperator,
    LinearOperator,
    SyntheticSpectrumOperator,
    dense_operator,
    kronecker_operator,
    synthetic_operator,
)
from .problem_io import read_problem, write_problem
from .problems import TestProblem, make_blur, make_gravity_2d, make_problem_1d
from .rangefinder import RangeBasis, RangeFinderConfig, adaptive_rangefinder, fixed_rank_rangefinder, subspace_iteration
from .tls import (
    TlsSolution,
    back_transform,
    classical_tls,
    core_inverse,
    partial_svd_tls,
    solve_core_closed_form,
    solve_from_svd,
    solve_randomized_tls,
    truncated_tls,
)
