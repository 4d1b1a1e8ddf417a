"""Experiment drivers shared by the command-line harness, the tests and the demos.

Nothing here is needed to solve a TLS problem; these functions run the solver
on the test problems, time it, compare against reference solutions and count
violations of the probabilistic bounds.
"""

import time
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bounds import bound_report, gu_range_bound
from .errors import InvalidTruncationError, NongenericProblemError
from .linalg import singular_values, spectral_norm
from .operators import synthetic_operator
from .rangefinder import RangeFinderConfig, fixed_rank_rangefinder
from .tls import classical_tls, partial_svd_tls, solve_randomized_tls, truncated_tls

#: Oversampling assumed when reading an adaptive rank as ``k + s``.
ADAPTIVE_OVERSAMPLE = 5


@dataclass(frozen=True)
class RunRecord:
    """One solver run. ``err_classical`` is ``None`` without a baseline."""

    problem: str
    n: int
    epsilon: float
    seed: object
    rank: int
    err_classical: Optional[float]
    err_true: float
    residual: float
    time_s: float


def relative_error(x, ref):
    return float(np.linalg.norm(x - ref) / np.linalg.norm(ref))


def reference_solution(problem, baseline="classical", t=None):
    """Reference solution ``x*`` for ``problem`` and the label of its source.

    ``baseline="classical"`` uses the dense TLS solution. On the severely
    ill-posed problems ``sigma_n(A)`` sits at rounding level, the dense TLS
    problem is numerically nongeneric and ``x_true`` is used instead; for a
    consistent ``b = A x_true`` that is the exact TLS solution.
    ``baseline="truncated"`` uses truncated TLS at level ``t`` with the same
    fallback.
    """
    if baseline == "none":
        return None, "none"
    a = problem.matrix()
    try:
        if baseline == "truncated":
            return truncated_tls(a, problem.b, min(t, a.shape[1])).x, "truncated"
        return classical_tls(a, problem.b).x, "classical"
    except (NongenericProblemError, InvalidTruncationError):
        return problem.x_true, "x_true"


def run_once(problem, cfg, reference=None):
    """Solve ``problem`` once and measure it against ``reference`` and ``x_true``."""
    start = time.perf_counter()
    sol = solve_randomized_tls(problem.op, problem.b, cfg)
    elapsed = time.perf_counter() - start
    err_ref = None if reference is None else relative_error(sol.x, reference)
    return sol, RunRecord(problem.name, problem.n, cfg.tolerance, cfg.seed, sol.rank, err_ref,
                          relative_error(sol.x, problem.x_true), sol.residual_norm, elapsed)


def run_partial(problem, rank, reference):
    """Deterministic partial-SVD counterpart at ``rank``: ``(err, time)``."""
    a = problem.matrix()
    start = time.perf_counter()
    sol = partial_svd_tls(a, problem.b, rank)
    elapsed = time.perf_counter() - start
    return relative_error(sol.x, reference), elapsed


def range_bound_trials(k=10, s=5, p=0, q=0, delta=0.01, trials=500, n=64, decay=0.7, seed=0):
    """Empirical violation count of the subspace-iteration range bound.

    A fixed synthetic ``n x n`` operator with ``sigma_j = decay**(j-1)`` is
    sampled ``trials`` times with ``k + s`` Gaussian columns and ``q`` power
    iterations. Returns ``(violations, bound, worst_error)``.
    """
    sigma = decay ** np.arange(n)
    op, _ = synthetic_operator(sigma, n, n, (seed, 7919))
    a = op.to_dense()
    bound = gu_range_bound(sigma, k, s, p, q, delta)
    worst, violations = 0.0, 0
    for trial in range(trials):
        cfg = RangeFinderConfig(oversample=s, balance=p, power=q, seed=(seed, trial))
        qb = fixed_rank_rangefinder(op, k, cfg).q_basis
        err = spectral_norm(a - qb @ (qb.T @ a))
        worst = max(worst, err)
        violations += err > bound
    return violations, bound, worst


def residual_bound_check(problem, cfg, sigma=None, s=ADAPTIVE_OVERSAMPLE, delta=0.01):
    """Check the residual bound for one adaptive solve.

    The adaptive rank ``r`` is read as ``k + s`` with ``p = 0``.
    Returns ``(residual, bound)``.
    """
    if sigma is None:
        sigma = singular_values(problem.matrix())
    sol = solve_randomized_tls(problem.op, problem.b, cfg)
    k = max(sol.rank - s, 0)
    s_eff = sol.rank - k
    rep = bound_report(sigma, sol, k, s_eff, 0, cfg.power, delta)
    return sol.residual_norm, rep.residual_bound
