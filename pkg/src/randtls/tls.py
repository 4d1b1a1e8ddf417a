"""Total least squares solvers.

* :func:`solve_core_closed_form` solves the bordered diagonal core problem
  without an SVD of the augmented matrix: ``C = [A11, b1]`` has the explicit
  inverse used below, so ``sigma_min(C) = 1 / ||C^{-1}||`` and
  ``y_i = sigma_i phi_i / (sigma_i^2 - sigma_min^2)``.
* :func:`solve_randomized_tls` is the full randomized core reduction.
* :func:`classical_tls` and :func:`truncated_tls` are the dense SVD baselines.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .corered import CoreProblem, RandSvd, build_core, randomized_svd, DEFAULT_CLUSTER_TOL
from .errors import (
    InvalidInputError,
    InvalidTruncationError,
    NearNongenericError,
    NongenericProblemError,
)
from .linalg import as_matrix, as_vector, singular_values, spectral_norm, svd_dense
from .operators import LinearOperator, dense_operator

#: Relative gap below which the core is declared near-nongeneric.
DEFAULT_GAP_TOL = 1e-12
#: Relative singular-value cutoff for pseudoinverses.
PINV_RCOND = 1e-12


@dataclass(frozen=True)
class TlsSolution:
    """Result of a TLS solve.

    ``sigma_min_core`` is the smallest singular value of the augmented
    (core) matrix, ``gap`` is ``min_i sigma_i^2 - sigma_min_core^2`` over the
    core singular values, and ``residual_norm`` is ``||b - A x||`` measured with
    the operator that was passed in.
    """

    x: np.ndarray
    y: np.ndarray
    sigma_min_core: float
    residual_norm: float
    gap: float
    method: str
    rank: int = 0
    core: Optional[CoreProblem] = field(default=None, repr=False)
    svd: Optional[RandSvd] = field(default=None, repr=False)


def core_inverse(core):
    """Explicit inverse of ``C = [A11, b1]`` for ``phi_tail > 0``."""
    t = core.t
    cinv = np.zeros((t + 1, t + 1))
    cinv[np.arange(t), np.arange(t)] = 1.0 / core.sigma
    cinv[:t, t] = -core.phi / (core.sigma * core.phi_tail)
    cinv[t, t] = 1.0 / core.phi_tail
    return cinv


def solve_core_closed_form(core, gap_tol=DEFAULT_GAP_TOL):
    """Closed-form TLS solution of the core problem.

    Returns ``(y, sigma_min)``. With ``phi_tail == 0`` the core is a square
    diagonal system; then ``sigma_min = 0`` and ``y = phi / sigma``.

    Raises
    ------
    NearNongenericError
        If ``sigma_i^2 - sigma_min^2 <= gap_tol * sigma_i^2`` for some ``i``,
        i.e. ``sigma_min`` agrees with a core singular value to about
        ``-log10(gap_tol)`` digits and ``y_i`` has lost its accuracy.
    """
    if core.t == 0:
        raise InvalidInputError("core problem is empty")
    sigma, phi = core.sigma, core.phi
    if core.phi_tail > 0:
        sigma_min = 1.0 / spectral_norm(core_inverse(core))
    else:
        sigma_min = 0.0
    denom = sigma**2 - sigma_min**2
    gap = float(denom.min())
    if np.any(denom <= gap_tol * sigma**2):
        raise NearNongenericError(
            f"core gap {gap:.3e} within {gap_tol:.1e} relative of a core singular value; "
            "perturb the rank and retry", gap
        )
    return sigma * phi / denom, sigma_min


def back_transform(core, y):
    y = as_vector(y, "y")
    if y.size != core.t:
        raise InvalidInputError(f"y has length {y.size}, core dimension is {core.t}")
    return core.back_map @ y


def _as_operator(a):
    return a if isinstance(a, LinearOperator) else dense_operator(a)


def solve_randomized_tls(op, b, cfg, cluster_tol=DEFAULT_CLUSTER_TOL, gap_tol=DEFAULT_GAP_TOL):
    """Randomized core reduction for ``A x ~ b``.

    Runs :func:`randomized_svd`, :func:`build_core`,
    :func:`solve_core_closed_form` and :func:`back_transform`. An empty core
    (zero operator, or ``b`` orthogonal to the sampled range) gives ``x = 0``.
    """
    op = _as_operator(op)
    b = as_vector(b, "b")
    if b.size != op.nrows:
        raise InvalidInputError(f"b has length {b.size}, operator has {op.nrows} rows")
    svd = randomized_svd(op, cfg)
    return solve_from_svd(op, b, svd, cluster_tol, gap_tol)


def solve_from_svd(op, b, svd, cluster_tol=DEFAULT_CLUSTER_TOL, gap_tol=DEFAULT_GAP_TOL, method="randomized-core"):
    """Core reduction from an already computed (approximate) SVD."""
    op = _as_operator(op)
    core = build_core(svd, b, cluster_tol)
    if core.t == 0:
        y = np.zeros(0)
        x = np.zeros(op.ncols)
        sigma_min, gap = core.phi_tail, float("inf")
    else:
        y, sigma_min = solve_core_closed_form(core, gap_tol)
        x = back_transform(core, y)
        gap = float((core.sigma**2 - sigma_min**2).min())
    residual = float(np.linalg.norm(b - op.apply(x)))
    return TlsSolution(x, y, float(sigma_min), residual, gap, method, svd.rank, core, svd)


def partial_svd_tls(a, b, r, cluster_tol=DEFAULT_CLUSTER_TOL, gap_tol=DEFAULT_GAP_TOL):
    """Core reduction from the exact rank-``r`` truncated SVD of a dense ``a``.

    The deterministic counterpart of :func:`solve_randomized_tls` at the same
    rank.
    """
    a = as_matrix(a)
    f = svd_dense(a)
    r = min(r, f.k)
    svd = RandSvd(f.u[:, :r], f.sigma[:r], f.v[:, :r], f.u[:, :r])
    return solve_from_svd(a, b, svd, cluster_tol, gap_tol, method="partial-svd")


def _augmented_svd(a, b):
    """Singular values (padded to n+1) and full right factor of ``[A, b]``."""
    ab = np.column_stack([a, b])
    m, n1 = ab.shape
    if m < n1:
        # zero rows change neither singular values nor right vectors
        ab = np.vstack([ab, np.zeros((n1 - m, n1))])
    f = svd_dense(ab)
    return f.u, f.sigma, f.v


def _check_system(a, b):
    a = as_matrix(a, "A")
    b = as_vector(b, "b")
    m, n = a.shape
    if b.size != m:
        raise InvalidInputError(f"b has length {b.size}, A has {m} rows")
    if m < n or n < 1:
        raise InvalidInputError(f"need m >= n >= 1, got A of shape {a.shape}")
    return a, b


def classical_tls(a, b, method="closed_form"):
    """Dense TLS solution of ``A x ~ b``.

    ``method="closed_form"`` solves ``(A^T A - s^2 I) x = A^T b`` with ``s``
    the smallest singular value of ``[A, b]``; ``method="vector"`` uses the
    last right singular vector, ``x = -v[:n] / v[n]``.

    Raises
    ------
    NongenericProblemError
        If ``sigma_n(A) <= sigma_{n+1}([A, b])``.
    """
    a, b = _check_system(a, b)
    n = a.shape[1]
    _, sbar, vbar = _augmented_svd(a, b)
    s_min = sbar[n]
    s_a = singular_values(a)[n - 1]
    if not s_a - s_min > 4 * np.finfo(float).eps * sbar[0]:
        raise NongenericProblemError(
            f"sigma_n(A) = {s_a:.3e} does not exceed sigma_(n+1)([A, b]) = {s_min:.3e}"
        )
    if method == "closed_form":
        lhs = a.T @ a - s_min**2 * np.eye(n)
        x = np.linalg.solve(lhs, a.T @ b)
    elif method == "vector":
        v = vbar[:, n]
        x = -v[:n] / v[n]
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    gap = s_a**2 - s_min**2
    return TlsSolution(x, x.copy(), float(s_min), float(np.linalg.norm(b - a @ x)), float(gap), "classical", n)


def _pinv(m):
    return np.linalg.pinv(m, rcond=PINV_RCOND)


def truncated_tls(a, b, t, method="vector"):
    """Truncated TLS: minimum-norm solution of the rank-``t`` approximation of ``[A, b]``.

    Three equivalent formulas are available through ``method``:
    ``"vector"`` (``-V12 pinv(V22)``), ``"transpose"`` (``pinv(V11^T) V21^T``)
    and ``"pinv"`` (``pinv(A_t) b`` with ``A_t`` the first ``n`` columns of the
    rank-``t`` approximation). The pseudoinverse routes are the least accurate.

    Raises
    ------
    InvalidTruncationError
        If ``t`` exceeds ``min(n, rank([A, b]))``, if there is no gap
        ``sigma_{t+1} < sigma_t``, or if ``V22`` vanishes.
    """
    a, b = _check_system(a, b)
    n = a.shape[1]
    ubar, sbar, vbar = _augmented_svd(a, b)
    eps = np.finfo(float).eps
    numrank = int(np.sum(sbar > max(a.shape) * eps * sbar[0]))
    if not 1 <= t <= min(n, numrank):
        raise InvalidTruncationError(f"t = {t} outside [1, min(n, rank[A, b]) = {min(n, numrank)}]")
    if not sbar[t - 1] - sbar[t] > 4 * eps * sbar[0]:
        raise InvalidTruncationError(f"no singular value gap at t = {t}")
    v12 = vbar[:n, t:]
    v22 = vbar[n, t:]
    if np.linalg.norm(v22) <= eps:
        raise InvalidTruncationError(f"V22 vanishes at t = {t}")
    if method == "vector":
        x = -v12 @ v22 / (v22 @ v22)
    elif method == "transpose":
        x = _pinv(vbar[:n, :t].T) @ vbar[n, :t]
    elif method == "pinv":
        at = (ubar[:, :t] * sbar[:t]) @ vbar[:n, :t].T
        x = _pinv(at[: a.shape[0]]) @ b
    else:
        raise InvalidInputError(f"unknown method {method!r}")
    return TlsSolution(x, x.copy(), float(sbar[t]), float(np.linalg.norm(b - a @ x)),
                       float(sbar[t - 1] ** 2 - sbar[t] ** 2), "truncated", t)
