"""Randomized SVD and the approximate core problem built from it.

Given ``A ~ U1 diag(sigma1) V1^T`` and a right-hand side ``b``, the core
problem is the bordered diagonal pair

    A11 = [diag(sigma); 0],   b1 = [phi; phi_tail]

where ``phi_j = ||U_j^T b||`` for the block ``U_j`` of left singular vectors
belonging to the ``j``-th distinct singular value and
``phi_tail = ||b - U1 U1^T b||``. Inside a block of equal singular values a
Householder reflection ``S_j`` rotates ``U_j^T b`` onto ``phi_j e_1``; only
the first column of ``S_j`` survives in the core, and since ``S_j`` is
symmetric that column is ``U_j^T b / phi_j``. The solution of the core maps
back to the original coordinates through ``back_map``, whose ``j``-th column
is ``V_j U_j^T b / phi_j``.
"""

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import InvalidInputError
from .linalg import as_vector, svd_dense
from .rangefinder import adaptive_rangefinder, fixed_rank_rangefinder, subspace_iteration

#: Relative tolerance for merging singular values into one group.
DEFAULT_CLUSTER_TOL = 1e-10
#: Groups with ``phi_j <= DROP_TOL * ||b||`` do not enter the core.
DROP_TOL = 1e-14


@dataclass(frozen=True)
class RandSvd:
    u1: np.ndarray
    sigma1: np.ndarray
    v1: np.ndarray
    basis: np.ndarray

    @property
    def rank(self):
        return self.sigma1.shape[0]

    def to_dense(self):
        return (self.u1 * self.sigma1) @ self.v1.T


@dataclass(frozen=True)
class CoreProblem:
    """Approximate core problem ``{A11, b1}`` plus the data to map back.

    ``groups`` lists ``(multiplicity, index)`` for every retained group, where
    ``index`` is the position of the group among all groups of the SVD
    (dropped groups leave gaps).
    """

    sigma: np.ndarray
    phi: np.ndarray
    phi_tail: float
    back_map: np.ndarray
    groups: List[Tuple[int, int]]

    @property
    def t(self):
        return self.sigma.shape[0]

    def augmented(self):
        """The ``(t+1) x (t+1)`` matrix ``C = [A11, b1]``."""
        t = self.t
        c = np.zeros((t + 1, t + 1))
        c[np.arange(t), np.arange(t)] = self.sigma
        c[:t, t] = self.phi
        c[t, t] = self.phi_tail
        return c


def _trim(u, s, v):
    keep = s > max(u.shape[0], v.shape[0]) * np.finfo(float).eps * (s[0] if s.size else 0.0)
    return u[:, keep], s[keep], v[:, keep]


def randomized_svd(op, cfg):
    """Randomized SVD from an orthonormal range basis.

    The basis comes from :func:`adaptive_rangefinder` followed by
    ``cfg.power`` rounds of subspace iteration, or from
    :func:`fixed_rank_rangefinder` when ``cfg.rank`` is set. The small matrix
    ``Q^T A`` is formed through ``A^T Q`` and decomposed densely; singular
    values at rounding level are dropped.
    """
    if cfg.rank is not None:
        basis = fixed_rank_rangefinder(op, cfg.rank, cfg)
    else:
        basis = adaptive_rangefinder(op, cfg)
        basis = subspace_iteration(op, basis, cfg.power)
    q = basis.q_basis
    if q.shape[1] == 0:
        return RandSvd(np.zeros((op.nrows, 0)), np.zeros(0), np.zeros((op.ncols, 0)), q)
    small = op.apply_transpose(q).T
    f = svd_dense(small)
    u1, s1, v1 = _trim(q @ f.u, f.sigma, f.v)
    return RandSvd(u1, s1, v1, q)


def _group_bounds(sigma, cluster_tol):
    starts = [0]
    for i in range(1, sigma.size):
        if sigma[starts[-1]] - sigma[i] > cluster_tol * sigma[starts[-1]]:
            starts.append(i)
    return list(zip(starts, starts[1:] + [sigma.size]))


def build_core(svd, b, cluster_tol=DEFAULT_CLUSTER_TOL, drop_tol=DROP_TOL):
    """Build the approximate core problem of ``svd`` and ``b``.

    Singular values within relative distance ``cluster_tol`` of the leading
    value of their run are merged into one group represented by the group
    mean. Groups whose projected right-hand side is at most
    ``drop_tol * ||b||`` carry no information about the solution and are
    dropped; a ``phi_tail`` below the same level is set to zero.
    """
    b = as_vector(b, "b")
    m = svd.u1.shape[0]
    if b.size == 0 or b.size != m:
        raise InvalidInputError(f"b has length {b.size}, operator has {m} rows")
    if cluster_tol < 0:
        raise InvalidInputError("cluster_tol must be nonnegative")
    bnorm = np.linalg.norm(b)
    c = svd.u1.T @ b
    tail = float(np.linalg.norm(b - svd.u1 @ c))
    if tail <= drop_tol * bnorm:
        tail = 0.0

    sigma, phi, cols, groups = [], [], [], []
    for index, (lo, hi) in enumerate(_group_bounds(svd.sigma1, cluster_tol)):
        cj = c[lo:hi]
        phij = np.linalg.norm(cj)
        if phij <= drop_tol * bnorm:
            continue
        sigma.append(svd.sigma1[lo:hi].mean())
        phi.append(phij)
        cols.append(svd.v1[:, lo:hi] @ (cj / phij))
        groups.append((hi - lo, index))

    n = svd.v1.shape[0]
    back_map = np.column_stack(cols) if cols else np.zeros((n, 0))
    return CoreProblem(np.array(sigma), np.array(phi), tail, back_map, groups)
