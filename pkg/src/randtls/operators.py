"""Linear operators accessed only through products with ``A`` and ``A.T``.

Both :meth:`LinearOperator.apply` and :meth:`LinearOperator.apply_transpose`
accept a single vector or a block of column vectors; block application is
column-wise.
"""

import numpy as np

from .errors import InvalidInputError
from .linalg import SvdFactors, as_matrix, gaussian_matrix, householder_qr


class LinearOperator:
    """Abstract ``nrows x ncols`` operator.

    Subclasses implement ``_matmat`` and ``_rmatmat`` on 2-D blocks.
    """

    def __init__(self, nrows, ncols):
        self.nrows = int(nrows)
        self.ncols = int(ncols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def apply(self, x):
        """Return ``A @ x`` for a vector or a block of columns."""
        return self._dispatch(x, self.ncols, self._matmat)

    def apply_transpose(self, y):
        """Return ``A.T @ y`` for a vector or a block of columns."""
        return self._dispatch(y, self.nrows, self._rmatmat)

    def to_dense(self):
        """Materialize the operator (small instances and tests only)."""
        return self.apply(np.eye(self.ncols))

    @staticmethod
    def _dispatch(x, expected, fn):
        x = np.asarray(x, dtype=np.float64)
        if x.ndim not in (1, 2) or x.shape[0] != expected:
            raise InvalidInputError(f"operand has shape {x.shape}, expected leading dimension {expected}")
        if x.ndim == 1:
            return fn(x[:, None])[:, 0]
        return fn(x)

    def _matmat(self, x):
        raise NotImplementedError

    def _rmatmat(self, y):
        raise NotImplementedError

    def __repr__(self):
        return f"<{type(self).__name__} {self.nrows}x{self.ncols}>"


class DenseOperator(LinearOperator):
    def __init__(self, matrix):
        self.matrix = as_matrix(matrix)
        self.matrix.setflags(write=False)
        super().__init__(*self.matrix.shape)

    def _matmat(self, x):
        return self.matrix @ x

    def _rmatmat(self, y):
        return self.matrix.T @ y

    def to_dense(self):
        return np.array(self.matrix)


class KroneckerOperator(LinearOperator):
    """``left ⊗ right`` applied as ``vec(right @ X @ left.T)`` (column-major vec).

    The Kronecker product itself is never formed.
    """

    def __init__(self, left, right):
        self.left = as_matrix(left, "left factor")
        self.right = as_matrix(right, "right factor")
        self.left.setflags(write=False)
        self.right.setflags(write=False)
        (pl, ql), (pr, qr) = self.left.shape, self.right.shape
        super().__init__(pl * pr, ql * qr)

    def _matmat(self, x):
        return self._two_sided(x, self.left, self.right)

    def _rmatmat(self, y):
        return self._two_sided(y, self.left.T, self.right.T)

    @staticmethod
    def _two_sided(x, left, right):
        k = x.shape[1]
        # column j of x is vec(X_j) with X_j of shape (right.cols, left.cols)
        xs = x.reshape(left.shape[1], right.shape[1], k).transpose(1, 0, 2)
        ys = np.einsum("ia,abk,jb->ijk", right, xs, left, optimize=True)
        return ys.transpose(1, 0, 2).reshape(-1, k)


class SyntheticSpectrumOperator(LinearOperator):
    """``u @ diag(sigma) @ v.T`` with orthonormal ``u`` and ``v`` and a known spectrum."""

    def __init__(self, u, sigma, v):
        self.factors = SvdFactors(as_matrix(u), np.asarray(sigma, dtype=np.float64), as_matrix(v))
        super().__init__(self.factors.u.shape[0], self.factors.v.shape[0])

    def _matmat(self, x):
        f = self.factors
        return f.u @ (f.sigma[:, None] * (f.v.T @ x))

    def _rmatmat(self, y):
        f = self.factors
        return f.v @ (f.sigma[:, None] * (f.u.T @ y))


def dense_operator(m):
    return DenseOperator(m)


def kronecker_operator(left, right):
    return KroneckerOperator(left, right)


def synthetic_operator(sigma, m, n, seed):
    """Random ``m x n`` operator with prescribed singular values.

    The singular vectors are the Q factors of two seeded Gaussian matrices.
    Returns the operator and its exact thin SVD.
    """
    sigma = np.asarray(sigma, dtype=np.float64)
    if sigma.ndim != 1 or sigma.size == 0:
        raise InvalidInputError("sigma must be a non-empty 1-D array")
    if sigma.size > min(m, n):
        raise InvalidInputError(f"{sigma.size} singular values do not fit a {m}x{n} operator")
    if np.any(sigma < 0) or np.any(np.diff(sigma) > 0):
        raise InvalidInputError("sigma must be nonnegative and nonincreasing")
    k = sigma.size
    seeds = seed if isinstance(seed, (tuple, list)) else (seed,)
    u, _ = householder_qr(gaussian_matrix(m, k, (*seeds, 0)))
    v, _ = householder_qr(gaussian_matrix(n, k, (*seeds, 1)))
    op = SyntheticSpectrumOperator(u, sigma, v)
    return op, op.factors
