"""Dense linear-algebra kernels shared by the rest of the package.

Matrices are plain ``numpy.ndarray`` objects of dtype ``float64``. The helpers
here add the checks the solvers rely on (finite entries, orthonormal factors,
a deterministic sign convention for singular vectors) on top of NumPy/LAPACK.

Random numbers come from NumPy's ``PCG64`` bit generator seeded through a
``SeedSequence``; normal variates use NumPy's ziggurat sampler. A seed may be a
single non-negative integer or a tuple of them, which is how independent
streams (one per probe vector, one per trial) are split off a base seed.
"""

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .errors import InvalidInputError, NumericalFailure

Seed = Union[int, Sequence[int]]

#: Sweep cap for the Jacobi SVD fallback.
MAX_SVD_SWEEPS = 100


def as_matrix(m, name="matrix"):
    """Return ``m`` as a finite 2-D float64 array or raise InvalidInputError."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return a


def as_vector(x, name="vector"):
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise InvalidInputError(f"{name} must be 1-D, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise InvalidInputError(f"{name} has non-finite entries")
    return v


@dataclass(frozen=True)
class SvdFactors:
    """Thin SVD ``m = u @ diag(sigma) @ v.T`` with orthonormal ``u`` and ``v``."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    @property
    def k(self):
        return self.sigma.shape[0]

    def reconstruct(self):
        return (self.u * self.sigma) @ self.v.T


def orthonormality_error(q):
    """Spectral norm of ``q.T @ q - I``."""
    q = np.asarray(q, dtype=np.float64)
    if q.shape[1] == 0:
        return 0.0
    return spectral_norm(q.T @ q - np.eye(q.shape[1]))


def householder_qr(m):
    """Thin QR factorization by Householder reflections.

    Parameters
    ----------
    m : array_like, shape (rows, cols)
        Input with ``rows >= cols``.

    Returns
    -------
    q : ndarray, shape (rows, cols)
        Orthonormal columns. When a column of ``m`` is linearly dependent on
        the previous ones, the matching column of ``q`` is still a valid
        orthonormal direction and ``r`` carries a zero on its diagonal.
    r : ndarray, shape (cols, cols)
        Upper triangular, ``q @ r == m``.
    """
    a = as_matrix(m)
    rows, cols = a.shape
    if rows < cols:
        raise InvalidInputError(f"householder_qr needs rows >= cols, got {a.shape}")
    r = a.copy()
    reflectors = []
    for j in range(cols):
        x = r[j:, j]
        alpha = np.linalg.norm(x)
        if alpha == 0.0:
            reflectors.append(None)
            continue
        # reflect onto -sign(x0)*|x| e1 to avoid cancellation
        if x[0] > 0:
            alpha = -alpha
        w = x.copy()
        w[0] -= alpha
        w /= np.linalg.norm(w)
        r[j:, j:] -= 2.0 * np.outer(w, w @ r[j:, j:])
        r[j + 1:, j] = 0.0
        reflectors.append(w)

    q = np.zeros((rows, cols))
    q[np.arange(cols), np.arange(cols)] = 1.0
    for j in range(cols - 1, -1, -1):
        w = reflectors[j]
        if w is not None:
            q[j:, j:] -= 2.0 * np.outer(w, w @ q[j:, j:])
    return q, np.triu(r[:cols])


def _fix_signs(u, v):
    # largest-magnitude entry of each left singular vector made positive
    if u.shape[1] == 0:
        return u, v
    idx = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[idx, np.arange(u.shape[1])])
    signs[signs == 0] = 1.0
    return u * signs, v * signs


def _complete_columns(u, good):
    """Replace columns of ``u`` not flagged in ``good`` by an orthonormal
    completion of the flagged ones."""
    rows = u.shape[0]
    out = u.copy()
    basis = [out[:, i] for i in np.flatnonzero(good)]
    candidates = iter(np.eye(rows))
    for i in np.flatnonzero(~good):
        while True:
            e = next(candidates)
            for _ in range(2):
                for b in basis:
                    e = e - b * (b @ e)
            nrm = np.linalg.norm(e)
            if nrm > 0.5:
                out[:, i] = e / nrm
                basis.append(out[:, i])
                break
    return out


def jacobi_svd(m, max_sweeps=MAX_SVD_SWEEPS):
    """One-sided (Hestenes) Jacobi SVD, used when LAPACK fails to converge.

    Raises
    ------
    NumericalFailure
        If the columns are not mutually orthogonal after ``max_sweeps`` sweeps.
    """
    a = as_matrix(m)
    transposed = a.shape[0] < a.shape[1]
    if transposed:
        a = a.T
    rows, cols = a.shape
    w = a.copy()
    v = np.eye(cols)
    tol = cols * np.finfo(float).eps
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for i in range(cols - 1):
            for j in range(i + 1, cols):
                alpha = w[:, i] @ w[:, i]
                beta = w[:, j] @ w[:, j]
                gamma = w[:, i] @ w[:, j]
                if abs(gamma) <= tol * np.sqrt(alpha * beta) or gamma == 0.0:
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = np.copysign(1.0, zeta) / (abs(zeta) + np.hypot(1.0, zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                wi, wj = w[:, i].copy(), w[:, j]
                w[:, i] = c * wi - s * wj
                w[:, j] = s * wi + c * wj
                vi, vj = v[:, i].copy(), v[:, j]
                v[:, i] = c * vi - s * vj
                v[:, j] = s * vi + c * vj
        if not rotated:
            break
    else:
        raise NumericalFailure("Jacobi SVD did not converge", max_sweeps)

    sigma = np.linalg.norm(w, axis=0)
    order = np.argsort(-sigma, kind="stable")
    sigma, w, v = sigma[order], w[:, order], v[:, order]
    good = sigma > 0
    u = np.zeros_like(w)
    u[:, good] = w[:, good] / sigma[good]
    if not np.all(good):
        u = _complete_columns(u, good)
    if transposed:
        u, v = v, u
    return u, sigma, v


def svd_dense(m, method="lapack"):
    """Thin SVD with a deterministic sign convention.

    ``method="lapack"`` calls LAPACK through NumPy and falls back to
    :func:`jacobi_svd` if it fails to converge; ``method="jacobi"`` uses the
    Jacobi path directly. Each singular pair is signed so that the
    largest-magnitude entry of the left vector is positive.
    """
    a = as_matrix(m)
    k = min(a.shape)
    if k == 0:
        return SvdFactors(np.zeros((a.shape[0], 0)), np.zeros(0), np.zeros((a.shape[1], 0)))
    if method == "lapack":
        try:
            u, s, vt = np.linalg.svd(a, full_matrices=False)
            v = vt.T
        except np.linalg.LinAlgError:
            u, s, v = jacobi_svd(a)
    elif method == "jacobi":
        u, s, v = jacobi_svd(a)
    else:
        raise InvalidInputError(f"unknown SVD method {method!r}")
    u, v = _fix_signs(u, v)
    return SvdFactors(u, s, v)


def singular_values(m):
    a = as_matrix(m)
    if min(a.shape) == 0:
        return np.zeros(0)
    return np.linalg.svd(a, compute_uv=False)


def spectral_norm(m):
    """Largest singular value (0 for an empty or zero matrix)."""
    s = singular_values(m)
    return float(s[0]) if s.size else 0.0


def gaussian_matrix(rows, cols, seed):
    """Matrix of i.i.d. standard normal entries, reproducible per ``seed``.

    ``seed`` is an integer or a tuple of integers fed to ``numpy.random.SeedSequence``.
    """
    if rows < 1 or cols < 1:
        raise InvalidInputError(f"gaussian_matrix needs positive dimensions, got ({rows}, {cols})")
    return rng(seed).standard_normal((rows, cols))


def rng(seed):
    """PCG64 generator for ``seed`` (int or tuple of ints)."""
    if isinstance(seed, np.random.Generator):
        return seed
    entropy = [int(s) for s in seed] if isinstance(seed, (tuple, list)) else int(seed)
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))
