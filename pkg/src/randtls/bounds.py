"""Probabilistic error bounds for randomized range finding and the TLS solution.

Singular values are indexed from 1 in the formulas and docstrings, so
``sigma_j`` is ``sigma[j - 1]``. ``k`` is the target rank, ``s`` the
oversampling, ``p`` the balance parameter (``0 <= p <= s``), ``q`` the number
of power iterations and ``delta`` the failure probability.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInputError
from .linalg import SvdFactors


def _spectrum(sigma):
    if isinstance(sigma, SvdFactors):
        sigma = sigma.sigma
    return np.asarray(sigma, dtype=np.float64)


def _sv(sigma, j):
    """1-based access with an informative error."""
    if not 1 <= j <= sigma.size:
        raise InvalidInputError(f"bound needs sigma_{j}, only {sigma.size} singular values available")
    return float(sigma[j - 1])


def c_delta(k, s, p, n, delta):
    """Large-deviation constant of subspace iteration with ``k + s`` samples.

    ``e sqrt(k+s) / (p+1) * (2/delta)^(1/(p+1)) *
    (sqrt(n-k-s+p) + sqrt(k+s) + sqrt(2 log(2/delta)))``
    """
    if not 0 < delta < 1:
        raise InvalidInputError("delta must lie in (0, 1)")
    if not 0 <= p <= s or k < 0 or k + s > n:
        raise InvalidInputError(f"invalid (k, s, p, n) = {(k, s, p, n)}")
    ks = k + s
    return (
        math.e * math.sqrt(ks) / (p + 1)
        * (2.0 / delta) ** (1.0 / (p + 1))
        * (math.sqrt(n - ks + p) + math.sqrt(ks) + math.sqrt(2.0 * math.log(2.0 / delta)))
    )


def power_epsilon(sigma, k, s, p, q, delta, n=None):
    """``C_delta * (sigma_{k+1+s-p} / sigma_k)^(2q)``.

    For ``k = 0`` the ratio is taken as 1; the value only ever enters
    multiplied by ``k``.
    """
    sigma = _spectrum(sigma)
    n = sigma.size if n is None else n
    cd = c_delta(k, s, p, n, delta)
    tail = _sv(sigma, k + 1 + s - p)
    if k == 0 or q == 0:
        return cd
    head = _sv(sigma, k)
    if head == 0.0:
        return 0.0 if tail == 0.0 else math.inf
    return cd * (tail / head) ** (2 * q)


def gu_range_bound(sigma, k, s, p, q, delta, n=None):
    """Bound on ``||A - Q Q^T A||`` holding with probability ``>= 1 - delta``
    when ``Q`` spans ``(A A^T)^q A Omega`` for Gaussian ``Omega`` with ``k + s``
    columns:

    ``sqrt(sigma_{k+1}^2 + k C^2 sigma_{k+1+s-p}^2 (sigma_{k+1+s-p}/sigma_k)^(4q))``
    """
    sigma = _spectrum(sigma)
    n = sigma.size if n is None else n
    cd = c_delta(k, s, p, n, delta)
    lead = _sv(sigma, k + 1)
    tail = _sv(sigma, k + 1 + s - p)
    ratio = 1.0 if (k == 0 or q == 0) else tail / _sv(sigma, k)
    return math.sqrt(lead**2 + k * cd**2 * tail**2 * ratio ** (4 * q))


def halko_range_bound(sigma, k, s):
    """Bound on ``||A - Q Q^T A||`` for plain Gaussian sampling (``q = 0``,
    ``s >= 4``), holding with probability ``>= 1 - 3 exp(-s)``."""
    sigma = _spectrum(sigma)
    lead = _sv(sigma, k + 1)
    tail = math.sqrt(float(np.sum(sigma[k:] ** 2)))
    return (1 + 16 * math.sqrt(1 + k / (s + 1))) * lead + 8 * math.sqrt(k + s) / (s + 1) * tail


@dataclass(frozen=True)
class BoundReport:
    """Constants and right-hand sides of the solution and residual bounds.

    ``solution_bound`` uses ``2 sigma_{k+s}(A)`` in the bracket and
    ``solution_bound_rank`` uses ``2 sigma_r(A)`` with ``r`` the sampled rank;
    both are ``None`` unless ``b``, ``x_star`` and ``sigma_aug_min`` were
    given, and ``inf`` when ``sigma_n(A)^2 <= sigma_{n+1}([A, b])^2``.
    """

    k: int
    s: int
    p: int
    q: int
    delta: float
    c_delta: float
    epsilon: float
    c1: float
    c2: float
    residual_bound: float
    solution_bound: Optional[float] = None
    solution_bound_rank: Optional[float] = None


def bound_report(true_sigma, solution, k, s, p, q, delta, b=None, x_star=None, sigma_aug_min=None):
    """Evaluate the bounds for ``solution`` given the true spectrum of ``A``.

    Parameters
    ----------
    true_sigma : array_like or SvdFactors
        All singular values of ``A`` (``min(m, n)`` of them).
    solution : TlsSolution
        Result of the randomized solve; ``solution.x`` and ``solution.rank``
        are used.
    k, s, p, q, delta
        Sampling parameters the bound is evaluated for.
    b, x_star, sigma_aug_min : optional
        Right-hand side, exact TLS solution and ``sigma_{n+1}([A, b])``;
        needed for the solution-error bound only.
    """
    sigma = _spectrum(true_sigma)
    n = solution.x.size
    if k + 1 + s - p > sigma.size or k + 1 > sigma.size:
        raise InvalidInputError(f"k + 1 + s - p = {k + 1 + s - p} exceeds the {sigma.size} available singular values")
    cd = c_delta(k, s, p, n, delta)
    eps = power_epsilon(sigma, k, s, p, q, delta, n)
    growth = math.sqrt(1 + k * eps**2)
    c1 = 1 + growth
    c2 = 2 * c1 + 1
    sk1 = _sv(sigma, k + 1)
    xnorm = float(np.linalg.norm(solution.x))
    residual_bound = c1 * sk1 * math.sqrt(1 + xnorm**2)

    sol_bound = sol_bound_rank = None
    if b is not None and x_star is not None and sigma_aug_min is not None:
        conditioning = sigma[-1] ** 2 - sigma_aug_min**2
        xs = float(np.linalg.norm(x_star))
        if conditioning <= 0 or xs == 0:
            sol_bound = sol_bound_rank = math.inf
        else:
            front = (float(np.linalg.norm(b)) / xs + 2 * sigma[0]) * growth
            r = max(solution.rank, 1)
            sol_bound = (front + 2 * _sv(sigma, k + s)) * sk1 / conditioning
            sol_bound_rank = (front + 2 * _sv(sigma, min(r, sigma.size))) * sk1 / conditioning
    return BoundReport(k, s, p, q, delta, cd, eps, c1, c2, residual_bound, sol_bound, sol_bound_rank)
