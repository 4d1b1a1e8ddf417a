"""Randomized range finders.

:func:`adaptive_rangefinder` grows an orthonormal basis one Gaussian probe at a
time until the last ``block`` probe residuals are all below
``tolerance / (10 * sqrt(2/pi))``, which bounds ``||A - Q Q^T A||`` by
``tolerance`` with probability at least ``1 - min(m, n) * 10**-block``.
:func:`subspace_iteration` then sharpens the basis by alternating QR steps on
``A^T Q`` and ``A Q~``. :func:`fixed_rank_rangefinder` is the
``k + oversample`` column variant used for the probabilistic bounds.

Probe ``i`` is drawn from the stream ``(seed, i)``, so the probe sequence does
not depend on the block size or on the order in which probes are requested.
"""

from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .errors import InvalidInputError, RankOverflowError
from .linalg import gaussian_matrix, householder_qr

#: Factor in the stopping threshold ``tolerance / (10 * sqrt(2/pi))``.
PROBE_SAFETY = 10.0 * np.sqrt(2.0 / np.pi)
#: Hard ceiling on the default ``max_rank``.
DEFAULT_RANK_CAP = 1000


@dataclass(frozen=True)
class RangeFinderConfig:
    """Parameters of the range finders.

    ``tolerance``, ``block`` and ``power`` drive the adaptive mode. Setting
    ``rank`` switches :func:`randtls.corered.randomized_svd` to the fixed-rank
    sampler with ``rank + oversample`` columns; ``balance`` is the extra
    parameter ``p`` (``0 <= p <= oversample``) that only enters the bounds.
    ``max_rank=None`` means ``min(m, n, 1000)``.
    """

    tolerance: float = 1e-3
    block: int = 10
    power: int = 1
    oversample: int = 5
    balance: int = 0
    seed: int = 0
    max_rank: Optional[int] = None
    rank: Optional[int] = None

    def __post_init__(self):
        if not self.tolerance > 0:
            raise InvalidInputError(f"tolerance must be positive, got {self.tolerance}")
        if self.block < 1:
            raise InvalidInputError(f"block must be >= 1, got {self.block}")
        if self.power < 0:
            raise InvalidInputError(f"power must be >= 0, got {self.power}")
        if self.oversample < 0 or not 0 <= self.balance <= self.oversample:
            raise InvalidInputError("need oversample >= balance >= 0")
        if self.max_rank is not None and self.max_rank < 0:
            raise InvalidInputError("max_rank must be nonnegative")
        if self.rank is not None and self.rank < 0:
            raise InvalidInputError("rank must be nonnegative")

    def resolved_max_rank(self, op):
        cap = min(op.nrows, op.ncols, DEFAULT_RANK_CAP)
        if self.max_rank is None:
            return cap
        if self.max_rank > min(op.nrows, op.ncols):
            raise InvalidInputError(f"max_rank {self.max_rank} exceeds min(m, n) = {min(op.shape)}")
        return self.max_rank

    def with_seed(self, seed):
        return replace(self, seed=seed)


@dataclass(frozen=True)
class RangeBasis:
    """Orthonormal basis ``q_basis`` (``m x rank``) for the dominant range.

    ``residual_estimate`` is ``10*sqrt(2/pi)`` times the largest pending probe
    residual at exit, an estimate of ``||A - Q Q^T A||`` (``nan`` when not
    tracked, e.g. after fixed-rank sampling).
    """

    q_basis: np.ndarray
    rank: int
    probes_used: int
    residual_estimate: float


def _seed_tuple(seed):
    return tuple(seed) if isinstance(seed, (tuple, list)) else (seed,)


def _probe(op, seed, index):
    return op.apply(gaussian_matrix(op.ncols, 1, (*_seed_tuple(seed), index))[:, 0])


def adaptive_rangefinder(op, cfg):
    """Adaptive randomized range finder.

    Grows the basis column by column, keeping a window of ``block`` pending
    probe images that are deflated against every accepted column. Each
    accepted column is orthogonalized twice against the basis; a column whose
    norm after that falls below ``1e3 * eps * ||first probes||`` lies in the
    span numerically and is discarded rather than normalized. The loop also
    ends once the basis spans ``min(m, n)`` directions or ``block`` columns in
    a row were discarded, since the residual is then at rounding level.

    Raises
    ------
    RankOverflowError
        If the basis reaches ``cfg.max_rank`` while the stopping rule has not
        fired. The partial basis is attached to the exception.
    """
    m, n = op.shape
    max_rank = cfg.resolved_max_rank(op)
    block = min(cfg.block, m, n)
    threshold = cfg.tolerance / PROBE_SAFETY

    pending = [_probe(op, cfg.seed, i) for i in range(block)]
    drawn = block
    scale = max(np.linalg.norm(y) for y in pending)
    floor = 1e3 * np.finfo(float).eps * scale
    cols = []
    q = np.zeros((m, 0))

    discarded = 0
    while max(np.linalg.norm(y) for y in pending) > threshold:
        # full range captured, or a whole window of rounding noise: the
        # remaining residual is at working precision
        if len(cols) >= min(m, n) or discarded >= block:
            break
        if len(cols) >= max_rank:
            basis = RangeBasis(q, q.shape[1], drawn, PROBE_SAFETY * max(np.linalg.norm(y) for y in pending))
            raise RankOverflowError(
                f"adaptive range finder reached max_rank={max_rank} with residual "
                f"estimate {basis.residual_estimate:.3e} > tolerance {cfg.tolerance:.3e}",
                basis,
            )
        y = pending.pop(0)
        for _ in range(2):
            y = y - q @ (q.T @ y)
        nrm = np.linalg.norm(y)
        new_q = None
        if nrm > floor:
            new_q = y / nrm
            cols.append(new_q)
            q = np.column_stack(cols)
            discarded = 0
        else:
            discarded += 1

        fresh = _probe(op, cfg.seed, drawn)
        drawn += 1
        fresh = fresh - q @ (q.T @ fresh)
        if new_q is not None:
            pending = [p - new_q * (new_q @ p) for p in pending]
        pending.append(fresh)

    est = PROBE_SAFETY * max(np.linalg.norm(y) for y in pending)
    return RangeBasis(q, q.shape[1], drawn, float(est))


def subspace_iteration(op, start, power):
    """Run ``power`` rounds of QR-stabilized subspace iteration from ``start``.

    Each round forms ``A^T Q``, orthonormalizes it, applies ``A`` and
    orthonormalizes again. The rank is unchanged.
    """
    if power < 0:
        raise InvalidInputError("power must be >= 0")
    q = start.q_basis
    if power == 0 or q.shape[1] == 0:
        return start
    for _ in range(power):
        q_tilde, _ = householder_qr(op.apply_transpose(q))
        q, _ = householder_qr(op.apply(q_tilde))
    return RangeBasis(q, q.shape[1], start.probes_used, float("nan"))


def fixed_rank_rangefinder(op, k, cfg):
    """Basis for the range of ``(A A^T)^q A Omega``, ``Omega`` Gaussian ``n x (k+s)``.

    Columns of the sample that are numerically dependent on earlier ones
    (relative pivot below ``max(m, n) * eps``) are dropped, so the rank can be
    smaller than ``k + s`` for exactly low-rank operators.
    """
    m, n = op.shape
    width = k + cfg.oversample
    if k < 0 or width > min(m, n) or width < 1:
        raise InvalidInputError(f"k + oversample = {width} must lie in [1, min(m, n) = {min(m, n)}]")
    omega = gaussian_matrix(n, width, cfg.seed)
    q, r = householder_qr(op.apply(omega))
    pivots = np.abs(np.diag(r))
    top = pivots.max() if pivots.size else 0.0
    keep = pivots > max(m, n) * np.finfo(float).eps * top
    q = q[:, keep]
    basis = RangeBasis(q, q.shape[1], width, float("nan"))
    return subspace_iteration(op, basis, cfg.power)
