"""Deterministic test problems from first-kind Fredholm integral equations.

Each generator returns a :class:`TestProblem` with the operator, the
right-hand side and the discretized true solution. The 1-D problems follow the
classical Regularization Tools discretizations; the formulas are written out
below so nothing external is needed.

shaw
    Midpoint collocation on ``[-pi/2, pi/2]`` of
    ``K(s, t) = (cos s + cos t)^2 (sin u / u)^2``, ``u = pi (sin s + sin t)``,
    true solution ``2 exp(-6 (t - 0.8)^2) + exp(-2 (t + 0.5)^2)``, ``b = A x``.
gravity
    Midpoint collocation on ``[0, 1]`` of
    ``K(s, t) = d (d^2 + (s - t)^2)^(-3/2)``, depth ``d = 0.25`` by default,
    true solution ``sin(pi t) + 0.5 sin(2 pi t)``, ``b = A x``.
foxgood
    Midpoint collocation on ``[0, 1]`` of ``K(s, t) = sqrt(s^2 + t^2)``,
    true solution ``f(t) = t`` and the exact data
    ``g(s) = ((1 + s^2)^(3/2) - s^3) / 3`` sampled at the nodes. This ``b`` is
    not ``A x`` (quadrature error).
phillips
    Galerkin with orthonormal box functions on ``[-6, 6]`` of
    ``K(s, t) = phi(s - t)``, ``phi(x) = 1 + cos(pi x / 3)`` for ``|x| < 3``;
    true solution ``phi``. Both ``x`` and ``b`` are exact cell averages
    (times ``sqrt(h)``). Needs ``n`` divisible by 4.
deriv2
    Galerkin with box functions on ``[0, 1]`` for the Green's function of the
    second derivative, ``K(s, t) = s (t - 1)`` for ``s < t`` and
    ``t (s - 1)`` otherwise; true solution ``f(t) = t`` with exact data
    ``g(s) = (s^3 - s) / 6``.

The 2-D gravity problem uses midpoint collocation on the unit square and the
blur problem a Kronecker product of Gaussian Toeplitz matrices.
"""

from dataclasses import dataclass, field
from typing import Dict

import numpy as np
from scipy.linalg import toeplitz

from .errors import InvalidInputError
from .operators import DenseOperator, KroneckerOperator, LinearOperator

ONE_D = ("shaw", "gravity", "foxgood", "phillips", "deriv2")


@dataclass(frozen=True)
class TestProblem:
    name: str
    op: LinearOperator
    b: np.ndarray
    x_true: np.ndarray
    n: int
    metadata: Dict[str, object] = field(default_factory=dict)

    __test__ = False  # not a pytest class

    def matrix(self):
        return self.op.to_dense()


def _shaw(n):
    if n % 2:
        raise InvalidInputError("shaw needs an even n")
    h = np.pi / n
    t = -np.pi / 2 + (np.arange(n) + 0.5) * h
    co, psi = np.cos(t), np.pi * np.sin(t)
    ss = psi[:, None] + psi[None, :]
    # ss vanishes on the anti-diagonal, where sin(ss)/ss -> 1
    sinc = np.sinc(ss / np.pi)
    a = h * ((co[:, None] + co[None, :]) * sinc) ** 2
    x = 2.0 * np.exp(-6.0 * (t - 0.8) ** 2) + np.exp(-2.0 * (t + 0.5) ** 2)
    return a, a @ x, x, {}


def _gravity(n, d=0.25):
    if d <= 0:
        raise InvalidInputError("depth d must be positive")
    h = 1.0 / n
    t = h * (np.arange(n) + 0.5)
    a = h * d / (d**2 + (t[:, None] - t[None, :]) ** 2) ** 1.5
    x = np.sin(np.pi * t) + 0.5 * np.sin(2 * np.pi * t)
    return a, a @ x, x, {"d": d}


def _foxgood(n):
    h = 1.0 / n
    t = h * (np.arange(n) + 0.5)
    a = h * np.sqrt(t[:, None] ** 2 + t[None, :] ** 2)
    b = ((1.0 + t**2) ** 1.5 - t**3) / 3.0
    return a, b, t.copy(), {}


def _phillips(n):
    if n % 4:
        raise InvalidInputError("phillips needs n divisible by 4")
    h = 12.0 / n
    n4 = n // 4
    c = np.pi / 3
    lag = np.arange(n4)
    # cell-pair integrals of phi over fully supported lags, then the boundary lag
    row = np.zeros(n)
    row[:n4] = h + (2 * np.cos(c * lag * h) - np.cos(c * (lag + 1) * h) - np.cos(c * (lag - 1) * h)) / (c**2 * h)
    row[n4] = h / 2 + (np.cos(c * h) - 1.0) / (c**2 * h)
    a = toeplitz(row)

    def g_antiderivative(s):
        # antiderivative of the exact data for s >= 0
        return s * (6 - s / 2) + ((3 - s / 2) * np.sin(c * s) - 2 / c * (np.cos(c * s) - 1)) / c

    edges = -6.0 + h * np.arange(n + 1)
    right = np.abs(edges[n // 2 + 1:])
    left = np.abs(edges[n // 2:-1])
    half = (g_antiderivative(right) - g_antiderivative(left)) / np.sqrt(h)
    b = np.concatenate([half[::-1], half])

    x = np.zeros(n)
    j = np.arange(1, n4 + 1)
    x[2 * n4:3 * n4] = (h + (np.sin(c * j * h) - np.sin(c * (j - 1) * h)) / c) / np.sqrt(h)
    x[n4:2 * n4] = x[3 * n4 - 1:2 * n4 - 1:-1]
    return a, b, x, {}


def _deriv2(n):
    h = 1.0 / n
    i = np.arange(1, n + 1)
    a = h**2 * np.outer(i - 0.5, (i - 0.5) * h - 1.0)  # entry (j, i) for j < i
    a = np.triu(a, 1)
    a = a + a.T
    a[i - 1, i - 1] = h**2 * ((i**2 - i + 0.25) * h - (i - 2.0 / 3.0))
    edges = h * np.arange(n + 1)
    g_int = edges**4 / 24 - edges**2 / 12
    b = np.diff(g_int) / np.sqrt(h)
    x = h**1.5 * (i - 0.5)
    return a, b, x, {"example": 1}


_BUILDERS = {
    "shaw": _shaw,
    "gravity": _gravity,
    "foxgood": _foxgood,
    "phillips": _phillips,
    "deriv2": _deriv2,
}


def make_problem_1d(name, n, **params):
    """Generate one of the 1-D problems ``shaw``, ``gravity``, ``foxgood``,
    ``phillips`` or ``deriv2`` with ``n`` unknowns.

    ``gravity`` accepts the depth ``d``; the other problems take no parameters.
    """
    if name not in _BUILDERS:
        raise InvalidInputError(f"unknown problem {name!r}; choose from {', '.join(ONE_D)}")
    if int(n) != n or n < 4:
        raise InvalidInputError(f"n must be an integer >= 4, got {n}")
    n = int(n)
    try:
        a, b, x, meta = _BUILDERS[name](n, **params)
    except TypeError as exc:
        raise InvalidInputError(f"bad parameters for {name}: {params}") from exc
    return TestProblem(name, DenseOperator(a), b, x, n, meta)


def make_gravity_2d(grid, d=0.25):
    """2-D gravity surveying on the unit square with a ``grid x grid`` mesh.

    Kernel ``d (d^2 + (x - s)^2 + (y - t)^2)^(-3/2)`` by midpoint collocation,
    true solution ``sin(pi s) sin(pi t)``, ``b = A x``. Unknowns are ordered
    column-major over the grid, ``n = grid**2``.
    """
    if int(grid) != grid or grid < 2:
        raise InvalidInputError(f"grid must be an integer >= 2, got {grid}")
    if not d > 0:
        raise InvalidInputError("depth d must be positive")
    grid = int(grid)
    h = 1.0 / grid
    c = h * (np.arange(grid) + 0.5)
    s = np.tile(c, grid)  # first coordinate varies fastest
    t = np.repeat(c, grid)
    dist2 = (s[:, None] - s[None, :]) ** 2 + (t[:, None] - t[None, :]) ** 2
    a = h**2 * d / (d**2 + dist2) ** 1.5
    x = np.sin(np.pi * s) * np.sin(np.pi * t)
    return TestProblem("gravity2d", DenseOperator(a), a @ x, x, grid * grid, {"d": d, "grid": grid})


def blur_factor(grid, band, spread):
    """Banded symmetric Toeplitz matrix with a normalized Gaussian profile."""
    profile = np.zeros(grid)
    lags = np.arange(band)
    profile[:band] = np.exp(-(lags**2) / (2.0 * spread**2))
    return toeplitz(profile) / (spread * np.sqrt(2.0 * np.pi))


def block_image(grid):
    """Block test image: a bright square, a dimmer bar and a small spot."""
    img = np.zeros((grid, grid))
    q = grid // 8
    img[2 * q:5 * q, 2 * q:5 * q] = 1.0
    img[q:7 * q, 6 * q:7 * q] = 0.5
    img[6 * q:7 * q, q:3 * q] = 0.8
    return img



def make_blur(grid, band=None, spread=3.0):
    """Image deblurring with ``A = A_r ⊗ A_c`` Gaussian Toeplitz factors.

    Returns a :class:`KroneckerOperator` problem on a ``grid x grid`` image
    (``n = grid**2``); ``x_true`` is :func:`block_image` stacked column-major
    and ``b`` the blurred image. ``band=None`` means ``min(grid, 16)``.
    """
    if int(grid) != grid or grid < 8:
        raise InvalidInputError(f"grid must be an integer >= 8, got {grid}")
    if band is None:
        band = min(int(grid), 16)
    if not 1 <= band <= grid:
        raise InvalidInputError(f"band must lie in [1, grid], got {band}")
    if not spread > 0:
        raise InvalidInputError("spread must be positive")
    grid = int(grid)
    factor = blur_factor(grid, band, spread)
    op = KroneckerOperator(factor, factor)
    x = block_image(grid).reshape(-1, order="F")
    return TestProblem("blur", op, op.apply(x), x, grid * grid,
                       {"grid": grid, "band": band, "spread": spread})
