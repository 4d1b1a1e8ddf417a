import numpy as np
import pytest
from scipy import integrate

from randtls.errors import InvalidInputError
from randtls.linalg import singular_values
from randtls.problems import ONE_D, blur_factor, make_blur, make_gravity_2d, make_problem_1d
from randtls.rangefinder import RangeFinderConfig
from randtls.tls import solve_randomized_tls


def cell(i, lo, h):
    return lo + i * h, lo + (i + 1) * h


def phillips_kernel(s, t):
    x = s - t
    return 1 + np.cos(np.pi * x / 3) if abs(x) < 3 else 0.0


def deriv2_kernel(s, t):
    return s * (t - 1) if s < t else t * (s - 1)


def galerkin_entry(kernel, i, j, lo, h):
    (s0, s1), (t0, t1) = cell(i, lo, h), cell(j, lo, h)
    opts = dict(epsabs=1e-14, epsrel=1e-12)
    if i != j:
        return integrate.dblquad(lambda t, s: kernel(s, t), s0, s1, t0, t1, **opts)[0] / h
    # split the diagonal cell along s = t where the kernel has a kink
    lower = integrate.dblquad(lambda t, s: kernel(s, t), s0, s1, t0, lambda s: s, **opts)[0]
    upper = integrate.dblquad(lambda t, s: kernel(s, t), s0, s1, lambda s: s, t1, **opts)[0]
    return (lower + upper) / h


@pytest.mark.parametrize("name", ONE_D)
def test_shapes_and_finiteness(name):
    p = make_problem_1d(name, 32)
    assert p.op.shape == (32, 32) and p.b.shape == (32,) and p.x_true.shape == (32,)
    assert np.all(np.isfinite(p.matrix())) and np.all(np.isfinite(p.b))


class TestCollocation:
    def test_shaw_entries(self):
        n = 16
        p = make_problem_1d("shaw", n)
        h = np.pi / n
        t = -np.pi / 2 + (np.arange(n) + 0.5) * h
        i, j = 3, 11
        u = np.pi * (np.sin(t[i]) + np.sin(t[j]))
        expected = h * (np.cos(t[i]) + np.cos(t[j])) ** 2 * (np.sin(u) / u) ** 2
        assert p.matrix()[i, j] == pytest.approx(expected, rel=1e-14)
        assert np.allclose(p.b, p.matrix() @ p.x_true)

    def test_shaw_severely_ill_posed(self):
        s = singular_values(make_problem_1d("shaw", 32).matrix())
        assert s[0] / s[-1] >= 1e10

    def test_gravity_entries_and_depth(self):
        p = make_problem_1d("gravity", 8, d=0.5)
        t = (np.arange(8) + 0.5) / 8
        assert p.matrix()[1, 6] == pytest.approx(0.5 / 8 / (0.25 + (t[1] - t[6]) ** 2) ** 1.5, rel=1e-14)
        assert p.metadata["d"] == 0.5

    def test_foxgood_data(self):
        p = make_problem_1d("foxgood", 64)
        # exact data vs quadrature of the exact solution: O(h^2) apart
        assert np.linalg.norm(p.matrix() @ p.x_true - p.b) / np.linalg.norm(p.b) < 1e-3
        s = 0.3
        val, _ = integrate.quad(lambda t: np.sqrt(s**2 + t**2) * t, 0, 1)
        assert ((1 + s**2) ** 1.5 - s**3) / 3 == pytest.approx(val, rel=1e-12)


class TestGalerkin:
    @pytest.mark.parametrize("ij", [(0, 0), (3, 5), (5, 8), (2, 9), (7, 7), (0, 11)])
    def test_phillips_entries(self, ij):
        n = 12
        p = make_problem_1d("phillips", n)
        expected = galerkin_entry(phillips_kernel, *ij, -6.0, 12.0 / n)
        assert p.matrix()[ij] == pytest.approx(expected, abs=1e-11)

    def test_phillips_rhs_and_solution(self):
        n = 12
        h = 12.0 / n
        p = make_problem_1d("phillips", n)

        def g(s):
            return (6 - abs(s)) * (1 + 0.5 * np.cos(np.pi * s / 3)) + 9 / (2 * np.pi) * np.sin(np.pi * abs(s) / 3)

        for i in (0, 4, 6, 11):
            s0, s1 = cell(i, -6.0, h)
            b_i = integrate.quad(g, s0, s1)[0] / np.sqrt(h)
            x_i = integrate.quad(lambda t: phillips_kernel(t, 0.0), s0, s1)[0] / np.sqrt(h)
            assert p.b[i] == pytest.approx(b_i, abs=1e-11)
            assert p.x_true[i] == pytest.approx(x_i, abs=1e-11)

    def test_phillips_needs_multiple_of_four(self):
        with pytest.raises(InvalidInputError):
            make_problem_1d("phillips", 30)

    @pytest.mark.parametrize("ij", [(0, 0), (2, 5), (6, 1), (9, 9)])
    def test_deriv2_entries(self, ij):
        n = 10
        p = make_problem_1d("deriv2", n)
        assert p.matrix()[ij] == pytest.approx(galerkin_entry(deriv2_kernel, *ij, 0.0, 1.0 / n), abs=1e-13)

    def test_deriv2_rhs_and_symmetry(self):
        n = 16
        h = 1.0 / n
        p = make_problem_1d("deriv2", n)
        a = p.matrix()
        assert np.abs(a - a.T).max() <= 1e-12
        for i in (0, 7, 15):
            s0, s1 = cell(i, 0.0, h)
            assert p.b[i] == pytest.approx(integrate.quad(lambda s: (s**3 - s) / 6, s0, s1)[0] / np.sqrt(h),
                                           abs=1e-14)
        assert np.allclose(p.b, a @ p.x_true, atol=1e-14)


def test_phillips_rank_exceeds_shaw():
    cfg = RangeFinderConfig(tolerance=1e-3, seed=0)
    ranks = {name: solve_randomized_tls(make_problem_1d(name, 64).op, make_problem_1d(name, 64).b, cfg).rank
             for name in ("shaw", "phillips")}
    assert ranks["phillips"] > ranks["shaw"]


@pytest.mark.parametrize("args", [("heat", 32), ("shaw", 31), ("shaw", 2), ("shaw", 8.5)])
def test_invalid_1d(args):
    with pytest.raises(InvalidInputError):
        make_problem_1d(*args)


def test_unknown_parameter():
    with pytest.raises(InvalidInputError):
        make_problem_1d("shaw", 16, d=1.0)


class TestGravity2d:
    def test_symmetric(self):
        a = make_gravity_2d(6).matrix()
        assert np.abs(a - a.T).max() <= 1e-12

    def test_entry_ordering(self):
        p = make_gravity_2d(4, d=0.3)
        c = (np.arange(4) + 0.5) / 4
        # unknown 1 is (s, t) = (c[1], c[0]); unknown 4 is (c[0], c[1])
        dist2 = (c[1] - c[0]) ** 2 * 2
        assert p.matrix()[1, 4] == pytest.approx(0.3 / 16 / (0.09 + dist2) ** 1.5, rel=1e-14)
        assert p.x_true[1] == pytest.approx(np.sin(np.pi * c[1]) * np.sin(np.pi * c[0]))

    def test_depth_orders_decay(self):
        ranks = []
        for d in (0.1, 0.25, 0.5):
            s = singular_values(make_gravity_2d(8, d=d).matrix())
            ranks.append(int(np.sum(s > 1e-3 * s[0])))
        assert ranks[0] >= ranks[1] >= ranks[2]

    def test_grid8_accuracy(self):
        p = make_gravity_2d(8)
        sol = solve_randomized_tls(p.op, p.b, RangeFinderConfig(tolerance=1e-3))
        assert np.linalg.norm(sol.x - p.x_true) / np.linalg.norm(p.x_true) <= 5e-3

    def test_invalid(self):
        with pytest.raises(InvalidInputError):
            make_gravity_2d(1)
        with pytest.raises(InvalidInputError):
            make_gravity_2d(4, d=0.0)


class TestBlur:
    def test_band_one_is_scaled_identity(self):
        p = make_blur(8, band=1, spread=2.0)
        c = 1 / (2.0 * np.sqrt(2 * np.pi))
        assert np.allclose(p.matrix(), c**2 * np.eye(64))
        assert np.allclose(p.b, c**2 * p.x_true)

    def test_kronecker_matches_dense(self):
        p = make_blur(8)
        f = blur_factor(8, 8, 3.0)
        x = np.random.default_rng(0).standard_normal(64)
        assert np.allclose(p.op.apply(x), np.kron(f, f) @ x, atol=1e-12, rtol=0)

    def test_grid16_regime(self):
        p = make_blur(16)
        sol = solve_randomized_tls(p.op, p.b, RangeFinderConfig(tolerance=0.1))
        err = np.linalg.norm(sol.x - p.x_true) / np.linalg.norm(p.x_true)
        assert 0.2 <= err <= 0.6

    @pytest.mark.parametrize("kwargs", [dict(grid=4), dict(grid=16, band=0), dict(grid=16, band=17),
                                        dict(grid=16, spread=0.0)])
    def test_invalid(self, kwargs):
        with pytest.raises(InvalidInputError):
            make_blur(**kwargs)
