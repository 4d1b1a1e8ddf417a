import numpy as np
import pytest

from randtls.corered import RandSvd, build_core, randomized_svd
from randtls.errors import InvalidInputError
from randtls.linalg import spectral_norm
from randtls.operators import dense_operator, synthetic_operator
from randtls.problems import make_problem_1d
from randtls.rangefinder import RangeFinderConfig
from randtls.tls import back_transform, classical_tls, solve_core_closed_form, solve_from_svd


def exact_svd(sigma, m, n, seed):
    op, f = synthetic_operator(sigma, m, n, seed)
    return op, RandSvd(f.u, f.sigma, f.v, f.u)


class TestRandomizedSvd:
    def test_exact_rank_two(self):
        op, _ = synthetic_operator([2.0, 0.5], 30, 20, 1)
        svd = randomized_svd(op, RangeFinderConfig(tolerance=1e-4))
        assert svd.rank == 2
        assert np.allclose(svd.sigma1, [2.0, 0.5], atol=1e-10)

    def test_zero_operator(self):
        svd = randomized_svd(dense_operator(np.zeros((5, 4))), RangeFinderConfig())
        assert svd.rank == 0 and svd.u1.shape == (5, 0) and svd.v1.shape == (4, 0)

    def test_shaw_residual(self):
        prob = make_problem_1d("shaw", 64)
        a = prob.matrix()
        good = 0
        for seed in range(100):
            svd = randomized_svd(prob.op, RangeFinderConfig(tolerance=1e-3, seed=seed))
            good += spectral_norm(a - svd.to_dense()) <= 1e-3
        assert good >= 99

    def test_fixed_rank_mode(self):
        op, _ = synthetic_operator(0.5 ** np.arange(20), 20, 20, 2)
        svd = randomized_svd(op, RangeFinderConfig(rank=6, oversample=4))
        assert svd.rank == 10


class TestBuildCore:
    def test_generic_no_grouping(self):
        _, svd = exact_svd([3.0, 2.0, 1.0], 8, 5, 3)
        b = np.random.default_rng(0).standard_normal(8)
        core = build_core(svd, b, cluster_tol=0.0)
        c = svd.u1.T @ b
        assert np.allclose(core.sigma, svd.sigma1)
        assert np.allclose(core.phi, np.abs(c))
        assert np.allclose(core.back_map, svd.v1 * np.sign(c))
        assert core.phi_tail == pytest.approx(np.linalg.norm(b - svd.u1 @ c))
        assert core.groups == [(1, 0), (1, 1), (1, 2)]

    def test_consistent_b(self):
        _, svd = exact_svd([3.0, 2.0, 1.0], 8, 5, 3)
        b = svd.u1 @ np.array([1.0, -2.0, 0.5])
        assert build_core(svd, b).phi_tail <= 1e-12

    def test_multiplicity_matches_classical(self):
        sigma = np.array([3.0, 3.0, 2.0, 1.0])
        _, svd = exact_svd(sigma, 5, 4, 7)
        b = np.random.default_rng(1).standard_normal(5)
        core = build_core(svd, b)
        assert core.t == 3
        assert core.groups[0] == (2, 0)
        a_r = svd.to_dense()
        x = solve_from_svd(a_r, b, svd).x
        assert np.allclose(x, classical_tls(a_r, b).x, rtol=0, atol=1e-10 * np.linalg.norm(x))

    def test_augmented_matrix(self):
        _, svd = exact_svd([2.0, 1.0], 6, 3, 0)
        b = np.arange(6.0)
        core = build_core(svd, b)
        c = core.augmented()
        assert c.shape == (3, 3)
        assert np.allclose(np.diag(c)[:2], core.sigma)
        assert np.allclose(c[:2, 2], core.phi) and c[2, 2] == core.phi_tail

    def test_drops_orthogonal_directions(self):
        _, svd = exact_svd([2.0, 1.0], 6, 3, 0)
        b = svd.u1[:, 1] + (np.eye(6)[0] - svd.u1 @ (svd.u1.T @ np.eye(6)[0]))
        core = build_core(svd, b)
        assert core.t == 1 and core.groups == [(1, 1)]

    def test_back_map_orthonormal(self):
        _, svd = exact_svd([4.0, 4.0, 2.0, 2.0, 1.0], 9, 6, 5)
        core = build_core(svd, np.random.default_rng(2).standard_normal(9))
        assert np.allclose(core.back_map.T @ core.back_map, np.eye(core.t), atol=1e-12)
        y, _ = solve_core_closed_form(core)
        assert np.linalg.norm(back_transform(core, y)) == pytest.approx(np.linalg.norm(y), rel=1e-12)

    def test_bad_b(self):
        _, svd = exact_svd([1.0], 4, 2, 0)
        with pytest.raises(InvalidInputError):
            build_core(svd, np.ones(3))
        with pytest.raises(InvalidInputError):
            build_core(svd, np.ones(4), cluster_tol=-1.0)
