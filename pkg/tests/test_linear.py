import numpy as np
import pytest

from aslm import RankDeficiencyError, RegressionProblem, mse, predict_linear, solve_regularized_ls
from conftest import gauss_jordan_solve


class TestSolveRegularizedLs:
    def test_identity_design_recovers_targets(self):
        prob = RegressionProblem(np.eye(2), np.array([1.0, 2.0]), delta=0.0)
        w = solve_regularized_ls(prob)
        assert np.allclose(w, [1.0, 2.0], atol=1e-14)

    def test_zero_targets_give_zero_weights(self):
        rng = np.random.default_rng(0)
        prob = RegressionProblem(rng.normal(size=(20, 4)), np.zeros(20))
        assert np.array_equal(solve_regularized_ls(prob), np.zeros(4))

    def test_matches_explicit_inverse(self):
        rng = np.random.default_rng(1)
        for _ in range(50):
            n = int(rng.integers(3, 40))
            l = int(rng.integers(1, 9))
            X = rng.normal(size=(n, l))
            d = rng.normal(size=n)
            w = solve_regularized_ls(RegressionProblem(X, d, delta=0.1))
            A = X.T @ X + 0.1 * np.eye(l)
            ref = gauss_jordan_solve(A, X.T @ d)
            assert np.max(np.abs(w - ref)) <= 1e-9

    def test_normal_equation_residual(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(200, 7))
        d = rng.normal(size=200)
        w = solve_regularized_ls(RegressionProblem(X, d, delta=0.1))
        A = X.T @ X + 0.1 * np.eye(7)
        b = X.T @ d
        assert np.linalg.norm(A @ w - b) <= 1e-8 * np.linalg.norm(b)

    def test_heavier_regularization_shrinks_weights(self):
        rng = np.random.default_rng(3)
        X = rng.normal(size=(60, 5))
        d = rng.normal(size=60)
        norms = [np.linalg.norm(solve_regularized_ls(RegressionProblem(X, d, delta=dl)))
                 for dl in (1e-4, 1e-2, 1.0, 100.0)]
        assert all(a >= b for a, b in zip(norms, norms[1:]))

    def test_square_system_interpolates_at_zero_delta(self):
        rng = np.random.default_rng(4)
        X = rng.normal(size=(6, 6)) + 3.0 * np.eye(6)
        d = rng.normal(size=6)
        w = solve_regularized_ls(RegressionProblem(X, d, delta=0.0))
        assert np.max(np.abs(X @ w - d)) < 1e-8

    def test_singular_unregularized_raises(self):
        # second column identically zero -> exact zero pivot in X'X
        X = np.array([[1.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        prob = RegressionProblem(X, np.array([1.0, 2.0, 3.0]), delta=0.0)
        with pytest.raises(RankDeficiencyError):
            solve_regularized_ls(prob)
        # same system is fine once regularized
        solve_regularized_ls(RegressionProblem(X, np.array([1.0, 2.0, 3.0])))

    def test_problem_validation(self):
        X = np.zeros((4, 2))
        with pytest.raises(ValueError):
            RegressionProblem(X, np.zeros(3))
        with pytest.raises(ValueError):
            RegressionProblem(X, np.zeros(4), delta=-0.1)
        with pytest.raises(ValueError):
            RegressionProblem(np.array([[np.nan, 0.0]]), np.zeros(1))
        with pytest.raises(ValueError):
            RegressionProblem(np.zeros((0, 2)), np.zeros(0))


class TestPredictLinear:
    def test_zero_weights(self):
        assert predict_linear(np.zeros(3), np.array([5.0, 6.0, 7.0])) == 0.0

    def test_basis_vector_picks_coordinate(self):
        w = np.array([0.0, 1.0, 0.0])
        assert predict_linear(w, np.array([2.0, 3.0, 4.0])) == 3.0

    def test_matches_reversed_accumulation(self):
        rng = np.random.default_rng(5)
        for _ in range(20):
            w = rng.normal(size=9)
            x = rng.normal(size=9)
            ref = np.dot(w[::-1], x[::-1])
            assert abs(predict_linear(w, x) - ref) <= 1e-12

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(6)
        w = rng.normal(size=4)
        X = rng.normal(size=(30, 4))
        batch = predict_linear(w, X)
        assert batch.shape == (30,)
        for i in range(30):
            assert batch[i] == pytest.approx(predict_linear(w, X[i]), abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            predict_linear(np.zeros(3), np.zeros(4))


class TestMse:
    def test_identical_is_zero(self):
        y = np.random.default_rng(7).normal(size=50)
        assert mse(y, y) == 0.0

    def test_hand_example(self):
        assert mse(np.array([1.0, 1.0]), np.array([0.0, 2.0])) == 1.0

    def test_matches_manual_mean(self):
        rng = np.random.default_rng(8)
        a, b = rng.normal(size=100), rng.normal(size=100)
        assert mse(a, b) == pytest.approx(np.mean((a - b) ** 2), abs=1e-15)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            mse(np.zeros(3), np.zeros(4))

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            mse(np.zeros(0), np.zeros(0))
