"""Regularized solver contracts: closed forms, residuals, identities."""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from helmlearn import tikhonov


def _random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestHermitianSolve:
    def test_identity(self):
        b = np.arange(6, dtype=complex).reshape(3, 2) + 1j
        assert_allclose(tikhonov.hermitian_solve(np.eye(3, dtype=complex), b), b)

    def test_diagonal(self):
        a = np.diag([2.0, 5.0]).astype(complex)
        x = tikhonov.hermitian_solve(a, np.eye(2, dtype=complex))
        assert_allclose(x, np.diag([0.5, 0.2]), rtol=1e-15)

    def test_residual_on_seeded_spd(self):
        rng = np.random.default_rng(42)
        g = _random_complex(rng, 50, 50)
        a = g @ g.conj().T + np.eye(50)
        b = _random_complex(rng, 50, 7)
        x = tikhonov.hermitian_solve(a, b)
        residual = np.linalg.norm(a @ x - b) / np.linalg.norm(b)
        assert residual <= 1e-10

    def test_rejects_non_hermitian(self):
        a = np.array([[1.0, 2.0], [0.0, 1.0]], dtype=complex)
        with pytest.raises(ValueError, match="Hermitian"):
            tikhonov.hermitian_solve(a, np.eye(2, dtype=complex))

    def test_rejects_indefinite(self):
        a = np.diag([1.0, -1.0]).astype(complex)
        with pytest.raises(np.linalg.LinAlgError):
            tikhonov.hermitian_solve(a, np.eye(2, dtype=complex))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            tikhonov.hermitian_solve(np.eye(3, dtype=complex), np.ones((2, 2), complex))


class TestTikhonovDual:
    def test_identity_system_small_alpha(self):
        a = tikhonov.tikhonov_dual(np.eye(2, dtype=complex), np.array([1.0, 1.0 + 0j]), 1e-14)
        assert_allclose(a, [1.0, 1.0], rtol=1e-10)

    def test_scalar_closed_form(self):
        # a* = b v / (v^2 + alpha) = 1*2/(4+1)
        a = tikhonov.tikhonov_dual(np.array([[2.0 + 0j]]), np.array([1.0 + 0j]), 1.0)
        assert_allclose(a, [0.4], rtol=1e-15)

    def test_huge_alpha_kills_solution(self):
        rng = np.random.default_rng(0)
        v = _random_complex(rng, 5, 8)
        v /= np.linalg.norm(v, 2)
        b = _random_complex(rng, 8)
        a = tikhonov.tikhonov_dual(v, b, 1e12)
        assert np.linalg.norm(a) <= np.linalg.norm(b) * 1.0 / 1e12 * 1.01

    def test_alpha_validation(self):
        v = np.eye(2, dtype=complex)
        b = np.ones(2, dtype=complex)
        for alpha in (0.0, -1.0, np.nan):
            with pytest.raises(ValueError):
                tikhonov.tikhonov_dual(v, b, alpha)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            tikhonov.tikhonov_dual(np.eye(3, dtype=complex), np.ones(2, complex), 1.0)

    def test_minimality(self):
        rng = np.random.default_rng(9)
        v = _random_complex(rng, 8, 12)
        b = _random_complex(rng, 12)
        alpha = 0.3

        def objective(a):
            return np.linalg.norm(a @ v - b) ** 2 + alpha * np.linalg.norm(a) ** 2

        a_star = tikhonov.tikhonov_dual(v, b, alpha)
        base = objective(a_star)
        for _ in range(100):
            delta = _random_complex(rng, 8)
            delta /= max(np.linalg.norm(delta), 1.0)
            assert objective(a_star + delta) >= base - 1e-9

    def test_norm_monotone_in_alpha(self):
        rng = np.random.default_rng(4)
        v = _random_complex(rng, 10, 14)
        b = _random_complex(rng, 14)
        norms = [
            np.linalg.norm(tikhonov.tikhonov_dual(v, b, alpha))
            for alpha in (1e-6, 1e-3, 1e-1, 1.0, 10.0)
        ]
        assert all(n1 >= n2 for n1, n2 in zip(norms, norms[1:]))


class TestTikhonovPrimal:
    def test_identity_system(self):
        c = tikhonov.tikhonov_primal(np.eye(2, dtype=complex), np.array([3.0, 4 + 0j]), 1.0)
        assert_allclose(c, [1.5, 2.0], rtol=1e-15)

    def test_scalar_closed_form(self):
        c = tikhonov.tikhonov_primal(np.array([[2.0 + 0j]]), np.array([1.0 + 0j]), 1.0)
        assert_allclose(c, [0.4], rtol=1e-15)

    def test_overdetermined_column(self):
        v = np.array([[1.0], [1.0]], dtype=complex)
        c = tikhonov.tikhonov_primal(v, np.array([1.0, 1.0 + 0j]), 1e-12)
        assert_allclose(c, [1.0], rtol=1e-10)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            tikhonov.tikhonov_primal(np.eye(3, dtype=complex), np.ones(2, complex), 1.0)


class TestLearnOperatorMatrix:
    def test_identity_training_matrix(self):
        w = tikhonov.learn_operator_matrix(np.eye(3, dtype=complex), 0.5)
        assert_allclose(w, np.eye(3) / 1.5, rtol=1e-15)

    def test_matches_dual_solve(self):
        # alpha keeps the shifted Gram well-conditioned here; the two code
        # paths factor different Gram sides, so agreement degrades with
        # condition number (the high-condition regime is covered by the
        # pipeline-equivalence tests at 1e-8)
        rng = np.random.default_rng(7)
        v = _random_complex(rng, 20, 30)
        w = tikhonov.learn_operator_matrix(v, 0.5)
        for _ in range(5):
            b = _random_complex(rng, 30)
            direct = tikhonov.tikhonov_dual(v, b, 0.5)
            via_w = b @ w
            assert np.linalg.norm(direct - via_w) <= 1e-12 * np.linalg.norm(direct)

    def test_zero_column_gives_zero_row(self):
        rng = np.random.default_rng(1)
        v = _random_complex(rng, 6, 9)
        v[:, 4] = 0.0
        w = tikhonov.learn_operator_matrix(v, 1e-6)
        assert np.all(w[4] == 0.0)

    def test_push_through_consistency(self):
        # evaluated solutions agree between the dual (W-based) and primal
        # pipelines for both tall and wide training matrices
        rng = np.random.default_rng(13)
        for n, m in ((20, 30), (30, 20)):
            v = _random_complex(rng, n, m)
            alpha = 1e-6
            w = tikhonov.learn_operator_matrix(v, alpha)
            f = _random_complex(rng, n)
            bx = _random_complex(rng, m)
            dual_value = bx @ (w @ f)
            primal_value = bx @ tikhonov.tikhonov_primal(v, f, alpha)
            assert abs(dual_value - primal_value) <= 1e-8 * abs(primal_value)


class TestAccumMatmul:
    def test_matches_blas_below_threshold(self):
        rng = np.random.default_rng(2)
        a = _random_complex(rng, 10, 100)
        b = _random_complex(rng, 100, 4)
        assert np.array_equal(tikhonov.accum_matmul(a, b), a @ b)

    def test_long_inner_dimension(self):
        rng = np.random.default_rng(3)
        a = _random_complex(rng, 3, 5000)
        b = _random_complex(rng, 5000, 2)
        got = tikhonov.accum_matmul(a, b)
        ref = a.astype(np.complex128) @ b
        assert np.linalg.norm(got - ref) <= 1e-12 * np.linalg.norm(ref)


class TestValidationHelpers:
    def test_non_finite_rejected(self):
        with pytest.raises(ValueError):
            tikhonov.as_complex_matrix(np.array([[1.0, np.inf]]))
        with pytest.raises(ValueError):
            tikhonov.as_complex_vector(np.array([1.0, np.nan]))

    def test_shape_rejected(self):
        with pytest.raises(ValueError):
            tikhonov.as_complex_matrix(np.ones(3))
        with pytest.raises(ValueError):
            tikhonov.as_complex_vector(np.ones((2, 2)))
