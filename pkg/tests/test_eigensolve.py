import numpy as np
import pytest
import scipy.sparse as sp

from wavebands import (NotPositiveDefinite, ValidationError, generalized_eigs,
                       residual_check)
from oracles import dense_pencil_eigs


def random_pencil(dim, seed):
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    A = 0.5 * (A + A.conj().T)
    C = rng.standard_normal((dim, dim))
    B = C @ C.T + dim * np.eye(dim)
    return A, B


class TestGeneralizedEigs:
    def test_diagonal(self):
        result = generalized_eigs(np.diag([3.0, 1.0, 2.0]), np.eye(3), 3)
        assert np.allclose(result.values, [1.0, 2.0, 3.0], atol=1e-14)

    def test_a_equals_b(self):
        _, B = random_pencil(20, 1)
        result = generalized_eigs(B, B, 5)
        assert np.allclose(result.values, 1.0, atol=1e-12)

    def test_matches_independent_oracle_dim50(self):
        A, B = random_pencil(50, 2)
        result = generalized_eigs(A, B, 50)
        assert np.allclose(result.values, dense_pencil_eigs(A, B), atol=1e-10)
        # B-orthonormality and residuals per the contract
        G = result.vectors.conj().T @ B @ result.vectors
        assert np.abs(G - np.eye(50)).max() < 1e-8
        assert result.residuals.max() < 1e-8

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            generalized_eigs(np.eye(4), -np.eye(4), 2)

    def test_validation(self):
        with pytest.raises(ValidationError):
            generalized_eigs(np.eye(3), np.eye(3), 4)
        with pytest.raises(ValidationError):
            generalized_eigs(np.eye(3), np.eye(4), 1)
        with pytest.raises(ValidationError):
            generalized_eigs(np.eye(3), np.eye(3), 1, mode="magic")

    def test_iterative_matches_dense(self):
        dim = 600
        diags = np.linspace(1.0, 10.0, dim)
        A = sp.diags(diags) + sp.diags([0.1 * np.ones(dim - 1)], [1]) \
            + sp.diags([0.1 * np.ones(dim - 1)], [-1])
        B = sp.identity(dim) * 2.0
        it = generalized_eigs(A.tocsr(), B.tocsr(), 6, mode="iterative", sigma=0.0)
        de = generalized_eigs(A.toarray(), B.toarray(), 6, mode="dense")
        assert np.allclose(it.values, de.values, atol=1e-9)

    def test_auto_picks_iterative_for_large_sparse(self):
        dim = 600
        A = sp.diags(np.linspace(1.0, 5.0, dim)).tocsr()
        B = sp.identity(dim, format="csr")
        result = generalized_eigs(A, B, 4, sigma=0.5)
        assert np.allclose(result.values, np.sort(np.linspace(1.0, 5.0, dim))[:4],
                           atol=1e-10)


class TestProperties:
    def test_minmax_monotonicity(self):
        A, B = random_pencil(30, 3)
        rng = np.random.default_rng(4)
        C = rng.standard_normal((30, 30))
        P = C @ C.T          # positive semidefinite
        base = generalized_eigs(A, B, 30).values
        bumped = generalized_eigs(A + P, B, 30).values
        assert np.all(bumped >= base - 1e-10)

    def test_shift_equivariance(self):
        A, B = random_pencil(30, 5)
        base = generalized_eigs(A, B, 30).values
        shifted = generalized_eigs(A + 2.5 * B, B, 30).values
        assert np.abs(shifted - base - 2.5).max() < 1e-10


class TestResidualCheck:
    def test_exact_diagonal_pairs(self):
        A = np.diag([1.0, 2.0, 3.0])
        result = generalized_eigs(A, np.eye(3), 3)
        assert residual_check(A, np.eye(3), result) < 1e-14

    def test_detects_corruption(self):
        A, B = random_pencil(20, 6)
        result = generalized_eigs(A, B, 5)
        result.vectors[:, 2] += 1e-3
        res = residual_check(A, B, result)
        assert 1e-5 < res < 1e-1

    def test_accepted_output_within_contract(self):
        A, B = random_pencil(40, 7)
        result = generalized_eigs(A, B, 10)
        assert residual_check(A, B, result) <= 1e-8
