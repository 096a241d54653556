"""Generalized Hermitian eigenproblems for pencils (A, B), B positive definite."""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence, eigsh

from .errors import NoConvergence, NotPositiveDefinite, SolverFailure, ValidationError

# Below this dimension the dense path is always cheapest.
DENSE_CUTOFF = 500


@dataclass
class EigenResult:
    values: np.ndarray      # ascending, with multiplicity
    vectors: np.ndarray     # columns, B-orthonormal
    residuals: np.ndarray   # per pair, ||A v - lam B v|| / ||B v||


def _hermitize(matrix):
    if sp.issparse(matrix):
        return 0.5 * (matrix + matrix.conj().T)
    matrix = np.asarray(matrix)
    return 0.5 * (matrix + matrix.conj().T)


def generalized_eigs(A, B, n_eigs, mode="auto", sigma=None):
    """Lowest ``n_eigs`` eigenpairs of A v = lam B v, ascending.

    mode "dense" factors B and solves the reduced Hermitian problem through
    LAPACK; "iterative" runs shift-invert Lanczos with a shift below the
    spectrum; "auto" picks iterative for large sparse pencils with few
    requested pairs.
    """
    dim = A.shape[0]
    if A.shape != (dim, dim) or B.shape != (dim, dim):
        raise ValidationError("pencil matrices must be square and equally sized")
    if not 1 <= n_eigs <= dim:
        raise ValidationError("n_eigs must lie in [1, dim]")
    A = _hermitize(A)
    B = _hermitize(B)

    if mode == "auto":
        sparse_input = sp.issparse(A) or sp.issparse(B)
        if sparse_input and dim > DENSE_CUTOFF and n_eigs <= dim // 4:
            mode = "iterative"
        else:
            mode = "dense"

    if mode == "dense":
        values, vectors = _dense_solve(A, B, n_eigs)
    elif mode == "iterative":
        values, vectors = _iterative_solve(A, B, n_eigs, sigma)
    else:
        raise ValidationError(f"unknown mode {mode!r}")

    order = np.argsort(values)
    values = np.asarray(values, dtype=float)[order]
    vectors = vectors[:, order]
    # Exact B-normalization; ARPACK/LAPACK already return near-orthonormal sets.
    Bv = (B @ vectors) if not sp.issparse(B) else B.dot(vectors)
    norms = np.sqrt(np.einsum("ij,ij->j", vectors.conj(), Bv).real)
    vectors = vectors / norms
    Bv = Bv / norms
    Av = (A @ vectors) if not sp.issparse(A) else A.dot(vectors)
    residuals = np.linalg.norm(Av - Bv * values, axis=0) / np.linalg.norm(Bv, axis=0)
    return EigenResult(values=values, vectors=vectors, residuals=residuals)


def _dense_solve(A, B, n_eigs):
    Ad = A.toarray() if sp.issparse(A) else np.asarray(A)
    Bd = B.toarray() if sp.issparse(B) else np.asarray(B)
    try:
        la.cholesky(Bd, lower=True)
    except la.LinAlgError as exc:
        raise NotPositiveDefinite("mass matrix is not positive definite") from exc
    try:
        values, vectors = la.eigh(Ad, Bd, subset_by_index=(0, n_eigs - 1))
    except la.LinAlgError as exc:
        raise SolverFailure(f"dense generalized eigensolve failed: {exc}") from exc
    return values, vectors


def _iterative_solve(A, B, n_eigs, sigma):
    if sigma is None:
        sigma = -0.5
    Ac = sp.csc_matrix(A)
    Bc = sp.csc_matrix(B)
    try:
        values, vectors = eigsh(Ac, k=n_eigs, M=Bc, sigma=sigma, which="LM")
    except ArpackNoConvergence as exc:
        raise NoConvergence(f"shift-invert Lanczos did not converge: {exc}") from exc
    except ArpackError as exc:
        raise SolverFailure(f"shift-invert Lanczos failed: {exc}") from exc
    except RuntimeError as exc:
        # scipy raises RuntimeError when the shifted factorization breaks down
        raise NotPositiveDefinite(f"shifted factorization failed: {exc}") from exc
    return values, vectors


def residual_check(A, B, result):
    """Max over pairs of ||A v - lam B v|| / ||B v||."""
    if result.values.size == 0:
        raise ValidationError("result holds no eigenpairs")
    A = _hermitize(A)
    B = _hermitize(B)
    Av = A.dot(result.vectors) if sp.issparse(A) else A @ result.vectors
    Bv = B.dot(result.vectors) if sp.issparse(B) else B @ result.vectors
    res = np.linalg.norm(Av - Bv * result.values, axis=0) / np.linalg.norm(Bv, axis=0)
    return float(res.max())
