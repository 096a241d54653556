"""Independent reference computations used by the test suite.

These deliberately avoid the package's own assembly/solve code paths so
that agreement is evidence, not circularity.
"""

import numpy as np
import scipy.linalg as la
from scipy.optimize import brentq


def _cf_even(a, q, tail=80):
    """Tail-to-head continued fraction for the even cosine-series ratios."""
    v = 0.0
    for r in range(tail, 1, -1):
        v = q / ((a - 4.0 * r * r) - q * v)
    return v


def mathieu_a0(q):
    """Lowest periodic characteristic value a_0(q) of y'' + (a - 2q cos 2x)y = 0."""
    def f(a):
        return a - 2.0 * q * q / ((a - 4.0) - q * _cf_even(a, q))
    lo = -2.0 * q * q - 2.0 * q - 1.0
    return brentq(f, lo, 0.5, xtol=1e-14, rtol=8.9e-16)


def _cf_odd(a, q, tail=80):
    """Continued fraction for the odd sine-series ratios B_3/B_1, ..."""
    w = 0.0
    for r in range(tail, 0, -1):
        w = q / ((a - (2.0 * r + 1.0) ** 2) - q * w)
    return w


def mathieu_b1(q):
    """Lowest antiperiodic characteristic value b_1(q)."""
    def f(a):
        return (a - 1.0 + q) - q * _cf_odd(a, q)
    lo = -(2.0 * q + 0.25 * q * q + 2.0)
    return brentq(f, lo, 1.0, xtol=1e-14, rtol=8.9e-16)


def dense_pencil_eigs(A, B):
    """All eigenvalues of A v = lam B v via the non-symmetric route B^{-1}A.

    Independent of the package's Cholesky-reduction path; returns sorted
    real parts (imaginary parts must be negligible for Hermitian input).
    """
    values = la.eig(la.solve(B, A), right=False)
    assert np.abs(values.imag).max() < 1e-8
    return np.sort(values.real)


def hill_eigs_dense(potential, period, theta, c, n_modes, n_eigs):
    """Effective 1D eigenvalues by an independent dense Fourier assembly.

    Uses explicit quadrature for the potential matrix elements instead of
    FFT coefficients, so it shares no code with the package assembly.
    """
    modes = np.arange(-n_modes, n_modes + 1)
    n_quad = 8 * n_modes + 8
    s = np.arange(n_quad) * (period / n_quad)
    V = potential(s)
    M = np.zeros((modes.size, modes.size), dtype=complex)
    for i, m in enumerate(modes):
        for j, mp in enumerate(modes):
            phase = np.exp(-2j * np.pi * (m - mp) * s / period)
            M[i, j] = np.mean(V * phase)
    H = np.diag((2.0 * np.pi * modes / period + theta) ** 2 + c).astype(complex) + M
    return np.sort(la.eigvalsh(0.5 * (H + H.conj().T)))[:n_eigs]
