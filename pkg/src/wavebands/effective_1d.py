"""Effective 1D fiber operators on the period cell with periodic boundary
conditions, in a truncated trigonometric basis.

Three assemblies of the same spectrum: the direct potential form
(-i d/ds + theta)^2 + h''/h + c, the first-order factorized form built from
the logarithmic derivative of h, and the thickness-corrected variant that
also carries the averaged transverse weight.  The quasi-momentum enters
exactly as a diagonal shift, so there is no phase-ramp discretization error.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .errors import SolverFailure, ValidationError
from .geometry import PeriodicScalar, a_eps, potential_V


@dataclass(frozen=True)
class FourierTruncation:
    """Basis exp(2*pi*i*m*s/L)/sqrt(L) for |m| <= max_mode."""

    period: float
    max_mode: int

    def __post_init__(self):
        if self.max_mode < 1:
            raise ValidationError("need at least one Fourier mode")

    @property
    def dim(self):
        return 2 * self.max_mode + 1

    @property
    def modes(self):
        return np.arange(-self.max_mode, self.max_mode + 1)

    def derivative_diagonal(self):
        return 2j * np.pi * self.modes / self.period

    def multiplication_matrix(self, func):
        """Hermitian Toeplitz matrix of multiplication by a real periodic function."""
        if not isinstance(func, PeriodicScalar):
            func = PeriodicScalar.from_callable(func, self.period, max(64, 4 * self.max_mode + 4))
        n = func.num_samples
        needed = 4 * self.max_mode + 4
        if n < needed:
            func = func.resample(needed)
            n = needed
        coef = np.fft.fft(func.samples) / n
        j = np.arange(2 * self.max_mode + 1)
        col = coef[j % n]
        row = coef[(-j) % n]
        return la.toeplitz(col, row)


def _hermitize(matrix):
    return 0.5 * (matrix + matrix.conj().T)


def assemble_hill(potential, period, theta, trunc, c=0.0):
    """Hill operator (-i d/ds + theta)^2 + V + c for an arbitrary potential.

    This direct-potential mode exists so the assembly can be validated
    against classical characteristic-value references; the waveguide path
    uses :func:`assemble_direct` instead.
    """
    if abs(theta) > np.pi / period + 1e-12:
        raise ValidationError("quasi-momentum outside the fundamental zone")
    diag = (2.0 * np.pi * trunc.modes / period + theta) ** 2
    matrix = np.diag(diag.astype(complex))
    matrix += trunc.multiplication_matrix(potential)
    matrix += c * np.eye(trunc.dim)
    return _hermitize(matrix)


def assemble_direct(spec, theta, trunc):
    """Second-order assembly with the potential h''/h plus the shift c."""
    return assemble_hill(potential_V(spec), spec.L, theta, trunc, c=spec.c)


def _log_derivative(spec):
    return PeriodicScalar(spec.L, spec.h.derivative().samples / spec.h.samples)


def assemble_form(spec, theta, trunc):
    """First-order factorized assembly G*G + cI with G = d/ds + i*theta - h'/h.

    Integration by parts makes this spectrally identical to the direct
    potential assembly; the pair is the module's core cross-check.
    """
    if abs(theta) > np.pi / spec.L + 1e-12:
        raise ValidationError("quasi-momentum outside the fundamental zone")
    G = np.diag(trunc.derivative_diagonal() + 1j * theta)
    G = G - trunc.multiplication_matrix(_log_derivative(spec))
    return _hermitize(G.conj().T @ G + spec.c * np.eye(trunc.dim))


def assemble_corrected(spec, eps, theta, trunc):
    """Thickness-corrected assembly carrying the averaged transverse weight.

    The factor picks up -a'/(2a) on top of the logarithmic derivative of h;
    for a centered section a is constant and this reduces to
    :func:`assemble_form`.
    """
    if abs(theta) > np.pi / spec.L + 1e-12:
        raise ValidationError("quasi-momentum outside the fundamental zone")
    avg = a_eps(spec, eps)
    half_log_a = PeriodicScalar(spec.L, 0.5 * avg.derivative().samples / avg.samples)
    combined = PeriodicScalar(spec.L, _log_derivative(spec).samples + half_log_a.resample(spec.num_samples).samples)
    G = np.diag(trunc.derivative_diagonal() + 1j * theta)
    G = G - trunc.multiplication_matrix(combined)
    return _hermitize(G.conj().T @ G + spec.c * np.eye(trunc.dim))


def effective_eigs(matrix, n_eigs):
    """Ascending eigenvalues of an assembled Hermitian matrix."""
    if n_eigs > matrix.shape[0]:
        raise ValidationError("more eigenvalues requested than basis dimension")
    try:
        values = la.eigvalsh(matrix)
    except la.LinAlgError as exc:
        raise SolverFailure(f"dense Hermitian eigensolve failed: {exc}") from exc
    return values[:n_eigs]
