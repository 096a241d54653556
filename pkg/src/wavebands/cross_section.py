"""Neumann eigenproblem on the cross section, unweighted and with the
transverse weight, plus certification of the uniform spectral gap.

Bilinear elements on a structured rectangle grid: Neumann conditions are
natural in the quadratic form, so no boundary handling is needed.  All
coefficients are evaluated at the 2x2 Gauss points of each element, which
is exact for the affine-in-y transverse weight.
"""

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .eigensolve import EigenResult, generalized_eigs
from .errors import GapViolation, ValidationError
from .geometry import eval_beta, validate_epsilon

_GAUSS = 1.0 / np.sqrt(3.0)


class SectionGrid:
    """Nodal discretization of a rectangular cross section.

    Exposes sparse evaluation operators from nodal values to the element
    Gauss points (values and both gradient components), from which mass and
    stiffness matrices with arbitrary pointwise weights are assembled as
    E^T W E products.
    """

    def __init__(self, section, n1, n2):
        if n1 < 3 or n2 < 3:
            raise ValidationError("need at least 3 nodes per direction")
        self.section = section
        self.n1 = int(n1)
        self.n2 = int(n2)
        x_lo, x_hi, y_lo, y_hi = section.bounds
        self.x = np.linspace(x_lo, x_hi, n1)
        self.y = np.linspace(y_lo, y_hi, n2)
        dx = self.x[1] - self.x[0]
        dy = self.y[1] - self.y[0]
        self.dx, self.dy = dx, dy

        nel = (n1 - 1) * (n2 - 1)
        # Element (i, j) has corner nodes (i+a, j+b), a,b in {0,1}; node
        # index is i*n2 + j.
        ei, ej = np.meshgrid(np.arange(n1 - 1), np.arange(n2 - 1), indexing="ij")
        ei = ei.ravel()
        ej = ej.ravel()
        centers_x = self.x[ei] + 0.5 * dx
        centers_y = self.y[ej] + 0.5 * dy

        rows, cols, vals, vals_dx, vals_dy = [], [], [], [], []
        qx, qy = [], []
        q_index = 0
        for xi_loc, eta_loc in ((-_GAUSS, -_GAUSS), (_GAUSS, -_GAUSS),
                                (-_GAUSS, _GAUSS), (_GAUSS, _GAUSS)):
            rows_q = q_index * nel + np.arange(nel)
            qx.append(centers_x + 0.5 * dx * xi_loc)
            qy.append(centers_y + 0.5 * dy * eta_loc)
            for a in (0, 1):
                for b in (0, 1):
                    shape = 0.25 * (1 + (2 * a - 1) * xi_loc) * (1 + (2 * b - 1) * eta_loc)
                    d_shape_x = 0.25 * (2 * a - 1) * (1 + (2 * b - 1) * eta_loc) * (2.0 / dx)
                    d_shape_y = 0.25 * (1 + (2 * a - 1) * xi_loc) * (2 * b - 1) * (2.0 / dy)
                    node = (ei + a) * n2 + (ej + b)
                    rows.append(rows_q)
                    cols.append(node)
                    vals.append(np.full(nel, shape))
                    vals_dx.append(np.full(nel, d_shape_x))
                    vals_dy.append(np.full(nel, d_shape_y))
            q_index += 1

        nq = 4 * nel
        rows = np.concatenate(rows)
        cols = np.concatenate(cols)
        shape_mat = (nq, self.ndof)
        self.eval_op = sp.csr_matrix((np.concatenate(vals), (rows, cols)), shape=shape_mat)
        self.grad_ops = (
            sp.csr_matrix((np.concatenate(vals_dx), (rows, cols)), shape=shape_mat),
            sp.csr_matrix((np.concatenate(vals_dy), (rows, cols)), shape=shape_mat),
        )
        self.quad_points = np.column_stack([np.concatenate(qx), np.concatenate(qy)])
        self.quad_weights = np.full(nq, 0.25 * dx * dy)

    @property
    def ndof(self):
        return self.n1 * self.n2

    def _weights(self, weight):
        w = self.quad_weights
        if weight is None:
            return w
        weight = np.asarray(weight, dtype=float)
        if weight.shape != w.shape:
            raise ValidationError("weight array must match the quadrature points")
        return w * weight

    def mass(self, weight=None):
        W = sp.diags(self._weights(weight))
        return (self.eval_op.T @ W @ self.eval_op).tocsr()

    def stiffness(self, weight=None):
        W = sp.diags(self._weights(weight))
        gx, gy = self.grad_ops
        return (gx.T @ W @ gx + gy.T @ W @ gy).tocsr()


@dataclass
class SectionSpectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray

    @classmethod
    def from_result(cls, result: EigenResult):
        return cls(result.values, result.vectors, result.residuals)


def neumann_eigs(grid, n_eigs):
    """Lowest eigenvalues of the free Neumann problem on the section."""
    if n_eigs > grid.ndof:
        raise ValidationError("more eigenvalues requested than degrees of freedom")
    result = generalized_eigs(grid.stiffness(), grid.mass(), n_eigs, sigma=-0.5)
    return SectionSpectrum.from_result(result)


def weighted_section_eigs(grid, spec, eps, s, n_eigs):
    """Eigenvalues of the section problem weighted by the transverse weight at s."""
    validate_epsilon(spec, eps)
    beta = eval_beta(spec, eps, s, grid.quad_points)
    result = generalized_eigs(
        grid.stiffness(weight=beta), grid.mass(weight=beta), n_eigs, sigma=-0.5
    )
    return SectionSpectrum.from_result(result)


def uniform_gap(grid, spec, eps, s_samples):
    """Min over an s-grid of the second weighted section eigenvalue.

    A positive result certifies the uniform transverse spectral gap; a
    nonpositive one signals a discretization or geometry error.
    """
    if s_samples < 8:
        raise ValidationError("need at least 8 samples along the period")
    gap = np.inf
    for s in np.arange(s_samples) * (spec.L / s_samples):
        spectrum = weighted_section_eigs(grid, spec, eps, s, 2)
        gap = min(gap, float(spectrum.eigenvalues[1]))
    if gap <= 0.0:
        raise GapViolation(f"transverse gap came out nonpositive: {gap:g}")
    return gap
