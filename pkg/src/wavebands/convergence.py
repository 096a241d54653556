"""Thickness sweeps: fiber eigenvalues against the effective model, with a
discretization-floor gate and log-log rate fitting."""

from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .cross_section import SectionGrid
from .effective_1d import assemble_direct, effective_eigs
from .errors import FloorTooHigh, InsufficientData, ValidationError
from .fiber3d import FiberDiscretization, assemble_fiber, fiber_eigs
from .geometry import validate_epsilon

# Below this absolute error the fiber value reproduces the effective one to
# solver precision; such entries carry no rate information.
EXACT_TOL = 1e-9


@dataclass
class SweepResult:
    epsilons: np.ndarray          # strictly decreasing
    thetas: np.ndarray
    nu: np.ndarray                # effective values, band x theta
    fiber: np.ndarray             # eps x band x theta
    errors: np.ndarray            # eps x band x theta, |E_n - nu_n|
    floor: float                  # largest refinement shift seen

    @property
    def n_bands(self):
        return self.nu.shape[0]


def _refine(disc):
    grid = disc.grid
    n1 = int(np.ceil(1.5 * (grid.n1 - 1))) + 1
    n2 = int(np.ceil(1.5 * (grid.n2 - 1))) + 1
    n_s = int(np.ceil(1.5 * disc.n_s))
    n_s += 1 - n_s % 2
    return FiberDiscretization(n_s=n_s, grid=SectionGrid(grid.section, n1, n2))


def _fiber_column(spec, eps, theta, n_max, disc):
    pencil = assemble_fiber(spec, eps, theta, disc)
    return fiber_eigs(pencil, n_max).values


def eps_sweep(spec, epsilons, thetas, n_max, disc, trunc, threads=1):
    """Error table |E_n(eps, theta) - nu_n(theta)| over the sweep.

    Each thickness is re-solved once at a 1.5x-refined discretization (at a
    single representative theta) and the induced eigenvalue shift must stay
    below 10% of the smallest model error in the sweep; otherwise the rate
    would be measuring the mesh, and the sweep aborts with FloorTooHigh.
    """
    epsilons = np.asarray(epsilons, dtype=float)
    thetas = np.asarray(thetas, dtype=float)
    if epsilons.size < 1 or np.any(np.diff(epsilons) >= 0.0):
        raise ValidationError("thickness list must be strictly decreasing")
    for eps in epsilons:
        validate_epsilon(spec, eps)

    nu = np.column_stack([
        effective_eigs(assemble_direct(spec, theta, trunc), n_max)
        for theta in thetas
    ])

    jobs = [(eps, theta) for eps in epsilons for theta in thetas]
    columns = parallel_map(
        lambda job: _fiber_column(spec, job[0], job[1], n_max, disc),
        jobs, threads=threads,
    )
    fiber = np.array(columns).reshape(epsilons.size, thetas.size, n_max)
    fiber = np.transpose(fiber, (0, 2, 1))
    errors = np.abs(fiber - nu[None, :, :])

    # Floor gate: one refinement step per thickness at the mid theta.  The
    # discretization error and the model error both shrink with the
    # thickness, so the comparison is per (band, thickness); entries
    # already at solver precision carry no rate and are excluded rather
    # than forcing an unreachable floor.
    fine = _refine(disc)
    j_mid = thetas.size // 2
    shifts = np.array(parallel_map(
        lambda i: np.abs(
            _fiber_column(spec, epsilons[i], thetas[j_mid], n_max, fine)
            - fiber[i, :, j_mid]
        ),
        range(epsilons.size), threads=threads,
    ))
    floor = float(shifts.max())
    for i, eps in enumerate(epsilons):
        for n in range(n_max):
            informative = errors[i, n, :][errors[i, n, :] > EXACT_TOL]
            if informative.size == 0:
                continue
            smallest = float(informative.min())
            if shifts[i, n] > 0.1 * smallest:
                raise FloorTooHigh(
                    f"band {n + 1}, eps={eps:g}: refinement shifts the "
                    f"eigenvalue by {shifts[i, n]:.3g}, above 10% of the "
                    f"smallest model error {smallest:.3g}; tighten the "
                    f"discretization"
                )
    return SweepResult(epsilons=epsilons, thetas=thetas, nu=nu, fiber=fiber,
                       errors=errors, floor=floor)


def fit_rate(sweep):
    """Least-squares slope of log(error) against log(eps), per (band, theta).

    Returns (slopes, min_slope); slopes has shape band x theta.  Entries
    whose errors sit at solver precision throughout the sweep reproduce the
    model exactly; they are reported as +inf (faster than any rate) and do
    not enter the minimum unless every entry is exact.
    """
    if sweep.epsilons.size < 3:
        raise InsufficientData("need at least 3 thickness points to fit a rate")
    log_eps = np.log(sweep.epsilons)
    n_bands, n_theta = sweep.nu.shape
    slopes = np.full((n_bands, n_theta), np.inf)
    fitted = []
    for n in range(n_bands):
        for j in range(n_theta):
            err = sweep.errors[:, n, j]
            if np.all(err <= EXACT_TOL):
                continue
            slopes[n, j] = np.polyfit(log_eps, np.log(np.maximum(err, 1e-300)), 1)[0]
            fitted.append(slopes[n, j])
    min_slope = float(min(fitted)) if fitted else np.inf
    return slopes, min_slope
