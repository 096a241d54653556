"""Brillouin-zone sweeps, band tables, gap analysis and spectral checks.

Bands are computed on a uniform half-zone grid [0, pi/L]; the even
symmetry of the fiber eigenvalues in the quasi-momentum supplies the
other half, and that symmetry is itself re-verified on random negative
samples rather than assumed silently.
"""

from dataclasses import dataclass, field

import numpy as np

from ._parallel import parallel_map
from .effective_1d import assemble_corrected, assemble_direct, effective_eigs
from .errors import (InconsistentBands, PropertyViolation, SolverFailure,
                     ValidationError)
from .fiber3d import assemble_fiber, fiber_eigs


def brillouin_grid(L, n_theta):
    """Uniform half-zone grid on [0, pi/L]; n_theta odd so both endpoints
    and the midpoint are nodes."""
    if n_theta < 9 or n_theta % 2 == 0:
        raise ValidationError("need an odd theta count, at least 9")
    return np.linspace(0.0, np.pi / L, n_theta)


def effective_solver(spec, trunc):
    """Per-theta solver closure for the effective operator."""
    def solve(theta, n_bands):
        return effective_eigs(assemble_direct(spec, theta, trunc), n_bands)
    return solve


def corrected_solver(spec, eps, trunc):
    """Per-theta solver closure for the thickness-corrected effective operator."""
    def solve(theta, n_bands):
        return effective_eigs(assemble_corrected(spec, eps, theta, trunc), n_bands)
    return solve


def fiber_solver(spec, eps, disc):
    """Per-theta solver closure for the full fiber pencil."""
    def solve(theta, n_bands):
        pencil = assemble_fiber(spec, eps, theta, disc)
        return fiber_eigs(pencil, n_bands).values
    return solve


@dataclass
class BandStructure:
    """Eigenvalue table over the half-zone grid.

    ``table[n, j]`` is the (n+1)-th eigenvalue at ``thetas[j]``; columns are
    ascending with multiplicity.  ``source`` tags the operator family
    ("effective", "corrected" or "fiber"); ``epsilon`` is None for the
    purely effective source.
    """

    period: float
    thetas: np.ndarray
    table: np.ndarray
    source: str
    epsilon: float = None

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=float)
        self.table = np.asarray(self.table, dtype=float)
        if self.table.shape[1] != self.thetas.size:
            raise ValidationError("band table does not match the theta grid")
        if np.any(np.diff(self.table, axis=0) < -1e-10):
            raise ValidationError("band table columns must be ascending")

    @property
    def n_bands(self):
        return self.table.shape[0]

    @property
    def full_thetas(self):
        """Symmetric extension of the grid to [-pi/L, pi/L]."""
        return np.concatenate([-self.thetas[:0:-1], self.thetas])

    @property
    def full_table(self):
        return np.concatenate([self.table[:, :0:-1], self.table], axis=1)

    def band_intervals(self):
        """Per-band [min, max] over the grid."""
        return np.column_stack([self.table.min(axis=1), self.table.max(axis=1)])

    def grid_tolerance(self):
        """Second-difference estimate of the theta-grid resolution error."""
        if self.thetas.size < 3:
            return 1e-9
        second = np.abs(np.diff(self.table, n=2, axis=1))
        return float(2.0 * second.max() + 1e-9) if second.size else 1e-9

    def continuity_bound(self):
        """Largest per-band jump between adjacent grid points."""
        return float(np.abs(np.diff(self.table, axis=1)).max())


def compute_bands(solver, n_bands, thetas, source, period, epsilon=None, threads=1):
    """Fill the band table by independent per-theta eigensolves."""
    thetas = np.asarray(thetas, dtype=float)
    if n_bands < 1:
        raise ValidationError("need at least one band")

    def job(theta):
        try:
            values = np.asarray(solver(theta, n_bands), dtype=float)
        except SolverFailure as exc:
            raise SolverFailure(f"eigensolve failed at theta={theta:.12g}: {exc}") from exc
        if values.size < n_bands:
            raise SolverFailure(f"solver returned too few eigenvalues at theta={theta:.12g}")
        return np.sort(values[:n_bands])

    columns = parallel_map(job, thetas, threads=threads)
    return BandStructure(period=period, thetas=thetas,
                         table=np.column_stack(columns), source=source,
                         epsilon=epsilon)


@dataclass
class Gap:
    n: int            # gap sits between bands n and n+1 (1-based)
    lower: float
    upper: float
    rule: str         # "endpoint" or "extrema"

    @property
    def width(self):
        return max(0.0, self.upper - self.lower)


@dataclass
class GapReport:
    source: str
    grid_tol: float
    gaps: list = field(default_factory=list)
    endpoint_values: np.ndarray = None   # bands x 2 columns (theta=0, theta=pi/L)

    def open_gaps(self, factor=10.0):
        return [g for g in self.gaps if g.width > factor * self.grid_tol]


def _endpoint_gaps(bands):
    """Gap intervals from the alternating endpoint rule: odd-index gaps sit
    between consecutive antiperiodic values, even-index gaps between
    consecutive periodic values."""
    nu0 = bands.table[:, 0]
    nu_pi = bands.table[:, -1]
    gaps = []
    for n in range(1, bands.n_bands):
        if n % 2 == 1:
            lower, upper = nu_pi[n - 1], nu_pi[n]
        else:
            lower, upper = nu0[n - 1], nu0[n]
        gaps.append(Gap(n=n, lower=float(lower), upper=float(upper), rule="endpoint"))
    return gaps


def _extrema_gaps(bands):
    intervals = bands.band_intervals()
    return [
        Gap(n=n, lower=float(intervals[n - 1, 1]), upper=float(intervals[n, 0]),
            rule="extrema")
        for n in range(1, bands.n_bands)
    ]


def analyze_gaps(bands):
    """Gap report for one band structure.

    Effective-family sources use the endpoint rule and cross-check it
    against grid extrema; the fiber source has no proven monotonicity, so
    only the extrema rule applies.
    """
    grid_tol = bands.grid_tolerance()
    endpoint_values = bands.table[:, [0, -1]].copy()
    if bands.source in ("effective", "corrected"):
        gaps = _endpoint_gaps(bands)
        check = _extrema_gaps(bands)
        for g, e in zip(gaps, check):
            if (abs(g.lower - e.lower) > grid_tol + 1e-9
                    or abs(g.upper - e.upper) > grid_tol + 1e-9):
                raise InconsistentBands(
                    f"band {g.n}: endpoint rule ({g.lower:.9g}, {g.upper:.9g}) vs "
                    f"grid extrema ({e.lower:.9g}, {e.upper:.9g}) beyond tolerance "
                    f"{grid_tol:.3g}"
                )
    else:
        gaps = _extrema_gaps(bands)
    return GapReport(source=bands.source, grid_tol=grid_tol, gaps=gaps,
                     endpoint_values=endpoint_values)


def symmetry_monotonicity_check(bands, solver=None, rng_seed=7):
    """Verify evenness in theta and the monotone/interlacing band pattern.

    Evenness is checked by re-solving at random negative quasi-momenta when
    a solver is supplied.  Monotonicity is non-strict on the grid with
    strictness required away from the endpoints; the endpoint interlacing
    chain nu_1(0) < nu_1(pi/L) <= nu_2(pi/L) < nu_2(0) <= ... is verified
    directly.  Returns a diagnostics dict; raises PropertyViolation on the
    first failure.
    """
    if bands.source not in ("effective", "corrected"):
        raise ValidationError("property checks apply to the effective family")
    table = bands.table
    thetas = bands.thetas
    tol = 1e-9
    diagnostics = {"symmetry_max": 0.0, "interlacing": [], "monotone": True}

    if solver is not None:
        rng = np.random.default_rng(rng_seed)
        picks = rng.choice(np.arange(1, thetas.size - 1), size=min(5, thetas.size - 2),
                           replace=False)
        for j in picks:
            mirrored = np.sort(np.asarray(solver(-thetas[j], bands.n_bands), dtype=float))
            diff = float(np.abs(mirrored[: bands.n_bands] - table[:, j]).max())
            diagnostics["symmetry_max"] = max(diagnostics["symmetry_max"], diff)
            if diff > 1e-10 * (1.0 + np.abs(table[:, j]).max()):
                raise PropertyViolation(
                    f"band values not even in theta at |theta|={thetas[j]:.9g}: "
                    f"max deviation {diff:.3g}"
                )

    # Row order must be irrelevant: analyze on the sorted grid.
    order = np.argsort(thetas)
    table = table[:, order]
    for n in range(bands.n_bands):
        row = table[n]
        steps = np.diff(row)
        expect_up = n % 2 == 0   # odd bands (1-based) increase on [0, pi/L]
        signed = steps if expect_up else -steps
        if np.any(signed < -tol):
            j = int(np.argmin(signed))
            diagnostics["monotone"] = False
            raise PropertyViolation(
                f"band {n + 1} not monotone between theta={thetas[order][j]:.9g} "
                f"and theta={thetas[order][j + 1]:.9g}"
            )
        interior = signed[1:-1]
        if interior.size and np.any(interior <= 0.0):
            j = 1 + int(np.argmin(interior))
            diagnostics["monotone"] = False
            raise PropertyViolation(
                f"band {n + 1} not strictly monotone in the open zone near "
                f"theta={thetas[order][j]:.9g}"
            )

    nu0 = table[:, 0]
    nu_pi = table[:, -1]
    chain = []
    for n in range(bands.n_bands - 1):
        if n % 2 == 0:
            lo, hi, kind = nu_pi[n], nu_pi[n + 1], "antiperiodic"
        else:
            lo, hi, kind = nu0[n], nu0[n + 1], "periodic"
        chain.append((n + 1, float(lo), float(hi), kind))
        if hi < lo - tol:
            raise PropertyViolation(
                f"interlacing violated between bands {n + 1} and {n + 2}: "
                f"{lo:.9g} > {hi:.9g}"
            )
    diagnostics["interlacing"] = chain
    return diagnostics


@dataclass
class BorgVerdict:
    constant: bool
    first_gap_index: int        # n1 of the first open gap, or None
    bands_checked: int
    exhausted: bool             # True when no gap was found but bands ran out
    gap_widths: np.ndarray = None

    @property
    def label(self):
        if self.constant:
            return "CONSTANT"
        return "NONCONSTANT"


def borg_test(spec, n_bands, tol=None, trunc=None):
    """Constant-potential dichotomy from periodic/antiperiodic degeneracies.

    The potential is constant iff every even-index periodic pair and every
    odd-index antiperiodic pair is degenerate; the first non-degenerate pair
    index is the first open gap.  ``exhausted`` distinguishes a genuinely
    constant verdict from simply not looking at enough bands.
    """
    from .effective_1d import FourierTruncation
    if trunc is None:
        trunc = FourierTruncation(spec.L, 48)
    nu0 = effective_eigs(assemble_direct(spec, 0.0, trunc), n_bands + 1)
    nu_pi = effective_eigs(assemble_direct(spec, np.pi / spec.L, trunc), n_bands + 1)

    widths = np.zeros(n_bands)
    first_gap = None
    for n in range(1, n_bands + 1):
        values = nu_pi if n % 2 == 1 else nu0
        width = float(values[n] - values[n - 1])
        widths[n - 1] = width
        scale = tol if tol is not None else 1e-7 * (1.0 + abs(float(values[n])))
        if first_gap is None and width > scale:
            first_gap = n
    constant = first_gap is None
    return BorgVerdict(constant=constant, first_gap_index=first_gap,
                       bands_checked=n_bands, exhausted=constant,
                       gap_widths=widths)
