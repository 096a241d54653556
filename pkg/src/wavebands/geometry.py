"""Waveguide geometry: periodic coefficient functions, the transverse
weight, the twist/scaling vector field, and the reduced 1D coefficients.

All smooth periodic data is represented by :class:`PeriodicScalar`, uniform
samples with trigonometric interpolation, so derivatives are spectrally
accurate and never user-supplied.
"""

from dataclasses import dataclass

import numpy as np

from .errors import TubeSelfIntersecting, ValidationError

# Safety margin keeping the transverse weight bounded away from zero.
DELTA_SAFE = 0.05


class PeriodicScalar:
    """A smooth L-periodic real function stored as uniform samples.

    Values anywhere come from the trigonometric interpolant of the samples;
    derivatives of any order are obtained by multiplying Fourier
    coefficients, so they are exact for band-limited data and spectrally
    accurate for smooth data.
    """

    def __init__(self, period, samples):
        samples = np.asarray(samples, dtype=float)
        if samples.ndim != 1:
            raise ValidationError("samples must be a one-dimensional array")
        n = samples.size
        if n < 4 or n % 2 != 0:
            raise ValidationError("need an even number of samples, at least 4")
        if not period > 0.0:
            raise ValidationError("period must be positive")
        self.period = float(period)
        self._samples = samples.copy()
        self._samples.setflags(write=False)
        self._coef = np.fft.fft(samples) / n
        # Integer mode numbers in FFT layout (Nyquist stored as -n/2).
        self._modes = np.fft.fftfreq(n, d=1.0 / n)

    @classmethod
    def constant(cls, value, period, num_samples=64):
        return cls(period, np.full(num_samples, float(value)))

    @classmethod
    def from_callable(cls, func, period, num_samples=64):
        grid = np.arange(num_samples) * (period / num_samples)
        return cls(period, np.asarray(func(grid), dtype=float))

    @classmethod
    def from_series(cls, period, terms, num_samples=None):
        """Build sum(amp * cos(2*pi*m*s/period + phase)) from (m, amp, phase) terms."""
        terms = [(int(m), float(amp), float(phase)) for m, amp, phase in terms]
        if num_samples is None:
            max_mode = max((m for m, _, _ in terms), default=0)
            num_samples = max(64, 4 * max_mode + 4)
            num_samples += num_samples % 2
        grid = np.arange(num_samples) * (period / num_samples)
        samples = np.zeros(num_samples)
        for m, amp, phase in terms:
            samples += amp * np.cos(2.0 * np.pi * m * grid / period + phase)
        return cls(period, samples)

    @property
    def samples(self):
        return self._samples

    @property
    def num_samples(self):
        return self._samples.size

    @property
    def grid(self):
        n = self.num_samples
        return np.arange(n) * (self.period / n)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        phase = np.exp(
            2j * np.pi / self.period * np.multiply.outer(s.ravel(), self._modes)
        )
        values = (phase @ self._coef).real.reshape(s.shape)
        return values if values.ndim else float(values)

    def derivative(self, order=1):
        """Spectral derivative of the given order, as a new PeriodicScalar."""
        if order < 1:
            raise ValidationError("derivative order must be >= 1")
        n = self.num_samples
        mult = (2j * np.pi * self._modes / self.period) ** order
        if order % 2 == 1:
            # The sawtooth Nyquist mode has no well-defined odd derivative.
            mult[n // 2] = 0.0
        samples = np.fft.ifft(np.fft.fft(self._samples) * mult).real
        return PeriodicScalar(self.period, samples)

    def resample(self, num_samples):
        grid = np.arange(num_samples) * (self.period / num_samples)
        return PeriodicScalar(self.period, self(grid))

    def min(self):
        return float(self._samples.min())

    def max(self):
        return float(self._samples.max())


@dataclass(frozen=True)
class SectionShape:
    """Axis-aligned rectangular cross section with an optional center offset."""

    a: float
    b: float
    offset: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not (self.a > 0.0 and self.b > 0.0):
            raise ValidationError("section side lengths must be positive")
        object.__setattr__(self, "offset", (float(self.offset[0]), float(self.offset[1])))

    @property
    def area(self):
        return self.a * self.b

    @property
    def centroid(self):
        return self.offset

    @property
    def max_radius(self):
        """Largest |y| over the closed rectangle (attained at a corner)."""
        o1, o2 = self.offset
        x = abs(o1) + 0.5 * self.a
        y = abs(o2) + 0.5 * self.b
        return float(np.hypot(x, y))

    @property
    def bounds(self):
        o1, o2 = self.offset
        return (o1 - 0.5 * self.a, o1 + 0.5 * self.a, o2 - 0.5 * self.b, o2 + 0.5 * self.b)


@dataclass(frozen=True)
class WaveguideSpec:
    """Full periodic waveguide geometry.

    ``k``, ``tau``, ``alpha`` are curvature, torsion and rotation angle of
    the reference curve; ``h`` is the cross-section scaling profile and
    ``c`` the positive spectral shift added to every operator.
    """

    L: float
    k: PeriodicScalar
    tau: PeriodicScalar
    alpha: PeriodicScalar
    h: PeriodicScalar
    section: SectionShape
    c: float = 1.0

    def __post_init__(self):
        if not self.L > 0.0:
            raise ValidationError("period must be positive")
        if not self.c > 0.0:
            raise ValidationError("shift constant c must be positive")
        for name in ("k", "tau", "alpha", "h"):
            func = getattr(self, name)
            if abs(func.period - self.L) > 1e-12 * max(1.0, self.L):
                raise ValidationError(f"{name} has period {func.period}, expected {self.L}")
        # Common sample grid so coefficient arrays combine pointwise.
        n_common = max(64, *(getattr(self, name).num_samples for name in ("k", "tau", "alpha", "h")))
        n_common += n_common % 2
        for name in ("k", "tau", "alpha", "h"):
            func = getattr(self, name)
            if func.num_samples != n_common:
                object.__setattr__(self, name, func.resample(n_common))
        if self.h.min() <= 0.0:
            raise ValidationError("h positivity: the scaling profile must stay positive")
        if abs(self.alpha(0.0)) > 1e-12:
            raise ValidationError("rotation angle must vanish at s = 0")

    @property
    def h_bounds(self):
        """Sampled (min, max) of the scaling profile."""
        return self.h.min(), self.h.max()

    @property
    def num_samples(self):
        return self.h.num_samples


def max_epsilon(spec):
    """Largest admissible thickness under the positivity margin."""
    k_max = float(np.abs(spec.k.samples).max())
    radius = spec.section.max_radius
    if k_max * radius == 0.0:
        return np.inf
    return (1.0 - DELTA_SAFE) / (k_max * radius)


def validate_epsilon(spec, eps):
    """Check that the tube of thickness ``eps`` does not self-intersect.

    The transverse weight stays >= DELTA_SAFE on the whole cell iff
    eps * max|k| * max|y| < 1 - DELTA_SAFE.
    """
    if not eps > 0.0:
        raise ValidationError("thickness must be positive")
    limit = max_epsilon(spec)
    if eps >= limit:
        raise TubeSelfIntersecting(
            f"tube self-intersecting: eps={eps:g} exceeds the admissible bound {limit:g}"
        )
    return True


def eval_beta(spec, eps, s, y):
    """Transverse weight 1 - eps*k(s)*(y1*cos(alpha) + y2*sin(alpha)).

    ``y`` is an array with last dimension 2; ``s`` must broadcast against
    ``y[..., 0]``.
    """
    y = np.asarray(y, dtype=float)
    s = np.asarray(s, dtype=float)
    alpha = spec.alpha(s)
    proj = y[..., 0] * np.cos(alpha) + y[..., 1] * np.sin(alpha)
    return 1.0 - eps * spec.k(s) * proj


def eval_Rh(spec, s, y):
    """Twist/scaling vector field (rot term + logarithmic scaling term).

    Returns an array with last dimension 2, broadcast over ``s`` and ``y``.
    """
    y = np.asarray(y, dtype=float)
    s = np.asarray(s, dtype=float)
    twist = spec.tau(s) + spec.alpha.derivative()(s)
    log_h = spec.h.derivative()(s) / spec.h(s)
    y1, y2 = y[..., 0], y[..., 1]
    r1 = twist * y2 - log_h * y1
    r2 = -twist * y1 - log_h * y2
    return np.stack(np.broadcast_arrays(r1, r2), axis=-1)


def potential_V(spec):
    """Effective 1D potential h''/h (the shift c is added at assembly time)."""
    h2 = spec.h.derivative(2)
    return PeriodicScalar(spec.L, h2.samples / spec.h.samples)


def a_eps(spec, eps):
    """Section-averaged transverse weight, via the centroid closed form.

    The weight is affine in y, so its section integral is
    |S| * (1 - eps*k(s)*(c1*cos(alpha) + c2*sin(alpha))) with (c1, c2)
    the section centroid.
    """
    validate_epsilon(spec, eps)
    c1, c2 = spec.section.centroid
    alpha = spec.alpha.samples
    proj = c1 * np.cos(alpha) + c2 * np.sin(alpha)
    samples = spec.section.area * (1.0 - eps * spec.k.samples * proj)
    if samples.min() <= 0.0:
        raise ValidationError("averaged weight lost positivity")
    return PeriodicScalar(spec.L, samples)
