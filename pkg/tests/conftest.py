import numpy as np
import pytest

from wavebands import (PeriodicScalar, SectionShape, WaveguideSpec)

L = 2 * np.pi


def make_spec(k=0.0, tau=0.0, h_terms=None, section=None, c=1.0, period=L,
              alpha_terms=None):
    """Convenience builder for test geometries."""
    def coeff(value):
        return PeriodicScalar.constant(value, period)
    h = (PeriodicScalar.from_series(period, h_terms) if h_terms
         else coeff(1.0))
    if alpha_terms:
        alpha = PeriodicScalar.from_series(period, alpha_terms)
    else:
        alpha = coeff(0.0)
    return WaveguideSpec(
        L=period, k=coeff(k), tau=coeff(tau), alpha=alpha, h=h,
        section=section or SectionShape(1.0, 1.0), c=c,
    )


@pytest.fixture
def free_spec():
    """Straight tube, unit scaling: every operator has a closed form."""
    return make_spec()


@pytest.fixture
def wavy_spec():
    """Straight tube with the standard nonconstant scaling profile."""
    return make_spec(h_terms=[(0, 1.0, 0.0), (1, 0.3, 0.0)])


@pytest.fixture
def helix_spec():
    """Unit curvature and torsion with the standard scaling profile."""
    return make_spec(k=1.0, tau=1.0, h_terms=[(0, 1.0, 0.0), (1, 0.3, 0.0)])
