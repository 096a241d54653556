import numpy as np
import pytest
from scipy.special import mathieu_a, mathieu_b

from wavebands import (FourierTruncation, SectionShape, ValidationError,
                       assemble_corrected, assemble_direct, assemble_form,
                       assemble_hill, effective_eigs)
from conftest import make_spec
from oracles import hill_eigs_dense, mathieu_a0, mathieu_b1

L = 2 * np.pi
TRUNC = FourierTruncation(L, 32)

GEOMETRIES = [
    make_spec(h_terms=[(0, 1.0, 0.0), (1, 0.3, 0.0)]),
    make_spec(h_terms=[(0, 1.0, 0.0), (2, 0.2, 0.0)]),
    make_spec(h_terms=[(0, 1.0, 0.0), (1, 0.2, 0.3), (3, 0.1, 0.0)], c=2.0),
    make_spec(h_terms=[(0, 2.0, 0.0), (1, 0.5, 1.0)]),
    make_spec(h_terms=[(0, 1.0, 0.0), (1, 0.15, 0.0), (2, 0.15, 0.7)], c=0.5),
]


class TestFourierTruncation:
    def test_dimension_and_modes(self):
        t = FourierTruncation(L, 3)
        assert t.dim == 7
        assert list(t.modes) == [-3, -2, -1, 0, 1, 2, 3]

    def test_multiplication_matrix_of_cosine(self):
        t = FourierTruncation(L, 4)
        M = t.multiplication_matrix(lambda s: np.cos(s))
        expected = np.zeros((9, 9))
        expected[np.arange(8), np.arange(1, 9)] = 0.5
        expected[np.arange(1, 9), np.arange(8)] = 0.5
        assert np.abs(M - expected).max() < 1e-13

    def test_validation(self):
        with pytest.raises(ValidationError):
            FourierTruncation(L, 0)


class TestHill:
    def test_free_closed_form(self, free_spec):
        values = effective_eigs(assemble_direct(free_spec, 0.0, TRUNC), 7)
        assert np.allclose(values, [1, 2, 2, 5, 5, 10, 10], atol=1e-10)

    def test_mathieu_periodic(self):
        for q in (0.5, 1.0, 5.0):
            H = assemble_hill(lambda s: 2 * q * np.cos(2 * s), np.pi, 0.0,
                              FourierTruncation(np.pi, 32))
            assert effective_eigs(H, 1)[0] == pytest.approx(mathieu_a0(q), abs=1e-10)
            assert effective_eigs(H, 1)[0] == pytest.approx(mathieu_a(0, q), abs=1e-8)

    def test_mathieu_antiperiodic(self):
        for q in (0.5, 1.0, 5.0):
            H = assemble_hill(lambda s: 2 * q * np.cos(2 * s), np.pi, 1.0,
                              FourierTruncation(np.pi, 32))
            assert effective_eigs(H, 1)[0] == pytest.approx(mathieu_b1(q), abs=1e-10)
            assert effective_eigs(H, 1)[0] == pytest.approx(mathieu_b(1, q), abs=1e-8)

    def test_against_quadrature_oracle(self, wavy_spec):
        values = effective_eigs(assemble_direct(wavy_spec, 0.3, TRUNC), 5)
        V = lambda s: -0.3 * np.cos(s) / (1.0 + 0.3 * np.cos(s))
        oracle = hill_eigs_dense(V, L, 0.3, 1.0, 20, 5)
        assert np.allclose(values, oracle, atol=1e-9)

    def test_theta_outside_zone(self, wavy_spec):
        with pytest.raises(ValidationError):
            assemble_direct(wavy_spec, 0.6, TRUNC)


class TestFormIdentity:
    @pytest.mark.parametrize("idx", range(len(GEOMETRIES)))
    @pytest.mark.parametrize("theta", [0.0, 0.2, 0.5])
    def test_direct_equals_form(self, idx, theta):
        spec = GEOMETRIES[idx]
        d = effective_eigs(assemble_direct(spec, theta, TRUNC), 8)
        f = effective_eigs(assemble_form(spec, theta, TRUNC), 8)
        assert np.abs(d - f).max() < 1e-8

    def test_corrected_reduces_to_form_when_centered(self, helix_spec):
        # Centered section: the averaged weight is constant, so the
        # correction term vanishes identically.
        c = effective_eigs(assemble_corrected(helix_spec, 0.2, 0.3, TRUNC), 6)
        f = effective_eigs(assemble_form(helix_spec, 0.3, TRUNC), 6)
        assert np.abs(c - f).max() < 1e-10

    def test_corrected_offset_is_small_perturbation(self):
        # The averaged weight varies along the period only when the
        # curvature does and the section is off-center.
        from wavebands import PeriodicScalar, WaveguideSpec
        k = PeriodicScalar.from_series(L, [(0, 0.5, 0.0), (1, 0.3, 0.0)])
        zero = PeriodicScalar.constant(0.0, L)
        h = PeriodicScalar.from_series(L, [(0, 1.0, 0.0), (1, 0.3, 0.0)])
        spec = WaveguideSpec(L=L, k=k, tau=zero, alpha=zero, h=h,
                             section=SectionShape(1, 1, offset=(0.3, 0.0)))
        f = effective_eigs(assemble_form(spec, 0.2, TRUNC), 4)
        c1 = effective_eigs(assemble_corrected(spec, 0.1, 0.2, TRUNC), 4)
        c2 = effective_eigs(assemble_corrected(spec, 0.05, 0.2, TRUNC), 4)
        d1 = np.abs(c1 - f).max()
        d2 = np.abs(c2 - f).max()
        assert 0 < d2 < d1 < 0.1


class TestEffectiveEigs:
    def test_too_many(self):
        with pytest.raises(ValidationError):
            effective_eigs(np.eye(3), 4)
