import numpy as np
import pytest

from wavebands import (GapViolation, SectionGrid, SectionShape,
                       ValidationError, neumann_eigs, uniform_gap,
                       weighted_section_eigs)
from conftest import make_spec


@pytest.fixture(scope="module")
def unit_grid():
    return SectionGrid(SectionShape(1.0, 1.0), 17, 17)


class TestSectionGrid:
    def test_mass_integrates_area(self, unit_grid):
        ones = np.ones(unit_grid.ndof)
        assert ones @ (unit_grid.mass() @ ones) == pytest.approx(1.0)

    def test_stiffness_kernel_constants(self, unit_grid):
        ones = np.ones(unit_grid.ndof)
        assert np.abs(unit_grid.stiffness() @ ones).max() < 1e-12

    def test_stiffness_of_linear(self, unit_grid):
        # grad(y1) = (1, 0): Dirichlet energy equals the area
        y1 = np.repeat(unit_grid.x, unit_grid.n2)
        assert y1 @ (unit_grid.stiffness() @ y1) == pytest.approx(1.0)

    def test_weighted_mass(self, unit_grid):
        w = unit_grid.quad_points[:, 0] + 2.0   # integral of (y1 + 2) over S
        ones = np.ones(unit_grid.ndof)
        assert ones @ (unit_grid.mass(weight=w) @ ones) == pytest.approx(2.0)

    def test_validation(self):
        with pytest.raises(ValidationError):
            SectionGrid(SectionShape(1, 1), 2, 5)
        with pytest.raises(ValidationError):
            SectionGrid(SectionShape(1, 1), 5, 5).mass(weight=np.ones(3))


class TestNeumannEigs:
    def test_unit_square_closed_form(self):
        grid = SectionGrid(SectionShape(1.0, 1.0), 33, 33)
        spectrum = neumann_eigs(grid, 5)
        exact = np.array([0.0, np.pi ** 2, np.pi ** 2, 2 * np.pi ** 2,
                          4 * np.pi ** 2])
        rel = np.abs(spectrum.eigenvalues[1:] - exact[1:]) / exact[1:]
        assert spectrum.eigenvalues[0] == pytest.approx(0.0, abs=1e-9)
        assert rel.max() < 5e-3

    def test_rectangle_sides(self):
        grid = SectionGrid(SectionShape(2.0, 1.0), 41, 21)
        spectrum = neumann_eigs(grid, 2)
        assert spectrum.eigenvalues[1] == pytest.approx((np.pi / 2) ** 2,
                                                        rel=2e-3)

    def test_offset_invariance(self):
        base = neumann_eigs(SectionGrid(SectionShape(1, 1), 15, 15), 4)
        moved = neumann_eigs(
            SectionGrid(SectionShape(1, 1, offset=(0.3, -0.2)), 15, 15), 4)
        assert np.allclose(base.eigenvalues, moved.eigenvalues, atol=1e-10)

    def test_too_many_eigs(self, unit_grid):
        with pytest.raises(ValidationError):
            neumann_eigs(unit_grid, unit_grid.ndof + 1)


class TestWeightedEigs:
    def test_small_eps_near_unweighted(self, unit_grid):
        spec = make_spec(k=1.0)
        unweighted = neumann_eigs(unit_grid, 3).eigenvalues
        weighted = weighted_section_eigs(unit_grid, spec, 1e-4, 0.0, 3).eigenvalues
        assert np.abs(weighted - unweighted).max() < 1e-2

    def test_straight_tube_weight_is_identity(self, unit_grid, free_spec):
        unweighted = neumann_eigs(unit_grid, 3).eigenvalues
        weighted = weighted_section_eigs(unit_grid, free_spec, 0.3, 1.0, 3).eigenvalues
        assert np.allclose(weighted, unweighted, atol=1e-11)


class TestUniformGap:
    def test_positive_for_helix(self, helix_spec):
        grid = SectionGrid(helix_spec.section, 15, 15)
        gap = uniform_gap(grid, helix_spec, 0.1, 8)
        assert gap > 0.9 * np.pi ** 2

    def test_sample_count_validation(self, helix_spec):
        grid = SectionGrid(helix_spec.section, 9, 9)
        with pytest.raises(ValidationError):
            uniform_gap(grid, helix_spec, 0.1, 4)
