import math

import numpy as np
import pytest

from app.core.exceptions import DomainError, SmallParameterError, ValidationError
from app.harmonic.models.alpha_field import IMAGE, P_MIN, REGULAR, AlphaField
from app.harmonic.services.harmonic_service import HarmonicService


@pytest.fixture
def harmonic(quadrature):
    return HarmonicService(quadrature)


class TestAlphaField:
    """Test cases for the closed-form alpha fields"""

    def test_origin_is_identity(self, rng):
        """Test alpha_0(x) = x"""
        # Arrange
        x = 0.3 * rng.standard_normal((5, 4))

        # Act
        field = AlphaField(p=np.zeros(4))

        # Assert
        np.testing.assert_allclose(field.alpha(x), x)
        np.testing.assert_allclose(field.jacobian(np.zeros(4)), np.eye(4))

    @pytest.mark.parametrize(
        "p,branch",
        [
            ([0.0, 0.0, 0.0, 0.0], REGULAR),
            ([0.5 * P_MIN, 0.0, 0.0, 0.0], REGULAR),
            ([0.0, 0.2, 0.0, 0.0], IMAGE),
        ],
    )
    def test_branch_selection(self, p, branch):
        """Test the image formula is used away from p = 0 only"""
        assert AlphaField(p=p).branch == branch

    def test_small_parameter_without_fallback(self):
        """Test the regular branch can be refused"""
        with pytest.raises(SmallParameterError, match="below the image-formula cutoff"):
            AlphaField(p=[1e-4, 0.0, 0.0, 0.0], fallback=False)

    def test_rejects_p_on_sphere(self):
        with pytest.raises(DomainError):
            AlphaField(p=[0.0, 0.0, 0.0, 1.0])

    @pytest.mark.parametrize("p", [[0.3, -0.2, 0.1, 0.4], [0.0, 0.0, 0.05, 0.0], [-0.7, 0.1, 0.0, 0.2]])
    def test_branches_agree(self, rng, p):
        """Test the image and regular formulas give the same alpha and Jacobian"""
        # Arrange
        x = rng.standard_normal((8, 4))
        x *= (0.95 * rng.uniform(size=(8, 1)) ** 0.25) / np.linalg.norm(x, axis=1, keepdims=True)
        image = AlphaField(p=p)
        regular = AlphaField(p=p, force_regular=True)

        # Act & Assert
        np.testing.assert_allclose(image.alpha(x), regular.alpha(x), rtol=1e-9, atol=1e-9)
        np.testing.assert_allclose(image.jacobian(x), regular.jacobian(x), rtol=1e-8, atol=1e-8)

    def test_boundary_values(self, rng):
        """Test alpha_p(x) = (x - p)/|x - p|^4 on the sphere"""
        # Arrange
        p = np.array([0.2, 0.1, -0.3, 0.0])
        y = rng.standard_normal((6, 4))
        y /= np.linalg.norm(y, axis=1, keepdims=True)
        d = y - p
        expected = d / np.sum(d * d, axis=1, keepdims=True) ** 2

        # Act & Assert
        np.testing.assert_allclose(AlphaField(p=p).alpha(y), expected, rtol=1e-10)

    def test_dh_at_origin_is_twice_identity(self):
        """Test (dh_{0,l})^-(0) = 2 delta_lk"""
        np.testing.assert_allclose(AlphaField(p=np.zeros(4)).dh_asd(np.zeros(4)), 2.0 * np.eye(3))

    def test_jacobian_matches_finite_differences(self):
        # Arrange
        field = AlphaField(p=[0.1, 0.4, 0.0, -0.2])
        x = np.array([0.2, -0.1, 0.3, 0.05])
        step = 1e-6
        fd = np.empty((4, 4))
        for j in range(4):
            e = np.zeros(4)
            e[j] = step
            fd[:, j] = (field.alpha(x + e) - field.alpha(x - e)) / (2.0 * step)

        # Act & Assert
        np.testing.assert_allclose(field.jacobian(x), fd, rtol=1e-6, atol=1e-6)


class TestHarmonicService:
    """Test cases for HarmonicService"""

    @pytest.mark.parametrize("i", [0, 5])
    def test_index_validated(self, harmonic, i):
        with pytest.raises(ValidationError, match="alpha index must be 1..4"):
            harmonic.alpha_closed([0.0, 0.0, 0.0, 0.0], i, [0.1, 0.0, 0.0, 0.0])

    def test_alpha_closed_at_origin(self, harmonic):
        # Act
        value = harmonic.alpha_closed([0.0, 0.0, 0.0, 0.0], 2, [0.1, 0.2, 0.3, 0.4])

        # Assert
        assert value == pytest.approx(0.2)

    def test_boundary_trace_requires_sphere(self, harmonic):
        """Test the trace is only defined for |x| = 1"""
        with pytest.raises(DomainError, match="needs \\|x\\| = 1"):
            harmonic.boundary_trace([0.1, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0, 0.0])

    def test_boundary_trace_matches_field(self, harmonic):
        # Arrange
        p = np.array([0.1, -0.2, 0.0, 0.3])
        y = np.array([0.0, 0.6, 0.0, -0.8])

        # Act
        trace = harmonic.boundary_trace(p, y)

        # Assert
        np.testing.assert_allclose(trace.alpha, AlphaField(p=p).alpha(y), rtol=1e-10)

    def test_sample_includes_trace_on_sphere(self, harmonic):
        # Act
        inside = harmonic.sample([0.2, 0.0, 0.0, 0.0], [0.5, 0.0, 0.0, 0.0])
        on_sphere = harmonic.sample([0.2, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0])

        # Assert
        assert inside.boundary_trace is None
        assert on_sphere.boundary_trace is not None
        assert inside.branch == IMAGE

    def test_laplacian_check(self, harmonic, rng):
        """Test the alpha fields and (dh)^- entries are harmonic"""
        # Arrange
        points = rng.standard_normal((10, 4))
        points *= 0.6 / np.linalg.norm(points, axis=1, keepdims=True)

        # Act
        report = harmonic.laplacian_check([0.3, 0.0, -0.2, 0.1], points)

        # Assert
        assert report.points == 10
        assert report.max_alpha < 1e-4
        assert report.max_dh < 1e-4

    def test_laplacian_stencil_must_fit(self, harmonic):
        with pytest.raises(DomainError, match="stencil leaves the ball"):
            harmonic.laplacian_check([0.0, 0.0, 0.0, 0.0], [[1.0, 0.0, 0.0, 0.0]])

    @pytest.mark.parametrize("p", [[0.0, 0.0, 0.0, 0.0], [0.2, 0.3, 0.0, -0.1]])
    def test_divergence_identity(self, harmonic, p):
        """Test div alpha_p(0) against its boundary integral"""
        # Act
        trace, integral = harmonic.divergence_identity(p)

        # Assert
        assert trace == pytest.approx(integral, rel=1e-6)

    def test_divergence_at_origin_is_four(self, harmonic):
        # Act
        trace, _ = harmonic.divergence_identity([0.0, 0.0, 0.0, 0.0])

        # Assert
        assert trace == pytest.approx(4.0)

    @pytest.mark.parametrize("i", [1, 4])
    def test_poisson_oracle(self, harmonic, i):
        """Test the closed form against the Poisson integral of the boundary data"""
        # Act
        comparison = harmonic.poisson_compare([0.2, -0.1, 0.0, 0.3], i, [0.1, 0.3, -0.2, 0.0])

        # Assert
        assert comparison.abs_error <= 1e-6 * max(abs(comparison.closed), 1.0)

    @pytest.mark.slow
    @pytest.mark.parametrize("p", [[0.0, 0.0, 0.0, 0.0], [0.0, 0.4, 0.0, 0.0]])
    def test_mean_value_check(self, harmonic, p):
        """Test the ball integral of 2 (dh)^- equals pi^2 (dh)^-(0)"""
        # Act
        report = harmonic.mean_value_check(p)

        # Assert
        assert report.max_rel_error < 1e-6
        np.testing.assert_allclose(
            report.expected, math.pi**2 * AlphaField(p=p).dh_asd(np.zeros(4))
        )
