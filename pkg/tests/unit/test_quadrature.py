import math

import numpy as np
import pytest
from pydantic import ValidationError as PydanticValidationError

from app.core.exceptions import QuadratureError, ValidationError
from app.quadrature.models.quadrature_spec import QuadratureSpec
from app.quadrature.services.quadrature_service import B4_VOLUME, S3_AREA, QuadratureService
from app.quadrature.services.rules import radial_breakpoints, sphere_layout


def poisson_kernel(x):
    """y -> (1 - |x|^2) / (2 pi^2 |x - y|^4), which integrates to 1 over S^3"""
    x = np.asarray(x, dtype=float)

    def f(y):
        d2 = np.sum((y - x) ** 2, axis=-1)
        return (1.0 - float(x @ x)) / (2.0 * math.pi**2 * d2**2)

    return f


class TestQuadratureSpec:
    """Test cases for QuadratureSpec"""

    def test_defaults(self):
        # Act
        spec = QuadratureSpec()

        # Assert
        assert (spec.radial_order, spec.psi_order, spec.theta_order, spec.phi_points) == (12, 12, 10, 16)
        assert spec.target_rel_tol == 1e-6
        assert spec.max_refinements == 2

    def test_estimate_order(self):
        """Test the error-estimate rule runs at two thirds of every order"""
        # Act
        companion = QuadratureSpec().estimate_order()

        # Assert
        assert (companion.radial_order, companion.psi_order, companion.theta_order, companion.phi_points) == (
            8,
            8,
            7,
            11,
        )

    def test_coarse_is_cheaper(self):
        # Act
        spec = QuadratureSpec()
        coarse = spec.coarse()

        # Assert
        assert coarse.radial_order < spec.radial_order
        assert coarse.target_rel_tol > spec.target_rel_tol
        assert coarse.max_refinements <= 1

    def test_rejects_bad_order(self):
        """Test orders below 2 are rejected"""
        with pytest.raises(PydanticValidationError):
            QuadratureSpec(radial_order=1)


class TestQuadratureService:
    """Test cases for the deterministic S^3 and B^4 rules"""

    def test_sphere_area(self, quadrature):
        """Test the weights sum to the area 2 pi^2"""
        # Act
        result = quadrature.integrate_s3(lambda y: np.ones(y.shape[0]))

        # Assert
        assert result.value == pytest.approx(S3_AREA, rel=1e-10)
        assert result.converged

    def test_ball_moment(self, quadrature):
        """Test the integral of |x|^2 over B^4 is pi^2 / 3"""
        # Act
        result = quadrature.integrate_b4(lambda x: np.sum(x * x, axis=-1))

        # Assert
        assert result.value == pytest.approx(math.pi**2 / 3.0, rel=1e-10)

    def test_odd_integrand_vanishes(self, quadrature):
        # Act
        result = quadrature.integrate_s3(lambda y: y[:, 0] * y[:, 1] ** 2)

        # Assert
        assert abs(result.value) < 1e-10

    @pytest.mark.parametrize("radius", [0.5, 0.7])
    def test_focused_poisson_kernel(self, quadrature, radius):
        """Test a peaked integrand resolved by focusing the rule on its peak"""
        # Arrange
        x = radius * np.array([0.6, 0.0, -0.8, 0.0])

        # Act
        result = quadrature.integrate_s3(poisson_kernel(x), focus=x)

        # Assert
        assert result.value == pytest.approx(1.0, abs=1e-6)

    def test_vector_integrand(self, quadrature):
        """Test componentwise integration"""
        # Act
        result = quadrature.integrate_b4_vector(
            lambda x: np.stack([np.ones(x.shape[0]), x[:, 2] ** 2], axis=-1)
        )

        # Assert
        np.testing.assert_allclose(result.values, [B4_VOLUME, math.pi**2 / 12.0], rtol=1e-10)

    def test_theta_dependent_moment_converges_without_refinement(self, quadrature):
        """Test a polynomial varying around the focus axis meets the tolerance on the first level"""
        # Act
        result = quadrature.integrate_b4(
            lambda x: x[:, 1] ** 2 * x[:, 2] ** 2, focus=[0.3, 0.0, 0.0, 0.0], theta_panels=2
        )

        # Assert
        assert result.value == pytest.approx(math.pi**2 / 96.0, rel=1e-10)
        assert result.converged
        assert result.refinements == 0

    def test_linearity(self, quadrature):
        """Test the rule integrates a f + b g to a I(f) + b I(g)"""

        # Arrange
        def f(x):
            return np.exp(x[:, 0]) * np.cos(x[:, 3])

        def g(x):
            return x[:, 1] ** 2 * x[:, 2] ** 2

        a, b = 2.5, -0.75
        focus = [0.0, 0.3, 0.0, 0.2]

        # Act
        combined = quadrature.integrate_b4(lambda x: a * f(x) + b * g(x), focus=focus, theta_panels=2)
        first = quadrature.integrate_b4(f, focus=focus, theta_panels=2)
        second = quadrature.integrate_b4(g, focus=focus, theta_panels=2)

        # Assert
        assert combined.value == pytest.approx(a * first.value + b * second.value, rel=1e-9)

    def test_deterministic(self, quadrature):
        """Test identical calls give bit-identical values"""

        # Arrange
        def f(x):
            return np.exp(x[:, 0]) * np.cos(x[:, 3])

        # Act
        first = quadrature.integrate_b4(f, focus=[0.3, 0.0, 0.0, 0.0])
        second = quadrature.integrate_b4(f, focus=[0.3, 0.0, 0.0, 0.0])

        # Assert
        assert first.value == second.value

    def test_non_finite_integrand(self, quadrature):
        """Test a NaN at a node raises QuadratureError carrying the node"""
        # Act & Assert
        with pytest.raises(QuadratureError, match="not finite") as exc_info:
            quadrature.integrate_s3(lambda y: np.full(y.shape[0], np.nan))
        assert len(exc_info.value.node) == 4

    def test_monte_carlo_needs_samples(self, quadrature):
        """Test Monte Carlo is refused with mc_samples = 0"""
        with pytest.raises(ValidationError, match="mc_samples > 0"):
            quadrature.integrate_b4_mc(lambda x: np.ones(x.shape[0]))

    def test_monte_carlo_constant(self):
        """Test a constant integrand has zero standard error"""
        # Arrange
        service = QuadratureService(QuadratureSpec(mc_samples=1000, seed=7))

        # Act
        result = service.integrate_b4_mc(lambda x: np.ones(x.shape[0]))

        # Assert
        assert result.value == pytest.approx(B4_VOLUME)
        assert result.std_error == pytest.approx(0.0, abs=1e-12)
        assert result.nodes_used == 1000

    def test_monte_carlo_seeded(self):
        """Test the same seed gives the same estimate and it lands near the exact value"""
        # Arrange
        spec = QuadratureSpec(mc_samples=20000, seed=11)
        service = QuadratureService(spec)

        def f(x):
            return np.sum(x * x, axis=-1)

        # Act
        first = service.integrate_b4_mc(f)
        second = service.integrate_b4_mc(f)

        # Assert
        assert first.value == second.value
        assert abs(first.value - math.pi**2 / 3.0) < 5.0 * first.std_error


class TestRules:
    """Test cases for the panel layouts"""

    @pytest.mark.parametrize("focus", [None, [0.3, 0.0, 0.0, 0.0]])
    def test_theta_panels(self, focus):
        # Act
        layout = sphere_layout(focus, theta_bisections=0, theta_panels=2)

        # Assert
        np.testing.assert_allclose(layout.theta_breaks, [0.0, math.pi / 2.0, math.pi])

    def test_radial_panels_graded_toward_sphere(self):
        """Test panels halve in width toward r = 1 at the scale 1 - |focus|"""
        # Act
        breaks = radial_breakpoints([0.0, 0.0, 0.7, 0.0])

        # Assert
        np.testing.assert_allclose(breaks, [0.0, 0.4, 0.7, 0.85, 1.0])
