import time
from unittest.mock import Mock

import pytest

from app.core.exceptions import DomainError, ValidationError
from app.quadrature.models.integral_result import IntegralResult
from app.quadrature.models.quadrature_spec import QuadratureSpec
from app.quadrature.services.quadrature_service import QuadratureService
from app.verify.services.verify_service import MONTE_CARLO_SAMPLES, VerifyService


@pytest.fixture
def verify(quadrature):
    return VerifyService(quadrature, seed=11)


class TestVerifyService:
    """Test cases for the acceptance suite runner"""

    def test_names(self, verify):
        # Act
        names = verify.names

        # Assert
        assert len(names) == 16
        assert names[0] == "F0"
        assert names[-1] == "monte_carlo"
        assert "invariance" in names

    def test_unknown_check(self, verify):
        with pytest.raises(ValidationError, match="unknown check"):
            verify.run(only=["nope"])

    def test_cheap_checks_pass(self, verify):
        # Act
        report = verify.run(only=["F0", "so3_tables"])

        # Assert
        assert [c.name for c in report.checks] == ["F0", "so3_tables"]
        assert report.passed
        assert report.failed == []
        assert all(c.elapsed >= 0.0 for c in report.checks)

    def test_application_error_becomes_failure(self, verify):
        """Test a raising check is reported instead of propagated"""
        # Arrange
        verify.checks["F0"] = Mock(side_effect=DomainError("p must lie in the open ball"))

        # Act
        result = verify.run_check("F0")

        # Assert
        assert not result.passed
        assert result.measured is None
        assert result.detail == "DomainError: p must lie in the open ball"

    def test_non_finite_measurement_fails(self, verify):
        # Arrange
        verify.checks["F0"] = Mock(return_value=(True, float("nan"), 1e-8, "forced"))

        # Act
        report = verify.run(only=["F0"])

        # Assert
        assert not report.passed
        assert report.failed == ["F0"]

    def test_rng_streams_are_per_check(self, verify):
        """Test a check draws the same numbers alone or in a full run"""
        # Act
        first = verify.rng("descent").integers(2**32)
        second = VerifyService(seed=11).rng("descent").integers(2**32)

        # Assert
        assert first == second
        assert verify.rng("poisson").integers(2**32) != first


class TestMonteCarloCheck:
    """Test cases for the Monte Carlo cross-check of F"""

    @pytest.mark.parametrize(
        "sampled,passed",
        [(10.1, True), (9.8, True), (10.3, False)],
    )
    def test_threshold_in_standard_errors(self, verify, sampled, passed):
        """Test the check passes within five standard errors of the quadrature value"""
        # Arrange
        verify.landscape = Mock()
        verify.landscape.F_value.return_value = 10.0
        verify.landscape.F_monte_carlo.return_value = IntegralResult(
            value=sampled, est_rel_error=0.005, nodes_used=100, std_error=0.05
        )

        # Act
        result = verify.run_check("monte_carlo")

        # Assert
        assert result.passed is passed
        assert result.measured == pytest.approx(abs(sampled - 10.0) / 0.05)
        assert result.tolerance == 5.0

    def test_default_sample_count(self, verify):
        """Test a run without --mc-samples still samples"""
        # Arrange
        verify.landscape = Mock()
        verify.landscape.F_value.return_value = 10.0
        verify.landscape.F_monte_carlo.return_value = IntegralResult(
            value=10.0, est_rel_error=0.005, nodes_used=100, std_error=0.05
        )

        # Act
        verify.run_check("monte_carlo")

        # Assert
        spec = verify.landscape.F_monte_carlo.call_args.args[1]
        assert spec.mc_samples == MONTE_CARLO_SAMPLES

    def test_zero_standard_error_fails(self, verify):
        # Arrange
        verify.landscape = Mock()
        verify.landscape.F_value.return_value = 10.0
        verify.landscape.F_monte_carlo.return_value = IntegralResult(
            value=10.0, est_rel_error=0.0, nodes_used=100, std_error=0.0
        )

        # Act
        result = verify.run_check("monte_carlo")

        # Assert
        assert not result.passed
        assert result.detail == "zero standard error"

    @pytest.mark.slow
    def test_sample_count_from_spec(self):
        """Test --mc-samples reaches the check and the sampled F agrees with the rule"""
        # Arrange
        verify = VerifyService(QuadratureService(QuadratureSpec(mc_samples=20000, seed=3)), seed=11)

        # Act
        result = verify.run_check("monte_carlo")

        # Assert
        assert result.passed
        assert result.detail.startswith("20000 samples")


class TestRoundTripCheck:
    """Test cases for synthesis with a harmonic base"""

    @pytest.mark.slow
    def test_round_trip_within_budget(self, verify):
        """Test the degree-2 base round trip converges and finishes in minutes"""
        # Arrange
        start = time.perf_counter()

        # Act
        report = verify.run(only=["round_trip"])

        # Assert
        elapsed = time.perf_counter() - start
        assert report.passed, report.checks[0].detail
        assert report.checks[0].measured <= 1e-5
        assert elapsed < 420.0
