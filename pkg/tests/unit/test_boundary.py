import json
import math

import numpy as np
import pytest

from app.boundary.models.boundary_spec import BoundarySpec
from app.boundary.models.h_matrix import HMatrix
from app.boundary.models.harmonic_poly import HarmonicPolyOneForm
from app.boundary.repositories.boundary_spec_repository import BoundarySpecRepository
from app.boundary.services.boundary_service import BoundaryService, random_harmonic_base
from app.core.exceptions import InvalidBoundarySpec, ValidationError


@pytest.fixture
def boundary(landscape):
    return BoundaryService(landscape)


class TestHMatrix:
    """Test cases for H(p)"""

    def test_origin(self):
        """Test H(0) = 2 I"""
        # Act
        h = HMatrix.at(np.zeros(4))

        # Assert
        np.testing.assert_allclose(h.matrix, 2.0 * np.eye(3), atol=1e-14)
        assert h.det == pytest.approx(8.0)

    def test_structure(self):
        """Test the constant-diagonal, antisymmetric-off-diagonal pattern"""
        # Act
        h = HMatrix.at([0.3, -0.1, 0.2, 0.4])
        m = h.matrix

        # Assert
        np.testing.assert_allclose(np.diag(m), [h.h0] * 3)
        np.testing.assert_allclose(m - np.diag(np.diag(m)), -(m - np.diag(np.diag(m))).T)
        assert np.linalg.det(m) == pytest.approx(h.det, rel=1e-10)

    def test_solve(self):
        # Arrange
        h = HMatrix.at([0.1, 0.2, 0.0, 0.0])
        rhs = np.arange(9.0).reshape(3, 3)

        # Act
        x = h.solve(rhs)

        # Assert
        np.testing.assert_allclose(math.pi**2 * h.matrix @ x, rhs, atol=1e-12)


class TestHarmonicPolyOneForm:
    """Test cases for harmonic polynomial base 1-forms"""

    def test_accepts_harmonic_divergence_free(self):
        """Test A = x2 x3 dx1 passes both checks"""
        # Act
        form = HarmonicPolyOneForm.from_coefficients([[((0, 1, 1, 0), 1.0)], [], [], []])

        # Assert
        assert not form.is_zero
        assert form.max_degree == 2
        assert form.evaluate(np.array([0.0, 2.0, 3.0, 0.0]))[0] == pytest.approx(6.0)

    def test_rejects_non_harmonic(self):
        """Test A = x1^2 dx2 is rejected"""
        with pytest.raises(InvalidBoundarySpec, match="not harmonic"):
            HarmonicPolyOneForm.from_coefficients([[], [((2, 0, 0, 0), 1.0)], [], []])

    def test_rejects_non_constant_divergence(self):
        """Test A = x1 x2 dx1 is harmonic but has divergence x2"""
        with pytest.raises(InvalidBoundarySpec, match="constant divergence"):
            HarmonicPolyOneForm.from_coefficients([[((1, 1, 0, 0), 1.0)], [], [], []])

    def test_jacobian(self):
        # Arrange
        form = HarmonicPolyOneForm.from_coefficients([[], [], [((1, 0, 0, 1), 2.0)], []])
        x = np.array([0.5, 0.0, 0.0, 0.25])

        # Act
        jac = form.jacobian(x)

        # Assert
        assert jac[2, 0] == pytest.approx(0.5)
        assert jac[2, 3] == pytest.approx(1.0)

    @pytest.mark.parametrize("degree", [1, 2, 3])
    def test_random_base_is_valid(self, rng, degree):
        """Test random bases pass validation and are not zero"""
        # Act
        base = random_harmonic_base(degree, rng)

        # Assert
        assert len(base) == 3
        assert all(form.max_degree == degree for form in base)

    def test_random_base_degree(self, rng):
        with pytest.raises(ValidationError, match="degree must be 1, 2 or 3"):
            random_harmonic_base(4, rng)


class TestBoundarySpec:
    """Test cases for BoundarySpec"""

    def test_flat(self):
        # Act
        spec = BoundarySpec.flat(np.eye(3))

        # Assert
        assert spec.base_is_zero
        np.testing.assert_allclose(spec.curvature_asd(np.zeros((2, 4))), np.broadcast_to(np.eye(3), (2, 3, 3)))

    def test_curvature_row_is_column_of_synth(self):
        """Test (dB_{0,l})^- = column l of A for a zero base"""
        # Arrange
        synth = np.arange(9.0).reshape(3, 3)

        # Act
        curv = BoundarySpec.flat(synth).curvature_asd(np.zeros(4))

        # Assert
        np.testing.assert_allclose(curv, synth.T)

    def test_dict_document(self, rng):
        """Test the file document keeps the base and A"""
        # Arrange
        spec = BoundarySpec(base=random_harmonic_base(1, rng), synth=np.eye(3))

        # Act
        restored = BoundarySpec.from_dict(spec.to_dict())

        # Assert
        np.testing.assert_allclose(restored.synth, np.eye(3))
        x = np.array([0.1, 0.2, 0.3, 0.4])
        np.testing.assert_allclose(restored.base_curvature_asd(x), spec.base_curvature_asd(x))


class TestBoundarySpecRepository:
    """Test cases for boundary data files"""

    @pytest.fixture
    def repository(self):
        return BoundarySpecRepository()

    def test_load_flat(self, repository, spec_file):
        # Arrange
        path = spec_file(np.diag([1.0, 2.0, 3.0]))

        # Act
        spec = repository.load(path)

        # Assert
        assert spec.base_is_zero
        np.testing.assert_allclose(spec.synth, np.diag([1.0, 2.0, 3.0]))

    def test_save_then_load(self, repository, tmp_path, rng):
        # Arrange
        spec = BoundarySpec(base=random_harmonic_base(2, rng), synth=np.eye(3))
        path = str(tmp_path / "nested" / "spec.json")

        # Act
        repository.save(spec, path)
        loaded = repository.load(path)

        # Assert
        assert not loaded.base_is_zero
        assert json.loads(open(path, encoding="utf-8").read())["A"] == np.eye(3).tolist()

    def test_missing_file(self, repository, tmp_path):
        with pytest.raises(ValidationError, match="boundary data file not found"):
            repository.load(str(tmp_path / "absent.json"))

    def test_bad_json(self, repository, tmp_path):
        # Arrange
        path = tmp_path / "bad.json"
        path.write_text("{not json", encoding="utf-8")

        # Act & Assert
        with pytest.raises(InvalidBoundarySpec, match="not valid JSON"):
            repository.load(str(path))

    def test_missing_matrix(self, repository, tmp_path):
        # Arrange
        path = tmp_path / "no_a.json"
        path.write_text(json.dumps({"base": []}), encoding="utf-8")

        # Act & Assert
        with pytest.raises(InvalidBoundarySpec, match="\"A\" matrix"):
            repository.load(str(path))

    def test_non_harmonic_base(self, repository, tmp_path):
        """Test harmonicity is checked on load"""
        # Arrange
        bad = [[[{"mono": [2, 0, 0, 0], "coef": 1.0}], [], [], []], [[], [], [], []], [[], [], [], []]]
        path = tmp_path / "bad_base.json"
        path.write_text(json.dumps({"A": np.eye(3).tolist(), "base": bad}), encoding="utf-8")

        # Act & Assert
        with pytest.raises(InvalidBoundarySpec, match="not harmonic"):
            repository.load(str(path))


class TestBoundaryService:
    """Test cases for synthesis and spectrum separation"""

    @pytest.mark.parametrize("p0", [[0.0, 0.0, 0.0, 0.0], [0.2, -0.1, 0.3, 0.0]])
    def test_synthesize_flat(self, boundary, landscape, p0):
        """Test the synthesized data reproduces the target in closed form"""
        # Arrange
        target = np.array([[3.0, 0.5, 0.0], [0.0, 2.0, -1.0], [0.2, 0.0, 1.0]])

        # Act
        spec = boundary.synthesize(target, p0)

        # Assert
        np.testing.assert_allclose(landscape.interaction_matrix(spec, p0).M, target, atol=1e-12)

    @pytest.mark.slow
    @pytest.mark.parametrize("p0", [[0.0, 0.0, 0.0, 0.0], [0.3, 0.0, 0.0, 0.0]])
    def test_synthesize_with_harmonic_base(self, boundary, landscape, p0):
        """Test a degree-2 base: the volume route and the closed-form route both give the target back"""
        # Arrange
        base = random_harmonic_base(2, np.random.default_rng(8))
        target = np.array([[1.0, -0.4, 0.0], [0.3, 2.0, 0.1], [0.0, 0.5, -1.5]])

        # Act
        spec = boundary.synthesize(target, p0, base)
        volume = landscape.M_volume(spec, p0)
        combined = landscape.interaction_matrix(spec, p0)

        # Assert
        assert not spec.base_is_zero
        assert volume.converged
        assert np.max(np.abs(volume.M - target)) <= 1e-5 * np.max(np.abs(target))
        assert combined.route == "closed+volume"
        np.testing.assert_allclose(combined.M, target, atol=1e-12)

    def test_synthesize_origin_closed_form(self, boundary):
        """Test A = target / (2 pi^2) at p0 = 0"""
        # Act
        spec = boundary.synthesize(np.diag([3.0, 2.0, 1.0]), np.zeros(4))

        # Assert
        np.testing.assert_allclose(spec.synth, np.diag([3.0, 2.0, 1.0]) / (2.0 * math.pi**2), atol=1e-15)

    def test_perturb_separates_identity(self, boundary):
        """Test M = I at p0 = 0 gains strictly separated eigenvalues"""
        # Arrange
        spec = BoundarySpec.flat(np.eye(3) / (2.0 * math.pi**2))

        # Act
        result = boundary.perturb_nondegenerate(spec, np.zeros(4), 1e-3)

        # Assert
        assert result.strictly_separated
        assert not result.regularized
        np.testing.assert_allclose(result.gaps[:2], [2e-3, 2e-3], rtol=0.05)

    def test_perturb_regularizes_singular(self, boundary):
        """Test a singular M is pre-regularized before the shift"""
        # Arrange
        spec = BoundarySpec.flat(np.diag([1.0, 1.0, 0.0]))

        # Act
        result = boundary.perturb_nondegenerate(spec, np.zeros(4), 1e-3)

        # Assert
        assert result.regularized
        assert result.strictly_separated

    @pytest.mark.parametrize("mu", [0.0, -1.0, float("inf")])
    def test_perturb_rejects_mu(self, boundary, mu):
        with pytest.raises(ValidationError, match="mu must be a positive real"):
            boundary.perturb_nondegenerate(BoundarySpec.flat(np.eye(3)), np.zeros(4), mu)

    def test_richardson_slopes(self, boundary):
        """Test the extrapolated slopes approach (6, 4, 2)"""
        # Arrange
        spec = BoundarySpec.flat(np.eye(3) / (2.0 * math.pi**2))

        # Act
        _, _, extrapolated = boundary.richardson_slopes(spec, [0.1, 0.0, 0.0, 0.0], 1e-3)

        # Assert
        np.testing.assert_allclose(extrapolated, [6.0, 4.0, 2.0], rtol=0.1)
