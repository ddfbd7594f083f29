import math

import numpy as np
import pytest

from app.core.exceptions import DomainError, ValidationError
from app.core.utils.finite_differences import (
    central_gradient,
    central_hessian,
    scaled_laplacian,
)
from app.core.utils.forms import (
    ASD_BASIS,
    asd_inner,
    asd_project,
    asd_to_two_form,
    beta_jacobian,
    exterior_derivative_beta,
    hodge_star,
    three_form_flux,
    wedge_two_one,
)
from app.core.utils.linalg import det_sign, rotation_svd, sym_eigen
from app.core.utils.points import (
    as_point4,
    ball_point,
    check_closed_ball,
    im_quaternion_oneform,
    quat_conj,
    quat_mul,
)
from app.core.utils.rotations import (
    as_matrix3,
    geodesic_distance,
    hat,
    is_rotation,
    random_rotations,
    so3_exp,
    so3_log,
    vee,
)


class TestPoints:
    """Test cases for ball points and quaternion helpers"""

    def test_ball_point_accepts_interior_point(self):
        """Test an interior point is returned as a float array"""
        # Act
        p = ball_point([0.1, 0.2, 0.0, -0.3])

        # Assert
        assert p.dtype == np.float64
        assert p.shape == (4,)

    def test_ball_point_rejects_sphere_point(self):
        """Test |p| = 1 is rejected for the open ball"""
        with pytest.raises(DomainError, match="must satisfy"):
            ball_point([1.0, 0.0, 0.0, 0.0])

    def test_ball_point_closed_limit(self):
        """Test strict=False admits the boundary of a smaller ball"""
        # Act
        p = ball_point([0.0, 0.0, 0.9, 0.0], strict=False, limit=0.9)

        # Assert
        assert p[2] == 0.9

    @pytest.mark.parametrize(
        "value,message",
        [
            ([0.0, 0.0, 0.0], "must have 4 coordinates"),
            ([0.0, float("nan"), 0.0, 0.0], "non-finite"),
        ],
    )
    def test_as_point4_errors(self, value, message):
        """Test malformed points raise DomainError"""
        with pytest.raises(DomainError, match=message):
            as_point4(value)

    def test_check_closed_ball_reports_worst_point(self):
        """Test arrays with a point outside the ball are rejected"""
        # Arrange
        points = np.array([[0.0, 0.0, 0.0, 0.0], [0.0, 1.5, 0.0, 0.0]])

        # Act & Assert
        with pytest.raises(DomainError, match="outside the closed unit ball"):
            check_closed_ball(points)

    def test_quaternion_units(self):
        """Test i j = k and j i = -k"""
        # Arrange
        i = np.array([0.0, 1.0, 0.0, 0.0])
        j = np.array([0.0, 0.0, 1.0, 0.0])

        # Act & Assert
        np.testing.assert_allclose(quat_mul(i, j), [0.0, 0.0, 0.0, 1.0])
        np.testing.assert_allclose(quat_mul(j, i), [0.0, 0.0, 0.0, -1.0])

    def test_quaternion_norm(self, rng):
        """Test q q^bar = |q|^2"""
        # Arrange
        q = rng.standard_normal(4)

        # Act
        prod = quat_mul(q, quat_conj(q))

        # Assert
        np.testing.assert_allclose(prod, [float(q @ q), 0.0, 0.0, 0.0], atol=1e-14)

    def test_im_quaternion_oneform_of_one(self):
        """Test Im[dx] is dx2, dx3, dx4"""
        # Act
        forms = im_quaternion_oneform(np.array([1.0, 0.0, 0.0, 0.0]))

        # Assert
        np.testing.assert_allclose(forms, np.eye(4)[1:])


class TestRotations:
    """Test cases for so(3) and SO(3) helpers"""

    def test_hat_vee(self, rng):
        """Test vee inverts hat"""
        # Arrange
        v = rng.standard_normal(3)

        # Act & Assert
        np.testing.assert_allclose(vee(hat(v)), v)
        np.testing.assert_allclose(hat(v), -hat(v).T)

    def test_exp_is_rotation(self, rng):
        """Test the exponential lands in SO(3) and log recovers small vectors"""
        # Arrange
        xi = 0.5 * rng.standard_normal(3)

        # Act
        r = so3_exp(xi)

        # Assert
        assert is_rotation(r, 1e-12)
        np.testing.assert_allclose(so3_log(r), xi, atol=1e-12)

    @pytest.mark.parametrize("angle", [1e-7, 0.3, 2.5])
    def test_geodesic_distance(self, angle):
        """Test the distance from I is the rotation angle"""
        # Arrange
        r = so3_exp([0.0, 0.0, angle])

        # Act & Assert
        assert geodesic_distance(np.eye(3), r) == pytest.approx(angle, rel=1e-8)

    def test_random_rotations(self, rng):
        """Test Haar draws are proper rotations"""
        # Act
        rs = random_rotations(20, rng)

        # Assert
        assert rs.shape == (20, 3, 3)
        assert all(is_rotation(r, 1e-10) for r in rs)

    def test_as_matrix3_accepts_flat(self):
        """Test nine reals are reshaped row-major"""
        # Act
        m = as_matrix3(list(range(9)))

        # Assert
        assert m[1, 0] == 3.0

    def test_as_matrix3_rejects_shape(self):
        """Test a wrong shape raises ValidationError"""
        with pytest.raises(ValidationError, match="must be 3x3"):
            as_matrix3([1.0, 2.0, 3.0])


class TestLinalg:
    """Test cases for the symmetric eigensolver and the rotation SVD"""

    def test_sym_eigen_descending_and_proper(self, rng):
        """Test eigenvalues are descending and the frame is in SO(3)"""
        # Arrange
        a = rng.standard_normal((3, 3))
        s = a + a.T

        # Act
        spectrum = sym_eigen(s)

        # Assert
        assert spectrum.mu[0] >= spectrum.mu[1] >= spectrum.mu[2]
        assert np.linalg.det(spectrum.frame) == pytest.approx(1.0)
        np.testing.assert_allclose(spectrum.reconstruct(), s, atol=1e-12)
        np.testing.assert_allclose(np.sort(spectrum.mu), np.linalg.eigvalsh(s), atol=1e-12)

    def test_sym_eigen_rejects_asymmetric(self):
        """Test a non-symmetric matrix raises ValidationError"""
        with pytest.raises(ValidationError, match="sym_eigen requires a symmetric matrix"):
            sym_eigen([[1.0, 2.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])

    def test_sym_eigen_ties(self):
        """Test tie detection on a repeated eigenvalue"""
        # Act
        spectrum = sym_eigen(np.diag([4.0, 1.0, 1.0]))

        # Assert
        assert spectrum.has_ties()
        assert not spectrum.is_strict()

    @pytest.mark.parametrize("sign", [1.0, -1.0])
    def test_rotation_svd(self, rng, sign):
        """Test both factors are rotations and sigma3 carries the sign of det M"""
        # Arrange
        m = rng.standard_normal((3, 3))
        if np.sign(np.linalg.det(m)) != sign:
            m[0] = -m[0]

        # Act
        u, sigma, v = rotation_svd(m)

        # Assert
        assert is_rotation(u, 1e-10) and is_rotation(v, 1e-10)
        np.testing.assert_allclose(u @ np.diag(sigma) @ v.T, m, atol=1e-12)
        assert np.sign(sigma[2]) == sign

    @pytest.mark.parametrize(
        "m,expected",
        [
            (np.diag([5.0, 2.0, 1.0]), 1),
            (np.diag([3.0, 2.0, -1.0]), -1),
            (np.diag([3.0, 1.0, 0.0]), 0),
            (np.zeros((3, 3)), 0),
        ],
    )
    def test_det_sign(self, m, expected):
        """Test the sign of det M with the zero tolerance"""
        assert det_sign(m) == expected


class TestForms:
    """Test cases for the exterior algebra on R^4"""

    def test_hodge_star_involution(self, rng):
        """Test ** = 1 on 2-forms"""
        # Arrange
        w = rng.standard_normal(6)

        # Act & Assert
        np.testing.assert_allclose(hodge_star(hodge_star(w)), w)

    def test_asd_basis_is_anti_self_dual(self):
        """Test *w_k = -w_k and the basis is orthogonal with norm^2 2"""
        # Act & Assert
        np.testing.assert_allclose(hodge_star(ASD_BASIS), -ASD_BASIS)
        np.testing.assert_allclose(ASD_BASIS @ ASD_BASIS.T, 2.0 * np.eye(3))

    def test_asd_project_kills_self_dual(self, rng):
        """Test the projection vanishes on w + *w"""
        # Arrange
        w = rng.standard_normal(6)

        # Act & Assert
        np.testing.assert_allclose(asd_project(w + hodge_star(w)), np.zeros(3), atol=1e-14)

    def test_asd_round_trip_and_inner(self, rng):
        """Test asd_to_two_form inverts asd_project and the inner product is 2 a.b"""
        # Arrange
        a, b = rng.standard_normal(3), rng.standard_normal(3)

        # Act
        two_a, two_b = asd_to_two_form(a), asd_to_two_form(b)

        # Assert
        np.testing.assert_allclose(asd_project(two_a), a)
        assert float(asd_inner(a, b)) == pytest.approx(float(two_a @ two_b))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_beta_curvature_is_basis_vector(self, k):
        """Test (d beta_k)^- is the k-th ASD basis vector"""
        np.testing.assert_allclose(exterior_derivative_beta(k), np.eye(3)[k - 1])

    def test_beta_index_validated(self):
        with pytest.raises(ValidationError, match="beta index"):
            beta_jacobian(4)

    def test_volume_flux(self):
        """Test dx1234 contracted against the outward normal integrates the radial density"""
        # Arrange
        y = np.array([0.0, 0.0, 0.0, 1.0])
        w = np.zeros(6)
        w[0] = 1.0  # dx12
        h = np.array([0.0, 0.0, 1.0, 0.0])  # dx3

        # Act
        flux = three_form_flux(wedge_two_one(w, h), y)

        # Assert: dx123 restricted at the pole e4 with outward normal e4
        assert float(flux) == pytest.approx(-1.0)


class TestFiniteDifferences:
    """Test cases for the central-difference helpers"""

    @pytest.fixture
    def quadratic(self):
        a = np.array([[2.0, 1.0, 0.0], [1.0, 3.0, -1.0], [0.0, -1.0, 4.0]])
        b = np.array([1.0, -2.0, 0.5])
        return a, b, (lambda x: 0.5 * x @ a @ x + b @ x)

    def test_gradient_of_quadratic(self, quadratic):
        # Arrange
        a, b, f = quadratic
        x = np.array([0.3, -0.1, 0.2])

        # Act & Assert
        np.testing.assert_allclose(central_gradient(f, x, 1e-4), a @ x + b, atol=1e-8)

    def test_hessian_of_quadratic(self, quadratic):
        # Arrange
        a, _, f = quadratic

        # Act & Assert
        np.testing.assert_allclose(central_hessian(f, np.zeros(3), 1e-3), a, atol=1e-6)

    def test_scaled_laplacian_separates_harmonic(self):
        """Test x1^2 - x2^2 reads near zero and |x|^2 reads order one"""

        # Arrange
        def f(x):
            x = np.asarray(x, dtype=float)
            return np.stack([x[..., 0] ** 2 - x[..., 1] ** 2, np.sum(x * x, axis=-1)], axis=-1)

        # Act
        ratios = scaled_laplacian(f, np.array([0.2, 0.1, -0.3, 0.4]))

        # Assert
        assert ratios[0] < 1e-6
        assert ratios[1] > 0.1
        assert math.isfinite(float(ratios[1]))
