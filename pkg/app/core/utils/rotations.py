"""
SO(3) and so(3) helpers.

so(3) coordinates use the basis
    xi1 = [[0,0,0],[0,0,-1],[0,1,0]],
    xi2 = [[0,0,1],[0,0,0],[-1,0,0]],
    xi3 = [[0,-1,0],[1,0,0],[0,0,0]],
so hat(v) = v1 xi1 + v2 xi2 + v3 xi3 is the usual cross-product matrix.
"""

from typing import Optional

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.transform import Rotation as ScipyRotation

from app.core.exceptions import ValidationError

Rotation = NDArray[np.float64]
So3Vector = NDArray[np.float64]
Matrix3 = NDArray[np.float64]

SO3_BASIS = np.array(
    [
        [[0.0, 0.0, 0.0], [0.0, 0.0, -1.0], [0.0, 1.0, 0.0]],
        [[0.0, 0.0, 1.0], [0.0, 0.0, 0.0], [-1.0, 0.0, 0.0]],
        [[0.0, -1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]],
    ]
)

ROTATION_TOL = 1e-12


def as_matrix3(m, name: str = "M") -> Matrix3:
    arr = np.asarray(m, dtype=float)
    if arr.shape == (9,):
        arr = arr.reshape(3, 3)
    if arr.shape != (3, 3):
        raise ValidationError(f"{name} must be 3x3, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")
    return arr


def hat(v) -> NDArray:
    """Antisymmetric matrix of an so(3) vector; exact for any input"""
    v = np.asarray(v, dtype=float)
    return np.einsum("...i,ijk->...jk", v, SO3_BASIS)


def vee(a) -> NDArray:
    """so(3) coordinates of the antisymmetric part of a 3x3 matrix"""
    a = np.asarray(a, dtype=float)
    skew = 0.5 * (a - np.swapaxes(a, -1, -2))
    return np.stack([skew[..., 2, 1], skew[..., 0, 2], skew[..., 1, 0]], axis=-1)


def so3_exp(xi) -> Rotation:
    """Rodrigues exponential of hat(xi)"""
    xi = np.asarray(xi, dtype=float)
    return ScipyRotation.from_rotvec(xi).as_matrix()


def so3_log(r) -> So3Vector:
    """Rotation vector of r, with norm in [0, pi]"""
    return ScipyRotation.from_matrix(np.asarray(r, dtype=float)).as_rotvec()


def geodesic_distance(r1, r2) -> float:
    """Rotation angle of r1^T r2"""
    rel = np.asarray(r1, dtype=float).T @ np.asarray(r2, dtype=float)
    return float(np.linalg.norm(so3_log(rel)))


def is_rotation(r, tol: float = ROTATION_TOL) -> bool:
    r = np.asarray(r, dtype=float)
    if r.shape != (3, 3):
        return False
    orth = np.max(np.abs(r.T @ r - np.eye(3)))
    return bool(orth <= tol and abs(np.linalg.det(r) - 1.0) <= tol)


def random_rotations(n: int, rng: Optional[np.random.Generator] = None) -> NDArray:
    """n Haar-uniform rotations as an (n, 3, 3) array"""
    rng = rng if rng is not None else np.random.default_rng()
    return ScipyRotation.random(n, random_state=rng).as_matrix().reshape(n, 3, 3)
