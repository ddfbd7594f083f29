"""
Points of the closed unit ball in R^4 and the quaternion identification
x = x1 + x2 i + x3 j + x4 k.
"""

from typing import Sequence, Union

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DomainError

Point4 = NDArray[np.float64]

BALL_SLACK = 1e-12
SPHERE_TOL = 1e-12


def as_point4(x: Union[Sequence[float], NDArray], name: str = "point") -> Point4:
    """Coerce to a float array whose last axis has length 4.

    Raises:
        DomainError: If the trailing dimension is not 4 or values are not finite
    """
    arr = np.asarray(x, dtype=float)
    if arr.shape[-1:] != (4,):
        raise DomainError(f"{name} must have 4 coordinates, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} has non-finite coordinates")
    return arr


def ball_point(x, name: str = "p", strict: bool = True, limit: float = 1.0) -> Point4:
    """Validate a single point of the ball.

    Args:
        x: Four coordinates
        name: Name used in error messages
        strict: Require |x| < limit instead of |x| <= limit
        limit: Radius of the admissible ball

    Returns:
        The point as a float array of shape (4,)

    Raises:
        DomainError: If the point lies outside the admissible ball
    """
    p = as_point4(x, name)
    if p.shape != (4,):
        raise DomainError(f"{name} must be a single point, got shape {p.shape}")
    r = float(np.linalg.norm(p))
    if strict and r >= limit:
        raise DomainError(f"{name} must satisfy |{name}| < {limit}, got {r:.12g}")
    if not strict and r > limit + BALL_SLACK:
        raise DomainError(f"{name} must satisfy |{name}| <= {limit}, got {r:.12g}")
    return p


def check_closed_ball(x: NDArray, name: str = "x") -> NDArray:
    """Validate an array of points against |x| <= 1"""
    arr = as_point4(x, name)
    norms = np.linalg.norm(arr, axis=-1)
    if np.any(norms > 1.0 + BALL_SLACK):
        worst = float(np.max(norms))
        raise DomainError(f"{name} lies outside the closed unit ball (|{name}|={worst:.12g})")
    return arr


def quat_conj(q: NDArray) -> NDArray:
    out = np.array(q, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def quat_mul(a: NDArray, b: NDArray) -> NDArray:
    """Hamilton product of quaternions stored as (..., 4) arrays"""
    a0, a1, a2, a3 = np.moveaxis(np.asarray(a, dtype=float), -1, 0)
    b0, b1, b2, b3 = np.moveaxis(np.asarray(b, dtype=float), -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def im_quaternion_oneform(q: NDArray) -> NDArray:
    """Im[q dx] as three 1-forms.

    Returns an array of shape (..., 3, 4) whose [l, a] entry is the dx^a
    coefficient of the i, j, k component (l = 0, 1, 2) of q dx.
    """
    q = np.asarray(q, dtype=float)
    basis = np.eye(4)
    out = np.empty(q.shape[:-1] + (3, 4))
    for a in range(4):
        prod = quat_mul(q, np.broadcast_to(basis[a], q.shape))
        out[..., :, a] = prod[..., 1:]
    return out
