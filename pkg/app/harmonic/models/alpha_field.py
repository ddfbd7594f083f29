"""
The harmonic fields alpha_{p,i} attached to a point p of the open ball.

alpha_{p,i} is the harmonic extension of (x_i - p_i)/|x - p|^4 from S^3.
Away from p = 0 it is evaluated by the image formula around
p* = p/|p|^2; near p = 0 the image terms cancel badly and the
regrouped form

    alpha_p(x) = (x - p|x|^2) / s^2,   s = 1 - 2 x.p + |p|^2 |x|^2

is used instead. The two agree wherever both are defined.
"""

from typing import Optional

import numpy as np
from numpy.typing import NDArray
from pydantic import field_validator

from app.base.models.base_model import DomainModel
from app.core.exceptions import SmallParameterError
from app.core.utils.points import ball_point, check_closed_ball

# below this |p| the image formula loses accuracy
P_MIN = 1e-3

REGULAR = "regular"
IMAGE = "image"


class AlphaField(DomainModel):
    """
    alpha_{p,i}, the 1-forms h_{p,l} and the ASD coefficients of dh_{p,l} for one p.

    All evaluators take x of shape (..., 4) with |x| <= 1.
    """

    p: np.ndarray
    fallback: bool = True
    force_regular: bool = False

    @field_validator("p", mode="before")
    @classmethod
    def validate_p(cls, v):
        return ball_point(v, "p")

    def model_post_init(self, __context) -> None:
        if self.p_norm < P_MIN and not self.fallback:
            raise SmallParameterError(
                f"|p| = {self.p_norm:.3g} is below the image-formula cutoff {P_MIN} "
                "and the small-|p| fallback is disabled"
            )

    @property
    def p_norm(self) -> float:
        return float(np.linalg.norm(self.p))

    @property
    def branch(self) -> str:
        if self.force_regular or self.p_norm < P_MIN:
            return REGULAR
        return IMAGE

    @property
    def image_point(self) -> Optional[np.ndarray]:
        """p* = p/|p|^2, or None at p = 0"""
        pp = float(self.p @ self.p)
        if pp == 0.0:
            return None
        return self.p / pp

    # ---- alpha and its Jacobian ---------------------------------------

    def alpha(self, x) -> NDArray:
        """alpha_{p,i}(x) for i = 1..4 along the last axis"""
        x = check_closed_ball(x)
        if self.branch == REGULAR:
            return self._alpha_regular(x)
        return self._alpha_image(x)

    def jacobian(self, x) -> NDArray:
        """J[..., i, j] = d alpha_{p,i} / d x_j"""
        x = check_closed_ball(x)
        if self.branch == REGULAR:
            return self._jacobian_regular(x)
        return self._jacobian_image(x)

    def _alpha_regular(self, x: NDArray) -> NDArray:
        p = self.p
        xx = np.sum(x * x, axis=-1)[..., None]
        s = 1.0 - 2.0 * (x @ p)[..., None] + (p @ p) * xx
        return (x - p * xx) / s**2

    def _jacobian_regular(self, x: NDArray) -> NDArray:
        p = self.p
        pp = p @ p
        xx = np.sum(x * x, axis=-1)[..., None, None]
        s = 1.0 - 2.0 * (x @ p)[..., None, None] + pp * xx
        n = (x - p * xx[..., 0])[..., :, None]
        ds = (pp * x - p)[..., None, :]
        dn = np.eye(4) - 2.0 * p[:, None] * x[..., None, :]
        return dn / s**2 - 4.0 * n * ds / s**3

    def _alpha_image(self, x: NDArray) -> NDArray:
        p = self.p
        pp = p @ p
        u = x - p / pp
        r2 = np.sum(u * u, axis=-1)[..., None]
        pu = (u @ p)[..., None]
        return -p / (pp**2 * r2) + u / (pp**2 * r2**2) - 2.0 * p * pu / (pp**3 * r2**2)

    def _jacobian_image(self, x: NDArray) -> NDArray:
        p = self.p
        pp = p @ p
        u = x - p / pp
        r2 = np.sum(u * u, axis=-1)[..., None, None]
        pu = (u @ p)[..., None, None]
        p_u = p[:, None] * u[..., None, :]
        u_u = u[..., :, None] * u[..., None, :]
        p_p = np.outer(p, p)
        return (
            2.0 * p_u / (pp**2 * r2**2)
            + np.eye(4) / (pp**2 * r2**2)
            - 4.0 * u_u / (pp**2 * r2**3)
            - 2.0 * p_p / (pp**3 * r2**2)
            + 8.0 * p_u * pu / (pp**3 * r2**3)
        )

    # ---- derived forms ------------------------------------------------

    def h_oneforms(self, x) -> NDArray:
        """h_{p,1..3} as an array (..., 3, 4) of dx^a coefficients"""
        return h_from_alpha(self.alpha(x))

    def h_jacobians(self, x) -> NDArray:
        """d(h_l)_a / dx_b as an array (..., 3, 4, 4)"""
        return h_from_alpha(self.jacobian(x), axis=-2)

    def dh_asd(self, x) -> NDArray:
        """DhMatrix: entry [..., l, k] is the w_k coefficient of (dh_{p,l})^-"""
        return dh_from_jacobian(self.jacobian(x))


# (sign, alpha index) of each dx^a coefficient of h_1, h_2, h_3
_H_PATTERN = (
    ((-1, 1), (1, 0), (1, 3), (-1, 2)),
    ((-1, 2), (-1, 3), (1, 0), (1, 1)),
    ((-1, 3), (1, 2), (-1, 1), (1, 0)),
)


def h_from_alpha(alpha: NDArray, axis: int = -1) -> NDArray:
    """Recombine the four alpha values (on the given axis) into h_1, h_2, h_3.

    With axis=-2 the same recombination acts on Jacobian rows.
    """
    a = np.moveaxis(np.asarray(alpha, dtype=float), axis, -1)
    rows = []
    for pattern in _H_PATTERN:
        rows.append(np.stack([sign * a[..., idx] for sign, idx in pattern], axis=-1))
    h = np.stack(rows, axis=-2)
    if axis == -1:
        return h
    # a carried Jacobian columns first; restore (..., 3, 4, 4)
    return np.moveaxis(h, -3, -1)


def dh_from_jacobian(jac: NDArray) -> NDArray:
    """The nine signed half-sums of the alpha Jacobian giving (dh_{p,l})^-"""
    g = np.asarray(jac, dtype=float)
    h0 = 0.5 * (g[..., 0, 0] + g[..., 1, 1] + g[..., 2, 2] + g[..., 3, 3])
    h1 = 0.5 * (-g[..., 0, 3] + g[..., 1, 2] - g[..., 2, 1] + g[..., 3, 0])
    h2 = 0.5 * (g[..., 0, 2] + g[..., 1, 3] - g[..., 2, 0] - g[..., 3, 1])
    h3 = 0.5 * (-g[..., 0, 1] + g[..., 1, 0] + g[..., 2, 3] - g[..., 3, 2])
    return np.stack(
        [
            np.stack([h0, h1, h2], axis=-1),
            np.stack([-h1, h0, h3], axis=-1),
            np.stack([-h2, -h3, h0], axis=-1),
        ],
        axis=-2,
    )
