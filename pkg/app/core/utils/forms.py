"""
Exterior algebra on R^4 in coordinates.

2-forms are stored as six coefficients in the order
dx12, dx13, dx14, dx23, dx24, dx34 (dxij = dx^i ^ dx^j). 3-forms are
stored as four coefficients in the order dx123, dx124, dx134, dx234.
The dx^i ^ dx^j (i<j) are orthonormal, so the anti-self-dual basis

    w1 = dx12 - dx34,  w2 = dx13 + dx24,  w3 = dx14 - dx23

satisfies (w_a, w_b) = 2 delta_ab.
"""

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import ValidationError

TWO_FORM_INDEX = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))
THREE_FORM_INDEX = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))

# rows: w1, w2, w3 in the dxij coordinates
ASD_BASIS = np.array(
    [
        [1.0, 0.0, 0.0, 0.0, 0.0, -1.0],
        [0.0, 1.0, 0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 1.0, -1.0, 0.0, 0.0],
    ]
)

ASDCoeffs = NDArray[np.float64]


def _two_form(two_form) -> NDArray:
    arr = np.asarray(two_form, dtype=float)
    if arr.shape[-1:] != (6,):
        raise ValidationError(f"2-form needs 6 coefficients, got shape {arr.shape}")
    return arr


def hodge_star(two_form) -> NDArray:
    """Hodge star of 2-forms on Euclidean R^4 with dx1234 positive"""
    w = _two_form(two_form)
    w12, w13, w14, w23, w24, w34 = np.moveaxis(w, -1, 0)
    return np.stack([w34, -w24, w23, w14, -w13, w12], axis=-1)


def asd_project(two_form) -> ASDCoeffs:
    """Coefficients of (w - *w)/2 in the basis w1, w2, w3.

    Args:
        two_form: Array (..., 6) of dxij coefficients

    Returns:
        Array (..., 3)
    """
    w = _two_form(two_form)
    # (w_a, w_b) = 2 delta_ab
    return 0.25 * ((w - hodge_star(w)) @ ASD_BASIS.T)


def asd_to_two_form(coeffs) -> NDArray:
    """Inverse of asd_project on anti-self-dual forms"""
    c = np.asarray(coeffs, dtype=float)
    return c @ ASD_BASIS


def asd_inner(a, b) -> NDArray:
    """(sum a_k w_k, sum b_k w_k) = 2 a.b"""
    return 2.0 * np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float), axis=-1)


def exterior_derivative(jacobian) -> NDArray:
    """d of a 1-form A = A_a dx^a from its Jacobian J[..., a, b] = dA_a/dx^b.

    (dA)_ij = dA_j/dx^i - dA_i/dx^j.
    """
    jac = np.asarray(jacobian, dtype=float)
    cols = [jac[..., j, i] - jac[..., i, j] for i, j in TWO_FORM_INDEX]
    return np.stack(cols, axis=-1)


def beta_jacobian(k: int) -> NDArray:
    """Constant Jacobian of the linear 1-form beta_k.

    beta_1 = x1 dx2 - x3 dx4, beta_2 = x1 dx3 + x2 dx4, beta_3 = x1 dx4 - x2 dx3.
    """
    if k not in (1, 2, 3):
        raise ValidationError(f"beta index must be 1, 2 or 3, got {k}")
    jac = np.zeros((4, 4))
    if k == 1:
        jac[1, 0], jac[3, 2] = 1.0, -1.0
    elif k == 2:
        jac[2, 0], jac[3, 1] = 1.0, 1.0
    else:
        jac[3, 0], jac[2, 1] = 1.0, -1.0
    return jac


def exterior_derivative_beta(k: int) -> ASDCoeffs:
    """ASD coordinates of d(beta_k); equals the k-th basis vector"""
    return asd_project(exterior_derivative(beta_jacobian(k)))


def wedge_two_one(two_form, one_form) -> NDArray:
    """w ^ h for a 2-form w and a 1-form h, as 3-form coefficients (..., 4)"""
    w = _two_form(two_form)
    h = np.asarray(one_form, dtype=float)
    idx = {pair: n for n, pair in enumerate(TWO_FORM_INDEX)}
    cols = []
    for a, b, c in THREE_FORM_INDEX:
        cols.append(
            w[..., idx[(a, b)]] * h[..., c]
            - w[..., idx[(a, c)]] * h[..., b]
            + w[..., idx[(b, c)]] * h[..., a]
        )
    return np.stack(cols, axis=-1)


def three_form_flux(three_form, y) -> NDArray:
    """Density of a 3-form restricted to the unit sphere.

    With eta = i_V dx1234, V = (c234, -c134, c124, -c123), and the sphere
    oriented as the boundary of the ball, the integral of eta over S^3
    equals the integral of V.y against the round measure.
    """
    c = np.asarray(three_form, dtype=float)
    y = np.asarray(y, dtype=float)
    v = np.stack([c[..., 3], -c[..., 2], c[..., 1], -c[..., 0]], axis=-1)
    return np.sum(v * y, axis=-1)
