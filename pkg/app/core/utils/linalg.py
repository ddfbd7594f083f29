"""
Small dense linear algebra: cyclic Jacobi for symmetric 3x3 matrices and
a singular value decomposition with both factors in SO(3).
"""

import logging
import math
from typing import Tuple

import numpy as np

from app.core.exceptions import ValidationError
from app.core.models.spectrum import SymSpectrum
from app.core.utils.rotations import as_matrix3

logger = logging.getLogger("ymreduce.linalg")

JACOBI_MAX_SWEEPS = 50
SYMMETRY_TOL = 1e-10

# fixed sweep order keeps degenerate frames reproducible
_PAIRS = ((0, 1), (0, 2), (1, 2))


def _rotate(a: np.ndarray, i: int, j: int, k: int, l: int, tau: float, s: float) -> None:
    g = a[i, j]
    h = a[k, l]
    a[i, j] = g - s * (h + g * tau)
    a[k, l] = h + s * (g - h * tau)


def jacobi_eigen(s) -> Tuple[np.ndarray, np.ndarray, int]:
    """Cyclic Jacobi iteration.

    Returns:
        (eigenvalues, eigenvector columns, sweeps), unsorted
    """
    a = np.array(s, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    d = np.diag(a).copy()
    b = d.copy()
    z = np.zeros(n)

    for sweep in range(1, JACOBI_MAX_SWEEPS + 1):
        off = sum(abs(a[p, q]) for p, q in _PAIRS)
        if off == 0.0:
            return d, v, sweep - 1

        thresh = 0.2 * off / (n * n) if sweep < 4 else 0.0

        for p, q in _PAIRS:
            g = 100.0 * abs(a[p, q])
            if sweep > 4 and abs(d[p]) + g == abs(d[p]) and abs(d[q]) + g == abs(d[q]):
                a[p, q] = 0.0
            elif abs(a[p, q]) > thresh:
                h = d[q] - d[p]
                if abs(h) + g == abs(h):
                    t = a[p, q] / h
                else:
                    theta = 0.5 * h / a[p, q]
                    t = 1.0 / (abs(theta) + math.sqrt(1.0 + theta * theta))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / math.sqrt(1.0 + t * t)
                sn = t * c
                tau = sn / (1.0 + c)
                h = t * a[p, q]
                z[p] -= h
                z[q] += h
                d[p] -= h
                d[q] += h
                a[p, q] = 0.0
                for r in range(p):
                    _rotate(a, r, p, r, q, tau, sn)
                for r in range(p + 1, q):
                    _rotate(a, p, r, r, q, tau, sn)
                for r in range(q + 1, n):
                    _rotate(a, p, r, q, r, tau, sn)
                for r in range(n):
                    _rotate(v, r, p, r, q, tau, sn)

        b += z
        d = b.copy()
        z[:] = 0.0

    logger.warning(
        "Jacobi iteration hit the sweep cap",
        extra={"sweeps": JACOBI_MAX_SWEEPS},
    )
    return d, v, JACOBI_MAX_SWEEPS


def sym_eigen(s) -> SymSpectrum:
    """Eigen-decomposition of a symmetric 3x3 matrix.

    Args:
        s: Symmetric matrix

    Returns:
        SymSpectrum with descending eigenvalues and a frame in SO(3)

    Raises:
        ValidationError: If s is not symmetric within 1e-10 relative
    """
    s = as_matrix3(s, "S")
    scale = float(np.linalg.norm(s))
    if np.linalg.norm(s - s.T) > SYMMETRY_TOL * max(scale, 1e-300):
        raise ValidationError("sym_eigen requires a symmetric matrix")

    d, v, sweeps = jacobi_eigen(0.5 * (s + s.T))

    order = np.argsort(-d, kind="stable")
    mu = d[order]
    frame = v[:, order]
    if np.linalg.det(frame) < 0.0:
        frame[:, 2] = -frame[:, 2]

    return SymSpectrum(mu=mu, frame=frame, sweeps=sweeps)


def rotation_svd(m) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """M = U diag(sigma) V^T with U, V in SO(3).

    sigma1 >= sigma2 >= |sigma3|; the sign of sigma3 carries sign(det M).
    """
    m = as_matrix3(m)
    u, sigma, vt = np.linalg.svd(m)
    sigma = sigma.copy()
    v = vt.T.copy()
    u = u.copy()
    if np.linalg.det(u) < 0.0:
        u[:, 2] = -u[:, 2]
        sigma[2] = -sigma[2]
    if np.linalg.det(v) < 0.0:
        v[:, 2] = -v[:, 2]
        sigma[2] = -sigma[2]
    return u, sigma, v


def det_sign(m, rel: float = 1e-10) -> int:
    """Sign of det M, with |det M| <= rel * |M|^3 counted as zero"""
    m = as_matrix3(m)
    det = float(np.linalg.det(m))
    if abs(det) <= rel * float(np.linalg.norm(m)) ** 3:
        return 0
    return 1 if det > 0.0 else -1
