from typing import Callable

import numpy as np


def central_gradient(f: Callable[[np.ndarray], float], x, step: float) -> np.ndarray:
    """Central-difference gradient of a scalar function"""
    x = np.asarray(x, dtype=float)
    grad = np.empty(x.shape)
    for k in range(x.size):
        e = np.zeros(x.shape)
        e.flat[k] = step
        grad.flat[k] = (f(x + e) - f(x - e)) / (2.0 * step)
    return grad


def central_hessian(f: Callable[[np.ndarray], float], x, step: float) -> np.ndarray:
    """Central-difference Hessian using the four-point mixed stencil"""
    x = np.asarray(x, dtype=float)
    n = x.size
    f0 = f(x)
    hess = np.empty((n, n))
    basis = np.eye(n) * step
    for i in range(n):
        hess[i, i] = (f(x + basis[i]) - 2.0 * f0 + f(x - basis[i])) / step**2
        for j in range(i + 1, n):
            mixed = (
                f(x + basis[i] + basis[j])
                - f(x + basis[i] - basis[j])
                - f(x - basis[i] + basis[j])
                + f(x - basis[i] - basis[j])
            ) / (4.0 * step**2)
            hess[i, j] = hess[j, i] = mixed
    return hess


def scaled_laplacian(f: Callable[[np.ndarray], np.ndarray], x, step: float = 1e-3) -> np.ndarray:
    """Second-order FD Laplacian normalized by the size of its terms.

    f maps an array of points (..., 4) to values (..., m). The result is
    |sum_j D_jj f| / max(sum_j |D_jj f|, sum of |f| over the stencil, 1e-30)
    per component, which is near zero for harmonic f and of order one
    otherwise. The stencil sum keeps pure round-off from reading as order one.
    """
    x = np.asarray(x, dtype=float)
    center = np.asarray(f(x), dtype=float)
    total = np.zeros_like(center)
    magnitude = np.zeros_like(center)
    stencil_abs = np.abs(center)
    for j in range(x.shape[-1]):
        e = np.zeros(x.shape[-1])
        e[j] = step
        plus = np.asarray(f(x + e), dtype=float)
        minus = np.asarray(f(x - e), dtype=float)
        djj = (plus - 2.0 * center + minus) / step**2
        total += djj
        magnitude += np.abs(djj)
        stencil_abs = stencil_abs + np.abs(plus) + np.abs(minus)
    denom = np.maximum(np.maximum(magnitude, stencil_abs), 1e-30)
    return np.abs(total) / denom
