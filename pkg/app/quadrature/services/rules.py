"""
Tensor-product rules on S^3 and B^4.

S^3 is parameterized in a frame (e0, e1, e2, e3) by

    y = cos(psi) e0 + sin(psi) cos(theta) e1
        + sin(psi) sin(theta) cos(phi) e2 + sin(psi) sin(theta) sin(phi) e3

with measure sin^2(psi) sin(theta) dpsi dtheta dphi. psi and theta use
composite Gauss-Legendre panels, phi the periodic trapezoid rule. Panels
are graded geometrically toward the points where an integrand concentrates.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

# below this radius a focus carries no useful direction
FOCUS_MIN_RADIUS = 0.05

Anchor = Tuple[float, float]


@dataclass(frozen=True)
class Rule1D:
    nodes: NDArray
    weights: NDArray


@dataclass(frozen=True)
class SphereRule:
    points: NDArray
    weights: NDArray


@dataclass(frozen=True)
class SphereLayout:
    """Frame and panel breakpoints of an S^3 rule, independent of the orders"""

    frame: NDArray
    psi_breaks: NDArray
    theta_breaks: NDArray


@lru_cache(maxsize=64)
def _leggauss(order: int) -> Tuple[NDArray, NDArray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def composite_gauss(breaks: Sequence[float], order: int) -> Rule1D:
    """Gauss-Legendre of the given order on every panel [breaks[k], breaks[k+1]]"""
    x, w = _leggauss(order)
    breaks = np.asarray(breaks, dtype=float)
    lo = breaks[:-1, None]
    hi = breaks[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (0.5 * (hi + lo) + half * x[None, :]).ravel()
    weights = (half * w[None, :]).ravel()
    return Rule1D(nodes=nodes, weights=weights)


def graded_breakpoints(
    lo: float,
    hi: float,
    anchors: Sequence[Anchor] = (),
    base_panels: int = 2,
    bisections: int = 0,
) -> NDArray:
    """Panel breakpoints on [lo, hi] graded toward anchor points.

    Each anchor (a, scale) puts a breakpoint at a and further ones at
    a +- scale/2, a +- scale, a +- 2 scale, ... so panels double in width
    moving away from a. Without anchors the interval is split evenly into
    base_panels. Every panel is then bisected `bisections` times.
    """
    span = hi - lo
    eps = 1e-12 * span
    points = [lo, hi]
    active = [(a, s) for a, s in anchors if s > 0.0]
    if not active:
        points.extend(np.linspace(lo, hi, base_panels + 1)[1:-1])
    for a, scale in active:
        a = min(max(a, lo), hi)
        if lo + eps < a < hi - eps:
            points.append(a)
        step = 0.5 * scale
        while a - step > lo + eps:
            points.append(a - step)
            step *= 2.0
        step = 0.5 * scale
        while a + step < hi - eps:
            points.append(a + step)
            step *= 2.0

    breaks = np.unique(np.asarray(points, dtype=float))
    # drop slivers left by overlapping anchor sequences
    keep = np.concatenate([[True], np.diff(breaks) > eps])
    breaks = breaks[keep]
    breaks[-1] = hi

    for _ in range(bisections):
        mids = 0.5 * (breaks[:-1] + breaks[1:])
        breaks = np.sort(np.concatenate([breaks, mids]))
    return breaks


def orthonormal_frame(u: Optional[NDArray] = None, w: Optional[NDArray] = None) -> NDArray:
    """Orthonormal basis of R^4 as columns with column 0 along u and column 1 in span(u, w)"""
    if u is None:
        return np.eye(4)
    u = np.asarray(u, dtype=float)
    cols = [u] + ([np.asarray(w, dtype=float)] if w is not None else []) + list(np.eye(4))
    q, _ = np.linalg.qr(np.column_stack(cols))
    q = q[:, :4].copy()
    if q[:, 0] @ u < 0.0:
        q[:, 0] = -q[:, 0]
    if w is not None and q[:, 1] @ w < 0.0:
        q[:, 1] = -q[:, 1]
    return q


def sphere_layout(
    focus: Optional[NDArray] = None,
    secondary: Optional[NDArray] = None,
    bisections: int = 0,
    theta_bisections: Optional[int] = None,
    theta_panels: int = 1,
) -> SphereLayout:
    """Frame and breakpoints for an S^3 rule.

    focus: point of B^4 whose direction becomes psi = 0; the psi panels are
        graded toward it with scale 1 - |focus|
    secondary: second point, placed on the theta = 0 pole of the inner
        sphere with psi and theta graded around it
    bisections: panel bisections in psi, and in theta unless theta_bisections is given
    theta_panels: even theta panels when no secondary point grades theta
    """
    focus = _usable(focus)
    secondary = _usable(secondary)
    if theta_bisections is None:
        theta_bisections = bisections
    if focus is None and secondary is not None:
        focus, secondary = secondary, None

    if focus is None:
        return SphereLayout(
            frame=np.eye(4),
            psi_breaks=graded_breakpoints(0.0, np.pi, base_panels=2, bisections=bisections),
            theta_breaks=graded_breakpoints(0.0, np.pi, base_panels=theta_panels, bisections=theta_bisections),
        )

    r = float(np.linalg.norm(focus))
    u = focus / r
    psi_anchors = [(0.0, 1.0 - r)]
    theta_anchors = []
    w = None
    if secondary is not None:
        r2 = float(np.linalg.norm(secondary))
        v = secondary / r2
        delta2 = 1.0 - r2
        psi2 = float(np.arccos(np.clip(u @ v, -1.0, 1.0)))
        psi_anchors.append((psi2, delta2))
        # near the psi poles the inner sphere collapses and psi grading suffices
        if delta2 < psi2 < np.pi - delta2:
            w = v
            theta_anchors.append((0.0, delta2 / np.sin(psi2)))

    return SphereLayout(
        frame=orthonormal_frame(u, w),
        psi_breaks=graded_breakpoints(0.0, np.pi, psi_anchors, bisections=bisections),
        theta_breaks=graded_breakpoints(
            0.0, np.pi, theta_anchors, base_panels=theta_panels, bisections=theta_bisections
        ),
    )


def radial_breakpoints(focus: Optional[NDArray] = None, bisections: int = 0) -> NDArray:
    """Radial panels on [0, 1] graded toward r = 1 at scale 1 - |focus|"""
    focus = _usable(focus)
    delta = 1.0 if focus is None else 1.0 - float(np.linalg.norm(focus))
    return graded_breakpoints(0.0, 1.0, [(1.0, delta)], bisections=bisections)


def sphere_rule(layout: SphereLayout, psi_order: int, theta_order: int, phi_points: int) -> SphereRule:
    psi = composite_gauss(layout.psi_breaks, psi_order)
    theta = composite_gauss(layout.theta_breaks, theta_order)
    phi = 2.0 * np.pi * np.arange(phi_points) / phi_points

    ps, th, ph = np.meshgrid(psi.nodes, theta.nodes, phi, indexing="ij")
    wp, wt = np.meshgrid(psi.weights, theta.weights, indexing="ij")
    sin_ps = np.sin(ps)
    sin_th = np.sin(th)
    local = np.stack(
        [
            np.cos(ps),
            sin_ps * np.cos(th),
            sin_ps * sin_th * np.cos(ph),
            sin_ps * sin_th * np.sin(ph),
        ],
        axis=-1,
    ).reshape(-1, 4)
    weights = (wp * np.sin(psi.nodes)[:, None] ** 2 * wt * np.sin(theta.nodes)[None, :])
    weights = np.repeat(weights[:, :, None], phi_points, axis=2).ravel() * (2.0 * np.pi / phi_points)
    return SphereRule(points=local @ layout.frame.T, weights=weights)


def _usable(point: Optional[NDArray]) -> Optional[NDArray]:
    if point is None:
        return None
    point = np.asarray(point, dtype=float)
    if float(np.linalg.norm(point)) <= FOCUS_MIN_RADIUS:
        return None
    return point
