import logging
import math
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import QuadratureError, ValidationError
from app.core.middlewares.run_context_middleware import context_extra
from app.quadrature.models.integral_result import IntegralResult, IntegralVector
from app.quadrature.models.quadrature_spec import QuadratureSpec
from app.quadrature.services.rules import (
    Rule1D,
    SphereRule,
    composite_gauss,
    radial_breakpoints,
    sphere_layout,
    sphere_rule,
)

logger = logging.getLogger("ymreduce.quadrature")

Integrand = Callable[[NDArray], NDArray]

S3_AREA = 2.0 * math.pi**2
B4_VOLUME = 0.5 * math.pi**2

# points handed to the integrand per call
CHUNK_POINTS = 200_000


class QuadratureService:
    """Deterministic integration over S^3 and B^4.

    Integrands take an (N, 4) array of points and return (N,) values, or
    (N, m) for the vector variants. Sums run in a fixed order through
    math.fsum, so identical inputs give bit-identical values.
    """

    def __init__(self, spec: Optional[QuadratureSpec] = None):
        self.spec = spec or QuadratureSpec()

    # ---- S^3 ----------------------------------------------------------

    def integrate_s3(
        self,
        f: Integrand,
        spec: Optional[QuadratureSpec] = None,
        focus=None,
        secondary=None,
    ) -> IntegralResult:
        """Integral of f over S^3 against the round measure"""
        result = self.integrate_s3_vector(_as_vector(f), spec, focus, secondary)
        return result.component(0)

    def integrate_s3_vector(
        self,
        f: Integrand,
        spec: Optional[QuadratureSpec] = None,
        focus=None,
        secondary=None,
    ) -> IntegralVector:
        spec = spec or self.spec
        companion = spec.estimate_order()

        def run(level: int) -> Tuple[Tuple[NDArray, NDArray], Tuple[NDArray, NDArray], int]:
            layout = sphere_layout(focus, secondary, bisections=level)
            full = sphere_rule(layout, spec.psi_order, spec.theta_order, spec.phi_points)
            coarse = sphere_rule(layout, companion.psi_order, companion.theta_order, companion.phi_points)
            return (
                _sum_rule(f, full),
                _sum_rule(f, coarse),
                full.weights.size + coarse.weights.size,
            )

        return self._refine("S3", spec, run)

    # ---- B^4 ----------------------------------------------------------

    def integrate_b4(
        self,
        f: Integrand,
        spec: Optional[QuadratureSpec] = None,
        focus=None,
        theta_panels: int = 1,
    ) -> IntegralResult:
        """Integral of f over the unit ball: radial Gauss panels times the S^3 rule with r^3 dr"""
        result = self.integrate_b4_vector(_as_vector(f), spec, focus, theta_panels)
        return result.component(0)

    def integrate_b4_vector(
        self,
        f: Integrand,
        spec: Optional[QuadratureSpec] = None,
        focus=None,
        theta_panels: int = 1,
    ) -> IntegralVector:
        """Componentwise B^4 integral.

        Refinement bisects the psi and radial panels only. Integrands that vary
        in theta around the focus axis, such as products of (dh_p)^- with a
        base curvature, need theta_panels = 2 to meet the tolerance.
        """
        spec = spec or self.spec
        companion = spec.estimate_order()

        def run(level: int):
            layout = sphere_layout(focus, bisections=level, theta_bisections=0, theta_panels=theta_panels)
            breaks = radial_breakpoints(focus, bisections=level)
            totals = []
            nodes = 0
            for s in (spec, companion):
                radial = composite_gauss(breaks, s.radial_order)
                sphere = sphere_rule(layout, s.psi_order, s.theta_order, s.phi_points)
                totals.append(_sum_rule(f, sphere, radial))
                nodes += radial.nodes.size * sphere.weights.size
            return totals[0], totals[1], nodes

        return self._refine("B4", spec, run)

    def integrate_b4_mc(self, f: Integrand, spec: Optional[QuadratureSpec] = None) -> IntegralResult:
        """Seeded uniform-ball Monte Carlo with a standard-error report"""
        spec = spec or self.spec
        n = spec.mc_samples
        if n <= 0:
            raise ValidationError("Monte Carlo integration needs mc_samples > 0")

        rng = spec.rng()
        sums: List[float] = []
        squares: List[float] = []
        done = 0
        while done < n:
            k = min(CHUNK_POINTS, n - done)
            direction = rng.standard_normal((k, 4))
            direction /= np.linalg.norm(direction, axis=1, keepdims=True)
            radius = rng.random(k) ** 0.25
            points = direction * radius[:, None]
            values = np.asarray(f(points), dtype=float).reshape(k)
            _check_finite(values, points)
            sums.append(math.fsum(values))
            squares.append(math.fsum(values * values))
            done += k

        total = math.fsum(sums)
        mean = total / n
        var = max(math.fsum(squares) - n * mean * mean, 0.0) / max(n - 1, 1)
        value = B4_VOLUME * mean
        std_error = B4_VOLUME * math.sqrt(var / n)
        est = std_error / abs(value) if value != 0.0 else std_error / B4_VOLUME

        logger.debug(
            "Monte Carlo integral",
            extra=context_extra(samples=n, value=value, std_error=std_error),
        )
        return IntegralResult(
            value=value,
            est_rel_error=est,
            nodes_used=n,
            std_error=std_error,
        )

    # ---- shared -------------------------------------------------------

    def _refine(self, domain: str, spec: QuadratureSpec, run) -> IntegralVector:
        nodes_used = 0
        for level in range(spec.max_refinements + 1):
            (full, l1), (coarse, _), nodes = run(level)
            nodes_used += nodes
            scale = max(float(np.max(np.abs(full))), float(np.max(l1)))
            diff = float(np.max(np.abs(full - coarse)))
            est = diff / scale if scale > 0.0 else 0.0
            if est <= spec.target_rel_tol:
                return IntegralVector(
                    values=full,
                    est_rel_error=est,
                    nodes_used=nodes_used,
                    refinements=level,
                )

        logger.warning(
            "Quadrature did not reach the target tolerance",
            extra=context_extra(
                domain=domain,
                est_rel_error=est,
                target_rel_tol=spec.target_rel_tol,
                refinements=spec.max_refinements,
            ),
        )
        return IntegralVector(
            values=full,
            est_rel_error=est,
            nodes_used=nodes_used,
            converged=False,
            refinements=spec.max_refinements,
        )


def _as_vector(f: Integrand) -> Integrand:
    def wrapped(points: NDArray) -> NDArray:
        return np.asarray(f(points), dtype=float).reshape(-1, 1)

    return wrapped


def _shells(sphere: SphereRule, radial: Optional[Rule1D]) -> Iterator[Tuple[NDArray, NDArray]]:
    """(points, weights) blocks of at most about CHUNK_POINTS nodes"""
    if radial is None:
        yield sphere.points, sphere.weights
        return
    per_call = max(1, CHUNK_POINTS // sphere.weights.size)
    shell_weights = radial.weights * radial.nodes**3
    for start in range(0, radial.nodes.size, per_call):
        r = radial.nodes[start:start + per_call]
        wr = shell_weights[start:start + per_call]
        points = (r[:, None, None] * sphere.points[None, :, :]).reshape(-1, 4)
        yield points, (wr[:, None] * sphere.weights[None, :]).ravel()


def _sum_rule(f: Integrand, sphere: SphereRule, radial: Optional[Rule1D] = None) -> Tuple[NDArray, NDArray]:
    """Weighted sum of f over the sphere rule, or over radial shells of it.

    Returns:
        (integral, L1 mass) per component
    """
    partial: List[NDArray] = []
    partial_abs: List[NDArray] = []
    for points, weights in _shells(sphere, radial):
        values = np.asarray(f(points), dtype=float).reshape(points.shape[0], -1)
        _check_finite(values, points)
        weighted = weights[:, None] * values
        partial.append(np.array([math.fsum(col) for col in weighted.T]))
        partial_abs.append(np.array([math.fsum(col) for col in np.abs(weighted).T]))

    total = np.array([math.fsum(col) for col in np.stack(partial, axis=1)])
    mass = np.array([math.fsum(col) for col in np.stack(partial_abs, axis=1)])
    return total, mass


def _check_finite(values: NDArray, points: NDArray) -> None:
    bad = ~np.isfinite(values)
    if bad.any():
        row = int(np.argwhere(bad.reshape(values.shape[0], -1).any(axis=1))[0, 0])
        node = points[row].tolist()
        raise QuadratureError(f"Integrand is not finite at node {node}", node=node)
