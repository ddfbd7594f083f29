import logging
import math
from typing import Optional, Sequence

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import DomainError, ValidationError
from app.core.middlewares.run_context_middleware import context_extra, set_point
from app.core.utils.finite_differences import scaled_laplacian
from app.core.utils.points import (
    SPHERE_TOL,
    as_point4,
    ball_point,
    check_closed_ball,
    im_quaternion_oneform,
    quat_conj,
)
from app.harmonic.models.alpha_field import AlphaField
from app.harmonic.models.field_reports import (
    BoundaryTrace,
    FieldSample,
    LaplacianReport,
    MeanValueReport,
    PoissonComparison,
)
from app.quadrature.models.integral_result import IntegralResult
from app.quadrature.models.quadrature_spec import QuadratureSpec
from app.quadrature.services.quadrature_service import QuadratureService

logger = logging.getLogger("ymreduce.services.harmonic")

# the Poisson kernel is singular as |x| -> 1
POISSON_MARGIN = 0.01
LAPLACIAN_STEP = 1e-3


def _check_index(i: int) -> int:
    if i not in (1, 2, 3, 4):
        raise ValidationError(f"alpha index must be 1..4, got {i}")
    return i - 1


class HarmonicService:
    """Closed-form evaluation of the harmonic fields and their oracles"""

    def __init__(self, quadrature: Optional[QuadratureService] = None):
        self.quadrature = quadrature or QuadratureService()

    def field(self, p, fallback: bool = True) -> AlphaField:
        return AlphaField(p=p, fallback=fallback)

    def alpha_closed(self, p, i: int, x, fallback: bool = True) -> float:
        k = _check_index(i)
        x = ball_point(x, "x", strict=False)
        return float(self.field(p, fallback).alpha(x)[k])

    def alpha_grad(self, p, i: int, x, fallback: bool = True) -> NDArray:
        k = _check_index(i)
        x = ball_point(x, "x", strict=False)
        return self.field(p, fallback).jacobian(x)[k]

    def h_oneforms(self, p, x, fallback: bool = True) -> NDArray:
        return self.field(p, fallback).h_oneforms(x)

    def dh_asd(self, p, x, fallback: bool = True) -> NDArray:
        return self.field(p, fallback).dh_asd(x)

    def alpha_poisson(self, p, i: int, x, spec: Optional[QuadratureSpec] = None) -> IntegralResult:
        """Poisson-integral value of alpha_{p,i}(x), an oracle for alpha_closed.

        Evaluates (1-|x|^2)/(2 pi^2) times the S^3 integral of
        (y_i - p_i) / (|x-y|^4 |y-p|^4).
        """
        k = _check_index(i)
        p = ball_point(p, "p")
        x = ball_point(x, "x", limit=1.0 - POISSON_MARGIN)
        prefactor = (1.0 - float(x @ x)) / (2.0 * math.pi**2)

        def integrand(y: NDArray) -> NDArray:
            dx = np.sum((y - x) ** 2, axis=-1)
            dp = np.sum((y - p) ** 2, axis=-1)
            return (y[:, k] - p[k]) / (dx**2 * dp**2)

        logger.debug(
            "Evaluating Poisson oracle",
            extra=context_extra(index=i, x=x.tolist(), p=p.tolist()),
        )
        result = self.quadrature.integrate_s3(integrand, spec, focus=p, secondary=x)
        return result.model_copy(update={"value": prefactor * result.value})

    def poisson_compare(self, p, i: int, x, spec: Optional[QuadratureSpec] = None) -> PoissonComparison:
        closed = self.alpha_closed(p, i, x)
        oracle = self.alpha_poisson(p, i, x, spec)
        return PoissonComparison(
            p=as_point4(p),
            x=as_point4(x),
            index=i,
            closed=closed,
            poisson=oracle.value,
            abs_error=abs(closed - oracle.value),
            est_rel_error=oracle.est_rel_error,
            converged=oracle.converged,
        )

    def divergence_identity(self, p, spec: Optional[QuadratureSpec] = None):
        """(sum_i d alpha_{p,i}/dx_i at 0, (2/pi^2) times the S^3 integral of (1 - y.p)/|y-p|^4)"""
        p = ball_point(p, "p")
        trace = float(np.trace(self.field(p).jacobian(np.zeros(4))))

        def integrand(y: NDArray) -> NDArray:
            dp = np.sum((y - p) ** 2, axis=-1)
            return (1.0 - y @ p) / dp**2

        result = self.quadrature.integrate_s3(integrand, spec, focus=p)
        return trace, 2.0 / math.pi**2 * result.value

    def boundary_trace(self, p, x) -> BoundaryTrace:
        """(x - p)/|x - p|^4 and Im[(x - p)^bar dx]/|x - p|^4 for x on S^3"""
        p = ball_point(p, "p")
        x = as_point4(x, "x")
        if abs(float(np.linalg.norm(x)) - 1.0) > 1e3 * SPHERE_TOL:
            raise DomainError(f"boundary trace needs |x| = 1, got {float(np.linalg.norm(x)):.12g}")
        d = x - p
        r4 = float(d @ d) ** 2
        return BoundaryTrace(
            p=p,
            x=x,
            alpha=d / r4,
            h=im_quaternion_oneform(quat_conj(d)) / r4,
        )

    def sample(self, p, x, fallback: bool = True) -> FieldSample:
        """All closed-form quantities at (p, x) for the field command"""
        field = self.field(p, fallback)
        set_point(field.p)
        x = ball_point(x, "x", strict=False)
        trace = None
        if abs(float(np.linalg.norm(x)) - 1.0) <= 1e3 * SPHERE_TOL:
            trace = self.boundary_trace(field.p, x)
        return FieldSample(
            p=field.p,
            x=x,
            branch=field.branch,
            alpha=field.alpha(x),
            grad_alpha=field.jacobian(x),
            h=field.h_oneforms(x),
            dh_asd=field.dh_asd(x),
            boundary_trace=trace,
        )

    def laplacian_check(self, p, points: Sequence[Sequence[float]], step: float = LAPLACIAN_STEP) -> LaplacianReport:
        """Scaled FD Laplacians of the four alpha fields and the nine (dh)^- entries"""
        field = self.field(p)
        pts = check_closed_ball(np.atleast_2d(np.asarray(points, dtype=float)), "points")
        if np.any(np.linalg.norm(pts, axis=-1) > 1.0 - 2.0 * step):
            raise DomainError("Laplacian stencil leaves the ball; keep points away from the sphere")

        def fields(x: NDArray) -> NDArray:
            return np.concatenate([field.alpha(x), field.dh_asd(x).reshape(-1)])

        max_alpha = 0.0
        max_dh = 0.0
        worst = pts[0]
        worst_value = -1.0
        for x in pts:
            ratios = scaled_laplacian(fields, x, step)
            a, d = float(np.max(ratios[:4])), float(np.max(ratios[4:]))
            max_alpha = max(max_alpha, a)
            max_dh = max(max_dh, d)
            if max(a, d) > worst_value:
                worst_value = max(a, d)
                worst = x

        return LaplacianReport(
            p=field.p,
            points=len(pts),
            max_alpha=max_alpha,
            max_dh=max_dh,
            worst_point=worst.tolist(),
        )

    def mean_value_check(self, p, spec: Optional[QuadratureSpec] = None) -> MeanValueReport:
        """Integral over B^4 of 2 (dh_{p,l})_k^- against pi^2 (dh_{p,l})_k^-(0)"""
        field = self.field(p)
        set_point(field.p)

        result = self.quadrature.integrate_b4_vector(
            lambda x: 2.0 * field.dh_asd(x).reshape(-1, 9),
            spec,
            focus=field.p,
            theta_panels=2,
        )
        integral = result.values.reshape(3, 3)
        expected = math.pi**2 * field.dh_asd(np.zeros(4))
        # entries of (dh)^-(0) off the diagonal vanish; compare against the largest
        scale = max(float(np.max(np.abs(expected))), 1e-300)
        rel = float(np.max(np.abs(integral - expected))) / scale

        logger.debug(
            "Mean-value check",
            extra=context_extra(max_rel_error=rel, est_rel_error=result.est_rel_error),
        )
        return MeanValueReport(
            p=field.p,
            integral=integral,
            expected=expected,
            max_rel_error=rel,
            est_rel_error=result.est_rel_error,
        )
