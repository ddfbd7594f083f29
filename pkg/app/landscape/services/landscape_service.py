import itertools
import json
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from app.boundary.models.boundary_spec import BoundarySpec
from app.boundary.models.h_matrix import HMatrix
from app.core.exceptions import ValidationError
from app.core.middlewares.run_context_middleware import context_extra, set_point
from app.core.utils.finite_differences import central_gradient
from app.core.utils.forms import asd_inner, asd_to_two_form, three_form_flux, wedge_two_one
from app.core.utils.points import as_point4, ball_point
from app.harmonic.models.alpha_field import AlphaField
from app.landscape.models.asymptotic_fit import QUANTITIES, AsymptoticFit
from app.landscape.models.interaction_matrix import InteractionMatrix
from app.landscape.models.landscape_sample import LandscapeSample
from app.quadrature.models.integral_result import IntegralResult, IntegralVector
from app.quadrature.models.quadrature_spec import QuadratureSpec
from app.quadrature.services.quadrature_service import QuadratureService

logger = logging.getLogger("ymreduce.services.landscape")

F_P_LIMIT = 0.99
BOUNDARY_P_LIMIT = 0.9
# FD step for F and M derivatives, relative to the distance to the sphere
GRAD_STEP = 1e-4


class LandscapeService:
    """F(p), M(A_0, p), the Gamma/G functions and the boundary probes.

    F, the kernel K(p) and base integrals are cached per (p, spec) for the
    lifetime of the instance.
    """

    def __init__(self, quadrature: Optional[QuadratureService] = None):
        self.quadrature = quadrature or QuadratureService()
        self._f_cache: Dict[Tuple[bytes, QuadratureSpec], IntegralResult] = {}
        self._kernel_cache: Dict[Tuple[bytes, QuadratureSpec], IntegralVector] = {}
        self._base_cache: Dict[Tuple[str, bytes, QuadratureSpec], IntegralVector] = {}

    @property
    def spec(self) -> QuadratureSpec:
        return self.quadrature.spec

    # ---- F ------------------------------------------------------------

    def F_result(self, p, spec: Optional[QuadratureSpec] = None) -> IntegralResult:
        """F(p) = integral over B^4 of |(dh_p)^-|^2 = 2 sum_{l,k} D[l,k]^2"""
        p = ball_point(p, "p")
        spec = spec or self.spec
        key = (p.tobytes(), spec)
        cached = self._f_cache.get(key)
        if cached is not None:
            return cached

        result = self.quadrature.integrate_b4(_F_integrand(AlphaField(p=p)), spec, focus=p)
        logger.debug(
            "F evaluated",
            extra=context_extra(p=p.tolist(), F=result.value, est_rel_error=result.est_rel_error),
        )
        self._f_cache[key] = result
        return result

    def F_value(self, p, spec: Optional[QuadratureSpec] = None) -> float:
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        return self.F_result(p, spec).value

    def F_monte_carlo(self, p, spec: Optional[QuadratureSpec] = None) -> IntegralResult:
        """F(p) by seeded uniform-ball Monte Carlo; needs spec.mc_samples > 0"""
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        result = self.quadrature.integrate_b4_mc(_F_integrand(AlphaField(p=p)), spec or self.spec)
        logger.debug(
            "F sampled",
            extra=context_extra(p=p.tolist(), F=result.value, std_error=result.std_error),
        )
        return result

    def F_grad(self, p, spec: Optional[QuadratureSpec] = None) -> NDArray:
        """Central differences of F with step 1e-4 (1 - |p|)"""
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        step = GRAD_STEP * (1.0 - float(np.linalg.norm(p)))
        return central_gradient(lambda q: self.F_result(q, spec).value, p, step)

    # ---- M ------------------------------------------------------------

    def volume_kernel(self, p, spec: Optional[QuadratureSpec] = None) -> IntegralVector:
        """K(p) = integral over B^4 of 2 (dh_p)^-, as a (3, 3) matrix indexed [i, k].

        The flat part of the volume integrand is 2 sum_k A[k, j] D[i, k], so
        its integral is K(p) @ A. Cached per (p, spec).
        """
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        spec = spec or self.spec
        key = (p.tobytes(), spec)
        cached = self._kernel_cache.get(key)
        if cached is not None:
            return cached

        field = AlphaField(p=p)
        result = self.quadrature.integrate_b4_vector(
            lambda x: 2.0 * field.dh_asd(x).reshape(-1, 9),
            spec,
            focus=p,
            theta_panels=2,
        )
        self._kernel_cache[key] = result
        return result

    def base_volume(self, bspec: BoundarySpec, p, spec: Optional[QuadratureSpec] = None) -> IntegralVector:
        """Volume integral of 2 sum_k C0[j,k] D[i,k] for the base curvature C0 alone.

        Cached per (base, p, spec), so synthesis and the volume route share one quadrature.
        """
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        spec = spec or self.spec
        key = (json.dumps(bspec.to_dict()["base"]), p.tobytes(), spec)
        cached = self._base_cache.get(key)
        if cached is not None:
            return cached

        field = AlphaField(p=p)

        def integrand(x: NDArray) -> NDArray:
            d = field.dh_asd(x)
            c = bspec.base_curvature_asd(x)
            return 2.0 * np.einsum("njk,nik->nij", c, d).reshape(-1, 9)

        result = self.quadrature.integrate_b4_vector(integrand, spec, focus=p, theta_panels=2)
        logger.debug(
            "Base integral evaluated",
            extra=context_extra(p=p.tolist(), est_rel_error=result.est_rel_error, nodes=result.nodes_used),
        )
        self._base_cache[key] = result
        return result

    def M_volume(self, bspec: BoundarySpec, p, spec: Optional[QuadratureSpec] = None) -> InteractionMatrix:
        """m_ij = integral over B^4 of 2 sum_k C[j,k] D[i,k].

        C is linear in (base, A), so the integral splits into the base
        integral plus K(p) @ A, both by quadrature.
        """
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        parts: List[IntegralVector] = []
        m = np.zeros((3, 3))
        if not bspec.base_is_zero:
            base = self.base_volume(bspec, p, spec)
            m = m + base.values.reshape(3, 3)
            parts.append(base)
        if np.any(bspec.synth != 0.0):
            kernel = self.volume_kernel(p, spec)
            m = m + kernel.values.reshape(3, 3) @ bspec.synth
            parts.append(kernel)
        return InteractionMatrix.build(
            m,
            p,
            route="volume",
            est_rel_error=max((r.est_rel_error for r in parts), default=0.0),
            nodes_used=sum(r.nodes_used for r in parts),
            converged=all(r.converged for r in parts),
        )

    def M_boundary(self, bspec: BoundarySpec, p, spec: Optional[QuadratureSpec] = None) -> InteractionMatrix:
        """m_ij = - integral over S^3 of (dB_j)^- ^ h_i, from the divergence theorem.

        Needs the base to satisfy d*dA = 0, which HarmonicPolyOneForm enforces.
        """
        p = ball_point(p, "p", strict=False, limit=BOUNDARY_P_LIMIT)
        field = AlphaField(p=p)

        def integrand(y: NDArray) -> NDArray:
            omega = asd_to_two_form(bspec.curvature_asd(y))
            h = field.h_oneforms(y)
            cols = []
            for i in range(3):
                for j in range(3):
                    cols.append(-three_form_flux(wedge_two_one(omega[:, j, :], h[:, i, :]), y))
            return np.stack(cols, axis=-1)

        result = self.quadrature.integrate_s3_vector(integrand, spec, focus=p)
        return InteractionMatrix.build(
            result.values.reshape(3, 3),
            p,
            route="boundary",
            est_rel_error=result.est_rel_error,
            nodes_used=result.nodes_used,
            converged=result.converged,
        )

    def base_matrix(self, bspec: BoundarySpec, p, spec: Optional[QuadratureSpec] = None) -> InteractionMatrix:
        """M(A_0, p) of the base alone"""
        if bspec.base_is_zero:
            return InteractionMatrix.build(np.zeros((3, 3)), as_point4(p), route="closed")
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        base = self.base_volume(bspec, p, spec)
        return InteractionMatrix.build(
            base.values.reshape(3, 3),
            p,
            route="volume",
            est_rel_error=base.est_rel_error,
            nodes_used=base.nodes_used,
            converged=base.converged,
        )

    def interaction_matrix(self, bspec: BoundarySpec, p, spec: Optional[QuadratureSpec] = None) -> InteractionMatrix:
        """M(A_0, p) + pi^2 H(p) A; quadrature only for a non-zero base"""
        p = ball_point(p, "p")
        h = HMatrix.at(p)
        synth_part = math.pi**2 * h.matrix @ bspec.synth
        if bspec.base_is_zero:
            return InteractionMatrix.build(synth_part, p, route="closed")
        base = self.base_matrix(bspec, p, spec)
        return InteractionMatrix.build(
            base.M + synth_part,
            p,
            route="closed+volume",
            est_rel_error=base.est_rel_error,
            nodes_used=base.nodes_used,
            converged=base.converged,
        )

    def M_grad(self, bspec: BoundarySpec, p, spec: Optional[QuadratureSpec] = None) -> NDArray:
        """dm_ij/dp_k as (3, 3, 4) by central differences of interaction_matrix"""
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        step = GRAD_STEP * (1.0 - float(np.linalg.norm(p)))
        out = np.empty((3, 3, 4))
        for k in range(4):
            e = np.zeros(4)
            e[k] = step
            plus = self.interaction_matrix(bspec, p + e, spec).M
            minus = self.interaction_matrix(bspec, p - e, spec).M
            out[:, :, k] = (plus - minus) / (2.0 * step)
        return out

    # ---- samples and scans --------------------------------------------

    def landscape_sample(
        self,
        bspec: BoundarySpec,
        p,
        spec: Optional[QuadratureSpec] = None,
        index: Optional[int] = None,
    ) -> LandscapeSample:
        p = ball_point(p, "p", strict=False, limit=F_P_LIMIT)
        set_point(p)
        F = self.F_value(p, spec)
        M = self.interaction_matrix(bspec, p, spec)
        return LandscapeSample.build(p, F, M, index=index)

    def landscape_scan(
        self,
        bspec: BoundarySpec,
        grid_points: int,
        d0: float,
        spec: Optional[QuadratureSpec] = None,
    ) -> List[LandscapeSample]:
        """Samples on ball_grid(grid_points, d0), in grid order"""
        points = ball_grid(grid_points, d0)
        logger.info(
            "Scanning landscape",
            extra=context_extra(grid_points=grid_points, d0=d0, samples=len(points)),
        )
        return [self.landscape_sample(bspec, p, spec, index=n) for n, p in enumerate(points)]

    # ---- boundary asymptotics ------------------------------------------

    def asymptotic_probe(
        self,
        quantity: str,
        direction: Sequence[float],
        d_list: Sequence[float],
        bspec: Optional[BoundarySpec] = None,
        entry: Tuple[int, int] = (0, 0),
        spec: Optional[QuadratureSpec] = None,
    ) -> AsymptoticFit:
        """Evaluate a quantity at p = (1 - d) u and fit its log-log slope in d"""
        if quantity not in QUANTITIES:
            raise ValidationError(f"quantity must be one of {', '.join(QUANTITIES)}, got {quantity!r}")
        d_list = [float(d) for d in d_list]
        if len(d_list) < 2:
            raise ValidationError("asymptotic probe needs at least two d values")
        if any(not (0.0 < d <= 0.5) for d in d_list) or any(b >= a for a, b in zip(d_list, d_list[1:])):
            raise ValidationError("d values must be strictly decreasing in (0, 0.5]")
        u = as_point4(direction, "direction")
        norm = float(np.linalg.norm(u))
        if norm == 0.0:
            raise ValidationError("direction must be non-zero")
        u = u / norm
        if quantity in ("M_entry", "M_grad"):
            bspec = bspec or BoundarySpec.flat(np.eye(3))
        i, j = entry

        values: List[float] = []
        radial: List[float] = []
        tangential: List[float] = []
        for d in d_list:
            p = (1.0 - d) * u
            set_point(p)
            if quantity == "F":
                values.append(self.F_value(p, spec))
            elif quantity == "gradF":
                g = self.F_grad(p, spec)
                r = float(g @ u)
                radial.append(r)
                tangential.append(float(np.linalg.norm(g - r * u)))
                values.append(float(np.linalg.norm(g)))
            elif quantity == "M_entry":
                values.append(float(self.M_volume(bspec, p, spec).M[i, j]))
            else:
                values.append(float(np.linalg.norm(self.M_grad(bspec, p, spec)[i, j])))

        logd = np.log(np.asarray(d_list))
        logv = np.log(np.maximum(np.abs(np.asarray(values)), 1e-300))
        slope, intercept = np.polyfit(logd, logv, 1)

        logger.info(
            "Asymptotic probe fitted",
            extra=context_extra(quantity=quantity, slope=float(slope)),
        )
        return AsymptoticFit(
            quantity=quantity,
            direction=u,
            d=d_list,
            values=values,
            slope=float(slope),
            constant=float(np.exp(intercept)),
            radial=radial or None,
            tangential=tangential or None,
        )


def ball_grid(grid_points: int, d0: float) -> List[NDArray]:
    """Lexicographic grid of the box [-(1-d0)/2, (1-d0)/2]^4.

    The box corners have norm 1 - d0, so all grid_points^4 points lie in
    the closed ball of radius 1 - d0.
    """
    if grid_points < 2:
        raise ValidationError("grid needs at least 2 points per axis")
    if not (0.0 < d0 < 1.0):
        raise ValidationError(f"d0 must lie in (0, 1), got {d0}")
    half = 0.5 * (1.0 - d0)
    axis = np.linspace(-half, half, grid_points)
    return [np.array(coords) for coords in itertools.product(axis, repeat=4)]


def _F_integrand(field: AlphaField):
    """x -> |(dh_p)^-|^2 = 2 sum_{l,k} D[l,k]^2"""

    def integrand(x: NDArray) -> NDArray:
        d = field.dh_asd(x)
        return np.sum(asd_inner(d, d), axis=-1)

    return integrand
