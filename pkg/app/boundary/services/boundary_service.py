import itertools
import logging
from typing import List, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from app.boundary.models.boundary_spec import BoundarySpec
from app.boundary.models.h_matrix import HMatrix
from app.boundary.models.harmonic_poly import HarmonicPolyOneForm
from app.boundary.models.perturbation import PerturbationResult
from app.core.exceptions import ValidationError
from app.core.middlewares.run_context_middleware import context_extra, set_point
from app.core.utils.linalg import sym_eigen
from app.core.utils.points import ball_point
from app.core.utils.rotations import as_matrix3
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.models.quadrature_spec import QuadratureSpec

logger = logging.getLogger("ymreduce.services.boundary")

# |det M| <= DET_EXACT_TOL |M|^3 triggers the pre-regularization
DET_EXACT_TOL = 1e-14
PRE_REGULARIZATION = 1e-8


class BoundaryService:
    """H(p), synthesis of boundary data for a target M, and spectrum separation"""

    def __init__(self, landscape: Optional[LandscapeService] = None):
        self.landscape = landscape or LandscapeService()

    def h_matrix(self, p) -> HMatrix:
        return HMatrix.at(ball_point(p, "p"))

    def curvature_asd(self, bspec: BoundarySpec, x) -> NDArray:
        return bspec.curvature_asd(x)

    def synthesize(
        self,
        target_M,
        p0,
        base: Optional[List[HarmonicPolyOneForm]] = None,
        spec: Optional[QuadratureSpec] = None,
    ) -> BoundarySpec:
        """Boundary data with M(B_0(A), p0) = target_M.

        A = (pi^2 H(p0))^{-1} (target_M - M(base, p0)).
        """
        target = as_matrix3(target_M, "target M")
        p0 = ball_point(p0, "p0")
        set_point(p0)
        bspec = BoundarySpec(base=base) if base is not None else BoundarySpec()
        base_m = self.landscape.base_matrix(bspec, p0, spec)
        synth = self.h_matrix(p0).solve(target - base_m.M)

        logger.info(
            "Boundary data synthesized",
            extra=context_extra(base_route=base_m.route, synth_norm=float(np.linalg.norm(synth))),
        )
        return bspec.with_synth(synth)

    def perturb_nondegenerate(
        self,
        bspec: BoundarySpec,
        p0,
        mu: float,
        spec: Optional[QuadratureSpec] = None,
    ) -> PerturbationResult:
        """Shift A so that M^t M at p0 gains the spectrum shift diag(6, 4, 2) mu + O(mu^2).

        X = (M^t)^{-1} Q diag(3 mu, 2 mu, mu) Q^t with Q the eigenframe of
        M^t M, and A moves by (pi^2 H(p0))^{-1} X.
        """
        if not (mu > 0.0 and np.isfinite(mu)):
            raise ValidationError(f"mu must be a positive real, got {mu}")
        p0 = ball_point(p0, "p0")
        set_point(p0)
        h = self.h_matrix(p0)

        before = self.landscape.interaction_matrix(bspec, p0, spec)
        m = before.M
        regularized = False
        if abs(before.detM) <= DET_EXACT_TOL * max(float(np.linalg.norm(m)) ** 3, 1e-300):
            # M is linear in A, so this moves M by PRE_REGULARIZATION * I
            bspec = bspec.with_synth(bspec.synth + h.solve(PRE_REGULARIZATION * np.eye(3)))
            m = m + PRE_REGULARIZATION * np.eye(3)
            regularized = True
            logger.warning(
                "M is singular at p0; pre-regularizing",
                extra=context_extra(detM=before.detM),
            )

        spectrum = sym_eigen(m.T @ m)
        q = spectrum.frame
        x = np.linalg.solve(m.T, q @ np.diag([3.0 * mu, 2.0 * mu, mu]) @ q.T)
        delta = h.solve(x)
        new_spec = bspec.with_synth(bspec.synth + delta)

        after = self.landscape.interaction_matrix(new_spec, p0, spec)
        mu_after = after.mu
        gaps = [
            float(mu_after[0] - mu_after[1]),
            float(mu_after[1] - mu_after[2]),
            float(mu_after[2]),
        ]
        logger.info(
            "Spectrum separated",
            extra=context_extra(mu=mu, gaps=gaps, regularized=regularized),
        )
        return PerturbationResult(
            spec=new_spec,
            p0=p0,
            mu=mu,
            M_before=before.M,
            M_after=after.M,
            spectrum_before=before.spectrum,
            spectrum_after=after.spectrum,
            gaps=gaps,
            regularized=regularized,
            delta_synth=delta,
        )

    def richardson_slopes(
        self,
        bspec: BoundarySpec,
        p0,
        mu: float,
        spec: Optional[QuadratureSpec] = None,
    ) -> Tuple[NDArray, NDArray, NDArray]:
        """Eigenvalue-shift slopes r(mu), r(mu/2) and the extrapolation 2 r(mu/2) - r(mu)"""

        def slope(step: float) -> NDArray:
            result = self.perturb_nondegenerate(bspec, p0, step, spec)
            return (result.spectrum_after.mu - result.spectrum_before.mu) / step

        r_full = slope(mu)
        r_half = slope(0.5 * mu)
        return r_full, r_half, 2.0 * r_half - r_full


def _harmonic_basis(variables: Tuple[int, ...], degree: int) -> List[List[Tuple[Tuple[int, ...], float]]]:
    """Harmonic polynomials of degree 1..degree in the given coordinates"""

    def mono(*exps: Tuple[int, int]) -> Tuple[int, ...]:
        e = [0, 0, 0, 0]
        for var, power in exps:
            e[var] += power
        return tuple(e)

    basis = []
    if degree >= 1:
        basis += [[(mono((a, 1)), 1.0)] for a in variables]
    if degree >= 2:
        basis += [[(mono((a, 1), (b, 1)), 1.0)] for a, b in itertools.combinations(variables, 2)]
        basis += [[(mono((a, 2)), 1.0), (mono((b, 2)), -1.0)] for a, b in itertools.combinations(variables, 2)]
    if degree >= 3:
        basis += [[(mono((a, 1), (b, 1), (c, 1)), 1.0)] for a, b, c in itertools.combinations(variables, 3)]
        for a, b in itertools.permutations(variables, 2):
            basis.append([(mono((a, 3)), 1.0), (mono((a, 1), (b, 2)), -3.0)])
    return basis


def random_harmonic_base(degree: int, rng: np.random.Generator) -> List[HarmonicPolyOneForm]:
    """Three random 1-forms whose j-th component avoids x_j.

    Each component is a random combination of harmonic polynomials in the
    other three coordinates, so the divergence vanishes identically.
    """
    if degree not in (1, 2, 3):
        raise ValidationError(f"random base degree must be 1, 2 or 3, got {degree}")
    forms = []
    for _ in range(3):
        components = []
        for j in range(4):
            others = tuple(k for k in range(4) if k != j)
            terms = []
            for poly in _harmonic_basis(others, degree):
                c = float(rng.standard_normal())
                terms += [(m, c * w) for m, w in poly]
            components.append(terms)
        forms.append(HarmonicPolyOneForm.from_coefficients(components))
    return forms
