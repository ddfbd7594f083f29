"""
The reduced energy F_eps(p, R, lambda) = 2 lambda^4 F(p) - 4 eps lambda^2 Tr(R M(p))
and the searches, window recipes and checks built on it.

For fixed p the (R, lambda) fiber is solved in closed form: R runs over the
critical rotations of Tr(R M(p)) and lambda*^2 = eps Gamma / F(p) with
Gamma = Tr(R M(p)) > 0, leaving the value -2 eps^2 Gamma^2 / F(p).
"""

import itertools
import logging
import math
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from numpy.typing import NDArray
from scipy.optimize import minimize

from app.boundary.models.boundary_spec import BoundarySpec
from app.core.exceptions import (
    EmptySublevelSet,
    HypothesisFailure,
    InfeasibleWindow,
    NoInteriorCritical,
    ValidationError,
)
from app.core.middlewares.run_context_middleware import context_extra, set_point
from app.core.utils.finite_differences import central_gradient, central_hessian
from app.core.utils.points import ball_point
from app.core.utils.rotations import random_rotations, so3_exp
from app.landscape.models.interaction_matrix import InteractionMatrix
from app.landscape.models.landscape_sample import LandscapeSample
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.models.quadrature_spec import QuadratureSpec
from app.reduced.models.param_point import ParamPoint, SearchWindow
from app.reduced.models.reduced_critical import ReducedCritical
from app.reduced.models.reduced_reports import (
    FaceMargin,
    GDerivatives,
    HypothesesReport,
    HypothesisEntry,
    InvarianceReport,
    StildeReport,
)
from app.so3.models.critical_rotation import CriticalRotation
from app.so3.services.so3_service import So3Service
from config.numerics import SearchSettings
from config.settings import settings

logger = logging.getLogger("ymreduce.services.reduced")

# chart (p, xi, log lambda) steps for gradients
GRADIENT_STEPS = np.array([1e-4] * 4 + [1e-4] * 3 + [1e-6])
# and for classification Hessians
HESSIAN_STEPS = np.array([1e-3] * 4 + [1e-3] * 3 + [1e-4])
G_GRAD_STEP = 1e-4
G_HESS_STEP = 1e-3
NEWTON_MAX_ITER = 25
NEWTON_MAX_STEP = 0.1
NEWTON_STEP_TOL = 1e-10
# |Hessian eigenvalue| <= this times the largest counts as zero
SINGULAR_REL = 1e-6
CRITICAL_REL = 1e-6
MERGE_RADIUS = 1e-3
MAX_POLISH = 8
ALL_FIBERS_GRID_CAP = 9

# G function of the k-th largest critical value, per sign of det M
BRANCHES = {
    1: ("G1p", "G2p"),
    -1: ("G1m", "G2m", "G3m"),
    0: ("G10", "G20"),
}


def branch_name(det_sign: int, k: int) -> str:
    names = BRANCHES[det_sign]
    return names[k] if k < len(names) else f"G{k + 1}"


def reduced_energy(q: ParamPoint, m, F: float) -> float:
    """F_eps(q) = 2 lambda^4 F(p) - 4 eps lambda^2 Tr(R M(p)), without the constant offset"""
    lam2 = q.lam * q.lam
    return 2.0 * lam2 * lam2 * F - 4.0 * q.epsilon * lam2 * float(np.trace(q.R @ np.asarray(m, dtype=float)))


def fiber_reduce(cp: CriticalRotation, epsilon: float, F: float) -> Optional[Tuple[float, float]]:
    """(lambda*, -2 eps^2 Gamma^2 / F) for Gamma = cp.value, or None when Gamma <= 0"""
    gamma = cp.value
    if not gamma > 0.0:
        return None
    lam2 = epsilon * gamma / F
    return math.sqrt(lam2), -2.0 * epsilon**2 * gamma**2 / F


class PointData(NamedTuple):
    F: float
    M: InteractionMatrix
    critical: List[CriticalRotation]


class LandscapeView:
    """F, M and the critical rotations of one boundary spec at one quadrature spec, cached per p"""

    def __init__(self, landscape: LandscapeService, so3: So3Service, bspec: BoundarySpec, spec: QuadratureSpec):
        self.landscape = landscape
        self.so3 = so3
        self.bspec = bspec
        self.spec = spec
        self._cache: Dict[bytes, PointData] = {}

    def at(self, p) -> PointData:
        p = np.asarray(p, dtype=float)
        key = p.tobytes()
        data = self._cache.get(key)
        if data is None:
            F = self.landscape.F_result(p, self.spec).value
            M = self.landscape.interaction_matrix(self.bspec, p, self.spec)
            data = PointData(F, M, self.so3.enumerate_critical(M.M))
            self._cache[key] = data
        return data

    def energy(self, p, R, lam: float, epsilon: float) -> float:
        data = self.at(p)
        lam2 = lam * lam
        return 2.0 * lam2 * lam2 * data.F - 4.0 * epsilon * lam2 * float(np.trace(R @ data.M.M))

    def branch_G(self, p, k: int) -> float:
        """G of the k-th largest critical value, zero where that value is not positive"""
        data = self.at(p)
        value = data.critical[k].value
        return max(value, 0.0) ** 2 / data.F

    def named_G(self, p, name: str) -> float:
        data = self.at(p)
        return LandscapeSample.build(p, data.F, data.M).G[name]

    def fiber_point(self, p, k: int, epsilon: float) -> Optional[ParamPoint]:
        data = self.at(p)
        cp = data.critical[k]
        reduced = fiber_reduce(cp, epsilon, data.F)
        if reduced is None:
            return None
        return ParamPoint(p=p, R=cp.R0, lam=reduced[0], epsilon=epsilon)


def chart_function(view: LandscapeView, q0: ParamPoint) -> Callable[[NDArray], float]:
    """F_eps in the chart (p, xi, log lambda) centred at q0, R = exp(xi) R0"""

    def f(z: NDArray) -> float:
        p = q0.p + z[:4]
        R = so3_exp(z[4:7]) @ q0.R
        lam = q0.lam * math.exp(z[7])
        return view.energy(p, R, lam, q0.epsilon)

    return f


def chart_gradient(view: LandscapeView, q0: ParamPoint, steps: NDArray = GRADIENT_STEPS) -> NDArray:
    f = chart_function(view, q0)
    return central_gradient(lambda w: f(steps * w), np.zeros(8), 1.0) / steps


def chart_hessian(view: LandscapeView, q0: ParamPoint, steps: NDArray = HESSIAN_STEPS) -> NDArray:
    f = chart_function(view, q0)
    return central_hessian(lambda w: f(steps * w), np.zeros(8), 1.0) / np.outer(steps, steps)


def window_grid(n: int, d0: float) -> List[Tuple[Tuple[int, ...], NDArray]]:
    """(multi-index, p) for the grid of [-(1-d0), 1-d0]^4 strictly inside B_{1-d0}"""
    radius = 1.0 - d0
    axis = np.linspace(-radius, radius, n)
    out = []
    for idx in itertools.product(range(n), repeat=4):
        p = axis[list(idx)]
        if float(np.linalg.norm(p)) < radius:
            out.append((idx, p))
    return out


def _ball_to_chart(p: NDArray, radius: float) -> NDArray:
    t = float(np.linalg.norm(p)) / radius
    return p / (radius * math.sqrt(max(1.0 - t * t, 1e-300)))


def _chart_to_ball(z: NDArray, radius: float) -> NDArray:
    return radius * z / math.sqrt(1.0 + float(z @ z))


class ReducedService:
    """Critical points of F_eps, window recipes and the sublevel-set checks"""

    def __init__(
        self,
        landscape: Optional[LandscapeService] = None,
        so3: Optional[So3Service] = None,
        search: Optional[SearchSettings] = None,
    ):
        self.landscape = landscape or LandscapeService()
        self.search = search or settings.numerics.search
        self.so3 = so3 or So3Service(self.search.tol_mu_rel)

    @property
    def spec(self) -> QuadratureSpec:
        return self.landscape.spec

    def view(self, bspec: BoundarySpec, spec: Optional[QuadratureSpec] = None) -> LandscapeView:
        return LandscapeView(self.landscape, self.so3, bspec, spec or self.spec)

    def energy(self, bspec: BoundarySpec, q: ParamPoint, spec: Optional[QuadratureSpec] = None) -> float:
        data = self.view(bspec, spec).at(q.p)
        return reduced_energy(q, data.M.M, data.F)

    def fiber_reduce(
        self, bspec: BoundarySpec, p, cp: CriticalRotation, epsilon: float, spec: Optional[QuadratureSpec] = None
    ) -> Optional[Tuple[float, float]]:
        p = ball_point(p, "p")
        return fiber_reduce(cp, epsilon, self.view(bspec, spec).at(p).F)

    # ---- critical point search ------------------------------------------

    def find_critical(
        self,
        bspec: BoundarySpec,
        window: SearchWindow,
        epsilon: float,
        strategy: str = "minimize",
        n_starts: Optional[int] = None,
        grid_points: Optional[int] = None,
        seed: Optional[int] = None,
    ) -> List[ReducedCritical]:
        """
        Interior critical points of F_eps in the window, sorted by value then p.

        Raises:
            ValidationError: Unknown strategy, or (D2 eps)^(1/2) >= lambda0
            NoInteriorCritical: Every candidate ended on a window face
        """
        if not epsilon > 0.0:
            raise ValidationError(f"epsilon must be positive, got {epsilon}")
        if not window.fits(epsilon):
            raise ValidationError(
                f"window does not fit epsilon = {epsilon}: (D2 eps)^(1/2) = "
                f"{window.lambda_bounds(epsilon)[1]:.6g} >= lambda0 = {window.lambda0:.6g}"
            )
        seed = self.search.seed if seed is None else seed
        if strategy == "minimize":
            found = self._find_minimize(bspec, window, epsilon, n_starts or self.search.n_starts, seed)
        elif strategy in ("all_fibers", "all-fibers"):
            found = self._find_all_fibers(bspec, window, epsilon, grid_points or self.search.grid_points)
        else:
            raise ValidationError(f"strategy must be minimize or all_fibers, got {strategy!r}")

        found.sort(key=lambda c: (c.value, tuple(c.q.p)))
        logger.info(
            "Critical search finished",
            extra=context_extra(strategy=strategy, found=len(found), epsilon=epsilon),
        )
        return found

    def _find_minimize(
        self, bspec: BoundarySpec, window: SearchWindow, epsilon: float, n_starts: int, seed: int
    ) -> List[ReducedCritical]:
        coarse = self.view(bspec, self.spec.coarse())
        full = self.view(bspec)
        radius = window.radius

        def objective(z: NDArray) -> float:
            return -coarse.branch_G(_chart_to_ball(z, radius), 0)

        children = np.random.SeedSequence(seed).spawn(n_starts)
        starts = [np.zeros(4)]
        for child in children[1:]:
            rng = np.random.default_rng(child)
            u = rng.standard_normal(4)
            starts.append(0.8 * radius * rng.uniform() ** 0.25 * u / np.linalg.norm(u))

        minima: List[NDArray] = []
        for p_start in starts:
            result = minimize(
                objective,
                _ball_to_chart(p_start, radius),
                method="Nelder-Mead",
                options={"xatol": 1e-6, "fatol": 1e-12, "maxiter": 600},
            )
            p_min = _chart_to_ball(result.x, radius)
            if coarse.branch_G(p_min, 0) <= 0.0:
                continue
            if all(np.linalg.norm(p_min - other) > MERGE_RADIUS for other in minima):
                minima.append(p_min)

        if not minima:
            raise NoInteriorCritical("Tr(R M) has no positive critical value in the window", face="lambda_low")

        minima.sort(key=lambda p: -coarse.branch_G(p, 0))
        found, faces = [], []
        for p_min in minima[:MAX_POLISH]:
            p_star, face = self._newton_G(full, p_min, 0, radius)
            if face is not None:
                faces.append(face)
                continue
            critical, face = self._critical_at(full, window, p_star, 0, epsilon, "minimize")
            if face is not None:
                faces.append(face)
                continue
            if all(np.linalg.norm(c.q.p - critical.q.p) > 1e-8 for c in found):
                found.append(critical)

        if not found:
            raise NoInteriorCritical("every minimizer ended on a window face", face=faces[0] if faces else None)
        return found

    def _find_all_fibers(
        self, bspec: BoundarySpec, window: SearchWindow, epsilon: float, grid_points: int
    ) -> List[ReducedCritical]:
        n = min(grid_points, ALL_FIBERS_GRID_CAP)
        coarse = self.view(bspec, self.spec.coarse())
        full = self.view(bspec)
        radius = window.radius
        grid = window_grid(n, window.d0)
        h = 2.0 * radius / (n - 1)

        candidates: List[Tuple[int, NDArray]] = []
        for k in range(3):
            values = np.full((n,) * 4, np.nan)
            for idx, p in grid:
                set_point(p)
                if coarse.at(p).critical[k].value > 0.0:
                    values[idx] = coarse.branch_G(p, k)
            if np.all(np.isnan(values)):
                continue
            grads = np.gradient(values, h)
            norm = np.sqrt(sum(g * g for g in grads))
            for idx, p in grid:
                if not np.isfinite(norm[idx]):
                    continue
                neighbours = [
                    norm[tuple(i + d for i, d in zip(idx, delta))]
                    for delta in itertools.product((-1, 0, 1), repeat=4)
                    if any(delta) and all(0 <= i + d < n for i, d in zip(idx, delta))
                ]
                if all(not np.isfinite(v) or norm[idx] <= v for v in neighbours):
                    candidates.append((k, p))

        logger.info("Grid candidates collected", extra=context_extra(grid_points=n, candidates=len(candidates)))

        found: List[Tuple[int, ReducedCritical]] = []
        faces: List[str] = []
        for k, p0 in candidates:
            p_star, face = self._newton_G(full, p0, k, radius)
            if face is not None:
                faces.append(face)
                continue
            if any(j == k and np.linalg.norm(c.q.p - p_star) <= 1e-6 for j, c in found):
                continue
            critical, face = self._critical_at(full, window, p_star, k, epsilon, "all_fibers")
            if face is not None:
                faces.append(face)
                continue
            found.append((k, critical))

        if not found:
            raise NoInteriorCritical("no grid candidate refined to an interior critical point", face=faces[0] if faces else None)
        return [c for _, c in found]

    def _newton_G(self, view: LandscapeView, p0: NDArray, k: int, radius: float) -> Tuple[NDArray, Optional[str]]:
        """Newton iteration on grad G_k = 0; returns (p, face) with face "p" on leaving B_radius"""
        p = np.asarray(p0, dtype=float)

        def g_of(x: NDArray) -> float:
            return view.branch_G(x, k)

        for _ in range(NEWTON_MAX_ITER):
            set_point(p)
            grad = central_gradient(g_of, p, G_GRAD_STEP)
            if not np.any(grad):
                break
            hess = central_hessian(g_of, p, G_HESS_STEP)
            try:
                step = -np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                step = -grad
            length = float(np.linalg.norm(step))
            if length > NEWTON_MAX_STEP:
                step *= NEWTON_MAX_STEP / length
            p_next = p + step
            if not float(np.linalg.norm(p_next)) < radius:
                return p, "p"
            p = p_next
            if length <= NEWTON_STEP_TOL:
                break
        return p, None

    def _critical_at(
        self, view: LandscapeView, window: SearchWindow, p: NDArray, k: int, epsilon: float, strategy: str
    ) -> Tuple[Optional[ReducedCritical], Optional[str]]:
        q = view.fiber_point(p, k, epsilon)
        if q is None:
            return None, "lambda_low"
        face = window.violated_face(q)
        if face is not None:
            return None, face

        data = view.at(p)
        cp = data.critical[k]
        gamma = cp.value
        G = gamma**2 / data.F
        target = epsilon * gamma / data.F
        grad = chart_gradient(view, q)

        index, classification, reason = None, "min", None
        if data.M.spectrum.has_ties(self.so3.tol_mu_rel) or cp.degenerate:
            classification, reason = "degenerate", "so3_degenerate_spectrum"
        else:
            hess = chart_hessian(view, q)
            eig = np.linalg.eigvalsh(0.5 * (hess + hess.T))
            if np.any(np.abs(eig) <= SINGULAR_REL * float(np.max(np.abs(eig)))):
                classification, reason = "degenerate", "singular_hessian"
            else:
                index = int(np.sum(eig < 0.0))
                classification = "min" if index == 0 else "saddle"

        return (
            ReducedCritical(
                q=q,
                value=view.energy(q.p, q.R, q.lam, epsilon),
                grad_norm=float(np.linalg.norm(grad)),
                classification=classification,
                index=index,
                branch=branch_name(data.M.det_sign, k),
                gamma=gamma,
                G=G,
                fiber_value=-2.0 * epsilon**2 * G,
                lambda_residual=abs(q.lam**2 - target) / target,
                reason=reason,
                strategy=strategy,
            ),
            None,
        )

    # ---- window ---------------------------------------------------------

    def suggest_window(self, bspec: BoundarySpec, C0: float, d0: float, grid_points: Optional[int] = None) -> SearchWindow:
        """
        Window from grid extrema over B_{1-d0}: D2 = 2 C4 / C5, D1 = D d0^2 with
        D^2 d0^4 max F = C0 / 16, lambda0 = 0.99 d0 / 2.

        Raises:
            InfeasibleWindow: D1 >= D2
        """
        if not C0 > 0.0:
            raise ValidationError(f"C0 must be positive, got {C0}")
        if not 0.0 < d0 < 1.0:
            raise ValidationError(f"d0 must lie in (0, 1), got {d0}")
        view = self.view(bspec)
        F_values, gamma_values = [], []
        for _, p in window_grid(grid_points or self.search.grid_points, d0):
            set_point(p)
            data = view.at(p)
            F_values.append(data.F)
            gamma_values.append(data.M.gammas()["Gamma1p"])

        C5, F_max, C4 = min(F_values), max(F_values), max(gamma_values)
        D2 = 2.0 * C4 / C5
        D1 = math.sqrt(C0 / (16.0 * d0**4 * F_max)) * d0**2
        logger.info(
            "Window recipe evaluated",
            extra=context_extra(C4=C4, C5=C5, F_max=F_max, D1=D1, D2=D2, grid=len(F_values)),
        )
        if not D1 < D2:
            raise InfeasibleWindow(f"D1 = {D1:.6g} is not below D2 = {D2:.6g} for C0 = {C0}, d0 = {d0}")
        return SearchWindow(d0=d0, lambda0=0.99 * d0 / 2.0, D1=D1, D2=D2, C0=C0, C4=C4, C5=C5, F_max=F_max)

    def check_flow_invariance(
        self,
        bspec: BoundarySpec,
        window: SearchWindow,
        epsilon: float,
        n_samples: int = 200,
        seed: Optional[int] = None,
        pool_size: int = 16,
    ) -> InvarianceReport:
        """
        Signed margins of the flow inequalities on the three faces, over samples
        in the sublevel set F_eps <= -C0 eps^2:

            p face:           d/dt F_eps(p + t p/|p|) > 0
            lambda_low face:  dF_eps/dlambda < 0
            lambda_high face: dF_eps/dlambda > 0
        """
        if n_samples < 1:
            raise ValidationError("invariance check needs at least one sample")
        seed = self.search.seed if seed is None else seed
        view = self.view(bspec)
        threshold = -window.C0 * epsilon**2
        lam_low, lam_high = window.lambda_bounds(epsilon)
        radius = window.radius
        rng_pool, rng_draw = (np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(2))

        def direction() -> NDArray:
            u = rng_pool.standard_normal(4)
            return u / np.linalg.norm(u)

        face_pool = [radius * direction() for _ in range(pool_size)]
        inner_pool = [radius * rng_pool.uniform() ** 0.25 * direction() for _ in range(pool_size)]

        def draw_rotation(p: NDArray, n: int) -> NDArray:
            # alternate Haar draws with draws around the top critical rotation
            if n % 2 == 0:
                return random_rotations(1, rng_draw)[0]
            top = view.at(p).critical[0].R0
            return so3_exp(0.3 * rng_draw.standard_normal(3)) @ top

        def lam_derivative(p: NDArray, R: NDArray, lam: float) -> float:
            h = 1e-6 * lam
            return (view.energy(p, R, lam + h, epsilon) - view.energy(p, R, lam - h, epsilon)) / (2.0 * h)

        faces = []
        margins: List[float] = []
        hits = 0
        for n in range(n_samples):
            p = face_pool[n % pool_size]
            R = draw_rotation(p, n)
            lam = math.sqrt(epsilon * rng_draw.uniform(window.D1, window.D2))
            if view.energy(p, R, lam, epsilon) > threshold:
                continue
            hits += 1
            u = p / np.linalg.norm(p)
            h = 1e-4
            margins.append((view.energy(p + h * u, R, lam, epsilon) - view.energy(p - h * u, R, lam, epsilon)) / (2.0 * h))
        faces.append(_face("p", n_samples, hits, margins, epsilon))

        for name, lam, sign in (("lambda_low", lam_low, -1.0), ("lambda_high", lam_high, 1.0)):
            margins, hits = [], 0
            for n in range(n_samples):
                p = inner_pool[n % pool_size]
                R = draw_rotation(p, n)
                if view.energy(p, R, lam, epsilon) > threshold:
                    continue
                hits += 1
                margins.append(sign * lam_derivative(p, R, lam))
            faces.append(_face(name, n_samples, hits, margins, epsilon))

        report = InvarianceReport(window=window, epsilon=epsilon, threshold=threshold, faces=faces)
        logger.info(
            "Flow invariance checked",
            extra=context_extra(passed=report.passed, margins={f.face: f.min_margin for f in faces}),
        )
        return report

    def stilde_set(
        self,
        bspec: BoundarySpec,
        p0,
        eta: Optional[float],
        epsilon: float,
        n_samples: int = 100,
        seed: Optional[int] = None,
    ) -> StildeReport:
        """
        The set {p0} x S(p0, eta) x {lambda0}, sampled.

        Raises:
            EmptySublevelSet: eta at or above the top critical value at p0
            HypothesisFailure: No eta given and the category recipe does not apply
        """
        p0 = ball_point(p0, "p0")
        set_point(p0)
        seed = self.search.seed if seed is None else seed
        view = self.view(bspec)
        data = view.at(p0)
        category = self.so3.category_report(data.M.M, eta)
        if not category.applicable:
            if eta is None:
                raise HypothesisFailure("no eta given and the spectrum of M^t M is not strictly separated")
            top = max(c.value for c in data.critical)
            if eta >= top:
                raise EmptySublevelSet(f"eta = {eta:.6g} is not below the top critical value {top:.6g}")
        eta = category.eta if category.eta is not None else float(eta)

        lam0 = math.sqrt(eta * epsilon / data.F)
        bound = -(eta**2 / data.F) * epsilon**2
        included = [c for c in data.critical if c.value > eta]
        rotations = [c.R0 for c in included]

        rng = np.random.default_rng(np.random.SeedSequence(seed))
        attempts = 0
        while len(rotations) < n_samples + len(included) and attempts < 100 * n_samples:
            batch = random_rotations(64, rng)
            attempts += 64
            for R in batch:
                if float(np.trace(R @ data.M.M)) >= eta:
                    rotations.append(R)
                    if len(rotations) >= n_samples + len(included):
                        break

        excess = max(view.energy(p0, R, lam0, epsilon) - bound for R in rotations)
        report = StildeReport(
            p0=p0,
            eta=eta,
            epsilon=epsilon,
            F=data.F,
            lambda0=lam0,
            category=category,
            samples=len(rotations),
            attempts=attempts,
            critical_included=[c.value for c in included],
            max_excess=float(excess),
            inclusion_holds=bool(excess <= 1e-12 * abs(bound)),
        )
        logger.info(
            "Sublevel inclusion sampled",
            extra=context_extra(eta=eta, samples=report.samples, inclusion_holds=report.inclusion_holds),
        )
        return report

    # ---- hypotheses ------------------------------------------------------

    def hypotheses_report(
        self, bspec: BoundarySpec, p0, window: Optional[SearchWindow] = None
    ) -> HypothesesReport:
        """Evaluate the existence hypotheses at p0 from the spectrum and FD derivatives of the G functions"""
        p0 = ball_point(p0, "p0")
        set_point(p0)
        view = self.view(bspec)
        data = view.at(p0)
        sample = LandscapeSample.build(p0, data.F, data.M)
        sign = data.M.det_sign
        mu = data.M.mu
        s1, s2, s3 = (float(v) for v in data.M.sqrt_mu)
        tol = data.M.spectrum.tol_mu(self.so3.tol_mu_rel)
        strict = bool(mu[0] - mu[1] > tol and mu[1] - mu[2] > tol)

        derivatives: Dict[str, GDerivatives] = {}

        def derivs(name: str) -> GDerivatives:
            if name not in derivatives:
                def f(x: NDArray) -> float:
                    return view.named_G(x, name)

                step = G_GRAD_STEP * (1.0 - float(np.linalg.norm(p0)))
                hess = central_hessian(f, p0, G_HESS_STEP * (1.0 - float(np.linalg.norm(p0))))
                derivatives[name] = GDerivatives(
                    name=name,
                    value=sample.G[name],
                    gradient=central_gradient(f, p0, step),
                    hessian_eigenvalues=np.linalg.eigvalsh(0.5 * (hess + hess.T)),
                )
            return derivatives[name]

        def critical(name: str) -> bool:
            d = derivs(name)
            return d.grad_norm <= CRITICAL_REL * max(1.0, abs(d.value))

        def non_degenerate(name: str) -> bool:
            eig = derivs(name).hessian_eigenvalues
            scale = float(np.max(np.abs(eig)))
            return critical(name) and scale > 0.0 and bool(np.all(np.abs(eig) > SINGULAR_REL * scale))

        def isolated_max(name: str) -> bool:
            return non_degenerate(name) and bool(np.all(derivs(name).hessian_eigenvalues < 0.0))

        entries: List[HypothesisEntry] = []

        def add(statement: str, case: str, condition: bool, function: Optional[str], test, detail: str) -> None:
            holds = bool(condition and (test(function) if function else True))
            entries.append(HypothesisEntry(statement=statement, case=case, holds=holds, function=function, detail=detail))

        add("existence_max", "1", sign > 0, "G1p", isolated_max, "det M > 0, isolated local max of G1p")
        add("existence_max", "2", sign < 0, "G1m", isolated_max, "det M < 0, isolated local max of G1m")
        add("existence_critical", "1a", sign > 0, "G1p", non_degenerate, "det M > 0, non-degenerate critical point of G1p")
        add("existence_critical", "1b", sign > 0 and s1 > s2 + s3, "G2p", non_degenerate,
            "det M > 0, sqrt(mu1) > sqrt(mu2) + sqrt(mu3), non-degenerate critical point of G2p")
        add("existence_critical", "2a", sign < 0 and mu[1] - mu[2] > tol, "G1m", non_degenerate,
            "det M < 0, mu2 > mu3, non-degenerate critical point of G1m")
        add("existence_critical", "2b", sign < 0 and strict, "G2m", non_degenerate,
            "det M < 0, mu1 > mu2 > mu3, non-degenerate critical point of G2m")
        add("existence_critical", "2c", sign < 0 and mu[0] - mu[1] > tol and s1 < s2 + s3, "G3m", non_degenerate,
            "det M < 0, mu1 > mu2, sqrt(mu1) < sqrt(mu2) + sqrt(mu3), non-degenerate critical point of G3m")
        add("existence_critical", "3a", sign == 0 and mu[1] > tol, "G10", non_degenerate,
            "det M = 0, mu2 > 0, non-degenerate critical point of G10")
        add("existence_critical", "3b", sign == 0 and mu[0] - mu[1] > tol and mu[1] > tol, "G20", non_degenerate,
            "det M = 0, mu1 > mu2 > 0, non-degenerate critical point of G20")
        add("multiplicity", "1", sign > 0 and strict and s1 > s2 + s3, None, None,
            "det M > 0, mu1 > mu2 > mu3, sqrt(mu1) > sqrt(mu2) + sqrt(mu3)")
        add("multiplicity", "2", sign < 0 and strict, None, None, "det M < 0, mu1 > mu2 > mu3")
        add("multiplicity", "2_extra", sign < 0 and strict and s1 < s2 + s3, None, None,
            "det M < 0, mu1 > mu2 > mu3, sqrt(mu1) < sqrt(mu2) + sqrt(mu3)")
        add("multiplicity", "3", sign == 0 and mu[0] - mu[1] > tol and mu[1] > tol, None, None,
            "det M = 0, mu1 > mu2 > 0")

        holding = {(e.statement, e.case) for e in entries if e.holds}
        if ("multiplicity", "2_extra") in holding:
            predicted = 3
        elif any(s == "multiplicity" for s, _ in holding):
            predicted = 2
        elif holding:
            predicted = 1
        else:
            predicted = 0

        category = None
        try:
            category = self.so3.category_report(data.M.M)
        except HypothesisFailure as e:
            logger.info("Category recipe does not apply", extra=context_extra(reason=e.message))

        fiber_gamma = {1: sample.gamma["Gamma1p"], -1: sample.gamma["Gamma1m"], 0: sample.gamma["Gamma10"]}[sign]
        d1_ok = d2_ok = None
        if window is not None:
            d1_ok = bool(window.D1 < 0.5 * fiber_gamma / data.F)
            d2_ok = bool(window.D2 > 2.0 * fiber_gamma / data.F)

        return HypothesesReport(
            p0=p0,
            F=data.F,
            det_sign=sign,
            mu=mu.tolist(),
            gammas=sample.gamma,
            G=sample.G,
            derivatives=list(derivatives.values()),
            entries=entries,
            predicted_multiplicity=predicted,
            category=category,
            fiber_gamma=fiber_gamma,
            D1_condition=d1_ok,
            D2_condition=d2_ok,
        )


def _face(name: str, samples: int, hits: int, margins: List[float], epsilon: float) -> FaceMargin:
    if not margins:
        return FaceMargin(face=name, samples=samples, in_sublevel=0, vacuous=True)
    worst = float(min(margins))
    return FaceMargin(
        face=name,
        samples=samples,
        in_sublevel=hits,
        vacuous=False,
        min_margin=worst,
        min_margin_scaled=worst / epsilon**2,
    )
