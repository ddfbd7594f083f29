"""
The acceptance suite behind the verify command.

Every check returns (passed, measured, tolerance, detail); run() adds the
timing and turns application errors into failed checks, so a deliberately
coarse quadrature shows up as measured deviations instead of a crash.
"""

import logging
import math
import time
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from app.boundary.models.boundary_spec import BoundarySpec
from app.boundary.services.boundary_service import BoundaryService, random_harmonic_base
from app.core.exceptions import BaseAppException, ValidationError
from app.core.middlewares.run_context_middleware import context_extra, set_point
from app.harmonic.services.harmonic_service import HarmonicService
from app.landscape.services.landscape_service import LandscapeService
from app.quadrature.services.quadrature_service import QuadratureService
from app.reduced.services.reduced_service import ReducedService
from app.verify.models.check_result import CheckResult, VerifyReport

logger = logging.getLogger("ymreduce.services.verify")

Outcome = Tuple[bool, Optional[float], Optional[float], str]

PROBE_D = (0.2, 0.1, 0.05, 0.025)
PROBE_DIRECTION = (0.0, 0.0, 0.0, -1.0)
MEAN_VALUE_POINTS = ((0.0, 0.0, 0.0, 0.0), (0.3, 0.0, 0.0, 0.0), (0.0, 0.0, 0.0, -0.7))
TRACE_POINTS = ((0.3, 0.0, 0.0, 0.0), (0.0, 0.5, 0.0, 0.2), (0.0, 0.0, 0.0, -0.7))
ROUND_TRIP_POINTS = ((0.0, 0.0, 0.0, 0.0), (0.3, 0.0, 0.0, 0.0), (0.0, 0.2, -0.3, 0.1))
MONTE_CARLO_POINT = (0.0, 0.0, 0.5, 0.0)
# used when --mc-samples is not set
MONTE_CARLO_SAMPLES = 100_000
MONTE_CARLO_SIGMAS = 5.0

# (matrix, critical values descending, Morse indices)
SO3_FIXTURES = (
    (np.diag([5.0, 2.0, 1.0]), (8.0, 2.0, -4.0, -6.0), (3, 2, 1, 0)),
    (np.diag([3.0, 2.0, -1.0]), (4.0, 2.0, 0.0, -6.0), (3, 2, 1, 0)),
    (np.eye(3), (3.0, -1.0, -1.0, -1.0), (3, None, None, None)),
)

REDUCED_EPSILON = 0.01
REDUCED_C0 = 0.1
REDUCED_D0 = 0.5
REDUCED_STARTS = 4


def _random_directions(rng: np.random.Generator, n: int) -> NDArray:
    u = rng.standard_normal((n, 4))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def _random_ball(rng: np.random.Generator, n: int, radius: float) -> NDArray:
    return radius * rng.uniform(size=(n, 1)) ** 0.25 * _random_directions(rng, n)


def _rel(a, b) -> float:
    """Largest entrywise deviation relative to the largest entry of b"""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b))) / max(float(np.max(np.abs(b))), 1e-300)


class VerifyService:
    """Named acceptance checks over the closed forms, the quadrature oracles and the searches"""

    def __init__(
        self,
        quadrature: Optional[QuadratureService] = None,
        reduced: Optional[ReducedService] = None,
        seed: int = 0,
    ):
        self.quadrature = quadrature or QuadratureService()
        self.harmonic = HarmonicService(self.quadrature)
        self.landscape = LandscapeService(self.quadrature)
        self.boundary = BoundaryService(self.landscape)
        self.reduced = reduced or ReducedService(self.landscape)
        self.so3 = self.reduced.so3
        self.seed = seed
        self.checks: Dict[str, Callable[[], Outcome]] = {
            "F0": self.check_F0,
            "poisson": self.check_poisson,
            "harmonicity": self.check_harmonicity,
            "mean_value": self.check_mean_value,
            "trace_identity": self.check_trace_identity,
            "F_slope": self.check_F_slope,
            "M_bounded": self.check_M_bounded,
            "so3_tables": self.check_so3_tables,
            "descent": self.check_descent,
            "hessian": self.check_hessian,
            "closed_form": self.check_closed_form,
            "round_trip": self.check_round_trip,
            "perturb": self.check_perturb,
            "reduced": self.check_reduced,
            "invariance": self.check_invariance,
            "monte_carlo": self.check_monte_carlo,
        }

    @property
    def names(self) -> List[str]:
        return list(self.checks)

    def rng(self, name: str) -> np.random.Generator:
        """A generator per check, so --only gives the same draws as a full run"""
        child = np.random.SeedSequence(self.seed).spawn(len(self.checks))[self.names.index(name)]
        return np.random.default_rng(child)

    def run(self, only: Optional[Sequence[str]] = None) -> VerifyReport:
        selected = list(only) if only else self.names
        unknown = [n for n in selected if n not in self.checks]
        if unknown:
            raise ValidationError(f"unknown check(s): {', '.join(unknown)}; see verify --list")

        results = [self.run_check(name) for name in selected]
        report = VerifyReport(checks=results)
        logger.info(
            "Verification finished",
            extra=context_extra(checks=len(results), failed=report.failed),
        )
        return report

    def run_check(self, name: str) -> CheckResult:
        logger.info("Running check", extra=context_extra(check=name))
        start = time.perf_counter()
        try:
            passed, measured, tolerance, detail = self.checks[name]()
        except BaseAppException as e:
            logger.warning("Check raised", extra=context_extra(check=name, error_type=type(e).__name__))
            passed, measured, tolerance, detail = False, None, None, f"{type(e).__name__}: {e.message}"
        finally:
            set_point(None)
        elapsed = time.perf_counter() - start
        if measured is not None and not math.isfinite(measured):
            passed = False
        return CheckResult(
            name=name,
            passed=bool(passed),
            measured=measured,
            tolerance=tolerance,
            elapsed=elapsed,
            detail=detail,
        )

    # ---- harmonic fields --------------------------------------------------

    def check_F0(self) -> Outcome:
        value = self.landscape.F_value(np.zeros(4))
        rel = abs(value - 12.0 * math.pi**2) / (12.0 * math.pi**2)
        return rel <= 1e-8, rel, 1e-8, f"F(0) = {value:.15g}"

    def check_poisson(self) -> Outcome:
        """alpha closed form against the Poisson integral on a 5 x 5 grid of (p, x)"""
        rng = self.rng("poisson")
        p_dirs, x_dirs = _random_directions(rng, 5), _random_directions(rng, 5)
        worst, where = 0.0, ""
        for p in (r * u for r, u in zip((0.0, 0.25, 0.5, 0.75, 0.9), p_dirs)):
            for x in (r * u for r, u in zip((0.0, 0.2, 0.4, 0.6, 0.8), x_dirs)):
                set_point(p)
                closed = self.harmonic.field(p).alpha(x)
                # mixed scale: alpha vanishes identically at p = x = 0
                scale = max(float(np.max(np.abs(closed))), 1.0)
                for i in range(1, 5):
                    oracle = self.harmonic.alpha_poisson(p, i, x).value
                    dev = abs(oracle - float(closed[i - 1])) / scale
                    if dev > worst:
                        worst, where = dev, f"|p| = {np.linalg.norm(p):.2f}, |x| = {np.linalg.norm(x):.2f}, i = {i}"
        return worst <= 1e-6, worst, 1e-6, where

    def check_harmonicity(self) -> Outcome:
        rng = self.rng("harmonicity")
        worst = 0.0
        for r, u in zip((5e-4, 0.2, 0.4, 0.55, 0.7), _random_directions(rng, 5)):
            report = self.harmonic.laplacian_check(r * u, _random_ball(rng, 50, 0.8))
            worst = max(worst, report.max_alpha, report.max_dh)
        return worst <= 1e-4, worst, 1e-4, "5 points p, 50 points x each"

    def check_mean_value(self) -> Outcome:
        worst = max(self.harmonic.mean_value_check(np.asarray(p)).max_rel_error for p in MEAN_VALUE_POINTS)
        return worst <= 1e-6, worst, 1e-6, "all nine entries"

    def check_trace_identity(self) -> Outcome:
        """Both sides of sum_i d alpha_{p,i}/dx_i (0) = 4"""
        worst = 0.0
        for p in TRACE_POINTS:
            trace, integral = self.harmonic.divergence_identity(np.asarray(p))
            worst = max(worst, abs(trace - 4.0) / 4.0, abs(integral - 4.0) / 4.0)
        return worst <= 1e-6, worst, 1e-6, "exponent-4 kernel"

    # ---- landscape ----------------------------------------------------------

    def check_F_slope(self) -> Outcome:
        fit = self.landscape.asymptotic_probe("F", PROBE_DIRECTION, PROBE_D)
        scaled = [v * d**4 for v, d in zip(fit.values, fit.d)]
        change = abs(scaled[-1] - scaled[-2]) / abs(scaled[-2])
        deviation = abs(fit.slope + 4.0)
        passed = deviation <= 0.15 and change < 0.10
        return passed, deviation, 0.15, f"slope {fit.slope:.6g}, F d^4 change {change:.3%}"

    def check_M_bounded(self) -> Outcome:
        """|m_ij| stays within a factor 2 while F grows by more than 100"""
        bspec = BoundarySpec.flat(np.eye(3))
        u = np.asarray(PROBE_DIRECTION)
        m_max, F = [], []
        for d in PROBE_D:
            p = (1.0 - d) * u
            set_point(p)
            m_max.append(float(np.max(np.abs(self.landscape.M_volume(bspec, p).M))))
            F.append(self.landscape.F_value(p))
        ratio = max(m_max) / min(m_max)
        growth = F[-1] / F[0]
        return ratio < 2.0 and growth > 100.0, ratio, 2.0, f"F growth {growth:.6g}"

    def check_monte_carlo(self) -> Outcome:
        """F by the deterministic rule against seeded Monte Carlo, in standard errors"""
        spec = self.quadrature.spec
        if spec.mc_samples <= 0:
            spec = spec.model_copy(update={"mc_samples": MONTE_CARLO_SAMPLES})
        p = np.asarray(MONTE_CARLO_POINT)
        set_point(p)
        quad = self.landscape.F_value(p)
        sampled = self.landscape.F_monte_carlo(p, spec)
        if not sampled.std_error:
            return False, None, MONTE_CARLO_SIGMAS, "zero standard error"
        sigmas = abs(quad - sampled.value) / sampled.std_error
        detail = f"{spec.mc_samples} samples, F = {quad:.10g}, Monte Carlo {sampled.value:.10g} +- {sampled.std_error:.3g}"
        return sigmas <= MONTE_CARLO_SIGMAS, sigmas, MONTE_CARLO_SIGMAS, detail

    def check_closed_form(self) -> Outcome:
        """M_volume = pi^2 H A for base 0, and the volume and boundary routes agree"""
        rng = self.rng("closed_form")
        closed_worst, routes_worst = 0.0, 0.0
        for p in _random_ball(rng, 10, 0.7):
            set_point(p)
            bspec = BoundarySpec.flat(rng.standard_normal((3, 3)))
            volume = self.landscape.M_volume(bspec, p).M
            closed = self.landscape.interaction_matrix(bspec, p).M
            boundary = self.landscape.M_boundary(bspec, p).M
            closed_worst = max(closed_worst, _rel(volume, closed))
            routes_worst = max(routes_worst, _rel(boundary, volume))
        passed = closed_worst <= 1e-6 and routes_worst <= 1e-5
        return passed, closed_worst, 1e-6, f"volume vs boundary {routes_worst:.3g} (tolerance 1e-05)"

    # ---- SO(3) ---------------------------------------------------------------

    def check_so3_tables(self) -> Outcome:
        worst_residual, mismatches = 0.0, []
        for m, values, indices in SO3_FIXTURES:
            critical = self.so3.enumerate_critical(m)
            found_values = [c.value for c in critical]
            found_indices = [c.morse_index for c in critical]
            if not np.allclose(found_values, values, atol=1e-9) or found_indices != list(indices):
                mismatches.append(f"diag({', '.join(f'{v:g}' for v in np.diag(m))})")
            worst_residual = max([worst_residual] + [c.symmetry_residual(m) for c in critical])
        detail = "tables match" if not mismatches else "mismatch: " + "; ".join(mismatches)
        return not mismatches and worst_residual <= 1e-9, worst_residual, 1e-9, detail

    def check_descent(self) -> Outcome:
        """Four clusters on diag(5, 2, 1); no stationary value off the enumerated set"""
        rng = self.rng("descent")
        fixture = self.so3.descent_oracle(np.diag([5.0, 2.0, 1.0]), 200, int(rng.integers(2**32)))
        worst = fixture.max_value_gap
        tested = 0
        while tested < 50:
            m = rng.standard_normal((3, 3))
            spectrum = np.linalg.eigvalsh(m.T @ m)
            if abs(np.linalg.det(m)) < 1e-3 or np.min(np.diff(spectrum)) < 1e-3 * spectrum[-1]:
                continue
            tested += 1
            worst = max(worst, self.so3.descent_oracle(m, 20, int(rng.integers(2**32))).max_value_gap)
        clusters = len(fixture.clusters)
        return clusters == 4 and worst <= 1e-6, worst, 1e-6, f"{clusters} clusters on diag(5,2,1)"

    def check_hessian(self) -> Outcome:
        worst, multisets = 0.0, True
        for m, _, _ in SO3_FIXTURES[:2]:
            critical = self.so3.enumerate_critical(m)
            for cp in critical:
                check = self.so3.hessian_check(m, cp)
                worst = max(worst, check.max_deviation, check.max_cross)
            multisets &= sorted(c.morse_index for c in critical) == [0, 1, 2, 3]
        detail = "indices {0,1,2,3}" if multisets else "Morse-index multiset differs from {0,1,2,3}"
        return multisets and worst <= 1e-5, worst, 1e-5, detail

    # ---- boundary data ----------------------------------------------------------

    def check_round_trip(self) -> Outcome:
        """synthesize, then recompute M by the volume route"""
        rng = self.rng("round_trip")
        base = random_harmonic_base(2, rng)
        worst = 0.0
        for p0 in ROUND_TRIP_POINTS:
            for _ in range(5):
                target = rng.standard_normal((3, 3))
                bspec = self.boundary.synthesize(target, p0, base)
                worst = max(worst, _rel(self.landscape.M_volume(bspec, p0).M, target))
        return worst <= 1e-5, worst, 1e-5, "5 targets at 3 points, degree-2 base"

    def check_perturb(self) -> Outcome:
        """Separation of a tied spectrum; Richardson slopes against (6, 4, 2)"""
        bspec = BoundarySpec.flat(np.eye(3) / (2.0 * math.pi**2))
        p0, mu = np.array([0.1, 0.0, 0.0, 0.0]), 1e-3
        result = self.boundary.perturb_nondegenerate(bspec, p0, mu)
        _, _, slopes = self.boundary.richardson_slopes(bspec, p0, mu)
        expected = np.array([6.0, 4.0, 2.0])
        worst = float(np.max(np.abs(slopes - expected) / expected))
        passed = result.strictly_separated and worst <= 0.10
        return passed, worst, 0.10, "slopes " + ", ".join(f"{s:.6g}" for s in slopes)

    # ---- reduced model ------------------------------------------------------------

    def _reduced_instance(self):
        bspec = BoundarySpec.flat(np.diag([5.0, 2.0, 1.0]) / (2.0 * math.pi**2))
        window = self.reduced.suggest_window(bspec, REDUCED_C0, REDUCED_D0)
        return bspec, window

    def check_reduced(self) -> Outcome:
        """Interior minimizer at eps = 0.01 with the fiber identities"""
        eps = REDUCED_EPSILON
        bspec, window = self._reduced_instance()
        found = self.reduced.find_critical(
            bspec, window, eps, "minimize", n_starts=REDUCED_STARTS, seed=int(self.rng("reduced").integers(2**32))
        )
        best = found[0]
        scaled_grad = best.grad_norm / eps**2
        fiber_dev = abs(best.value - best.fiber_value) / abs(best.fiber_value)
        passed = (
            best.classification == "min"
            and window.violated_face(best.q) is None
            and scaled_grad <= 1e-8
            and fiber_dev <= 1e-8
            and best.lambda_residual <= 1e-10
        )
        detail = (
            f"{best.classification} at |p| = {np.linalg.norm(best.q.p):.3g}, "
            f"fiber deviation {fiber_dev:.3g}, lambda residual {best.lambda_residual:.3g}"
        )
        return passed, scaled_grad, 1e-8, detail

    def check_invariance(self) -> Outcome:
        """Face margins of the suggested window; at least one face must be sampled.

        With the suggested D2 the lambda_high face is always vacuous: F_eps >= 0
        there, so the sublevel set F_eps <= -C0 eps^2 never reaches it and only
        the p and lambda_low faces carry samples.
        """
        bspec, window = self._reduced_instance()
        report = self.reduced.check_flow_invariance(
            bspec, window, REDUCED_EPSILON, 200, int(self.rng("invariance").integers(2**32))
        )
        sampled = [f for f in report.faces if not f.vacuous]
        measured = min((f.min_margin_scaled for f in sampled), default=None)
        vacuous = [f.face for f in report.faces if f.vacuous]
        detail = "vacuous faces: " + (", ".join(vacuous) if vacuous else "none")
        return report.passed and bool(sampled), measured, 0.0, detail
