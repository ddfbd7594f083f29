import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from numpy.typing import NDArray

from app.core.exceptions import EmptySublevelSet, HypothesisFailure, ValidationError
from app.core.middlewares.run_context_middleware import context_extra
from app.core.utils.linalg import det_sign, rotation_svd, sym_eigen
from app.core.utils.rotations import (
    SO3_BASIS,
    as_matrix3,
    geodesic_distance,
    random_rotations,
    so3_exp,
    vee,
)
from app.so3.models.category_report import CategoryReport
from app.so3.models.critical_rotation import (
    NEGATIVE_PATTERNS,
    POSITIVE_PATTERNS,
    CriticalRotation,
)
from app.so3.models.so3_reports import (
    DescentCluster,
    DescentReport,
    DescentStart,
    HessianCheck,
)

logger = logging.getLogger("ymreduce.services.so3")

TOL_MU_REL = 1e-9
HESSIAN_STEP = 1e-4
DESCENT_TOL = 1e-10
DESCENT_MAX_ITER = 200
CLUSTER_RADIUS = 1e-6


def hessian_diagonal(lambdas: Sequence[float]) -> NDArray:
    l1, l2, l3 = (float(v) for v in lambdas)
    return np.array([-l2 - l3, -l1 - l3, -l1 - l2])


def pair_degenerate(signs: Sequence[int], mu: Sequence[float], tol: float) -> bool:
    """Some lambda_i + lambda_j vanishes within the mu tolerance"""
    for i, j in ((0, 1), (0, 2), (1, 2)):
        if abs(mu[i] - mu[j]) > tol:
            continue
        # equal moduli cancel for opposite signs; both near zero cancel always
        if signs[i] != signs[j] or min(mu[i], mu[j]) <= tol:
            return True
    return False


def _morse_index(hdiag: NDArray, degenerate: bool) -> Optional[int]:
    if degenerate:
        return None
    return int(np.sum(hdiag < 0.0))


class So3Service:
    """Critical points of tau_M(R) = Tr(R M) on SO(3)"""

    def __init__(self, tol_mu_rel: float = TOL_MU_REL):
        self.tol_mu_rel = tol_mu_rel

    def enumerate_critical(self, m) -> List[CriticalRotation]:
        """All critical rotations, sorted by value descending.

        det M != 0: B = Q diag(s_i sqrt(mu_i)) Q^t over the four sign
        patterns with s1 s2 s3 = sign(det M), and R0 = B M^-1.
        det M = 0 within tolerance: the rotation-constrained SVD route.
        """
        m = as_matrix3(m)
        sign = det_sign(m)
        if sign == 0:
            return self.critical_set_svd(m)

        spectrum = sym_eigen(m.T @ m)
        q = spectrum.frame
        mu = spectrum.mu
        root = spectrum.sqrt_mu()
        tol = spectrum.tol_mu(self.tol_mu_rel)

        out = []
        for signs in POSITIVE_PATTERNS if sign > 0 else NEGATIVE_PATTERNS:
            lambdas = np.asarray(signs, dtype=float) * root
            b = q @ np.diag(lambdas) @ q.T
            # R0 M = B  <=>  M^t R0^t = B
            r0 = np.linalg.solve(m.T, b).T
            hdiag = hessian_diagonal(lambdas)
            degenerate = pair_degenerate(signs, mu, tol)
            out.append(
                CriticalRotation(
                    R0=r0,
                    B=0.5 * (b + b.T),
                    signs=signs,
                    value=float(np.sum(lambdas)),
                    morse_index=_morse_index(hdiag, degenerate),
                    degenerate=degenerate,
                    hessian_diag=hdiag,
                    frame=q,
                    route="eigen",
                )
            )
        return sorted(out, key=lambda c: -c.value)

    def critical_set_svd(self, m) -> List[CriticalRotation]:
        """Critical rotations R0 = V S U^t from M = U diag(sigma) V^t with U, V in SO(3).

        S runs over the diagonal sign matrices with det S = 1, so that
        R0 M = V S diag(sigma) V^t is symmetric for every det M.
        """
        m = as_matrix3(m)
        u, sigma, v = rotation_svd(m)
        mu = sigma**2
        tol = self.tol_mu_rel * float(mu[0])
        # sign of sigma3 carries sign(det M)
        base_signs = np.sign(sigma)
        base_signs[base_signs == 0.0] = 1.0
        moduli = np.abs(sigma)

        out = []
        for pattern in POSITIVE_PATTERNS:
            s = np.asarray(pattern, dtype=float)
            r0 = v @ np.diag(s) @ u.T
            lambdas = s * sigma
            b = v @ np.diag(lambdas) @ v.T
            signs = tuple(int(x) for x in s * base_signs)
            hdiag = hessian_diagonal(lambdas)
            degenerate = pair_degenerate(signs, moduli**2, tol)
            out.append(
                CriticalRotation(
                    R0=r0,
                    B=0.5 * (b + b.T),
                    signs=signs,
                    value=float(np.sum(lambdas)),
                    morse_index=_morse_index(hdiag, degenerate),
                    degenerate=degenerate,
                    hessian_diag=hdiag,
                    frame=v,
                    route="svd",
                )
            )
        return sorted(out, key=lambda c: -c.value)

    def critical_values(self, m) -> List[float]:
        return [c.value for c in self.enumerate_critical(m)]

    def hessian_check(self, m, cp: CriticalRotation, step: float = HESSIAN_STEP) -> HessianCheck:
        """Second differences of tau_M(exp(t xi) R0) along the eigenframe directions"""
        m = as_matrix3(m)
        frame = cp.frame
        directions = [frame @ SO3_BASIS[k] @ frame.T for k in range(3)]

        def tau(xi: NDArray) -> float:
            return float(np.trace(so3_exp(vee(xi)) @ cp.R0 @ m))

        f0 = float(np.trace(cp.R0 @ m))
        fd = np.empty((3, 3))
        for i in range(3):
            a = directions[i] * step
            fd[i, i] = (tau(a) - 2.0 * f0 + tau(-a)) / step**2
            for j in range(i + 1, 3):
                b = directions[j] * step
                mixed = (tau(a + b) - tau(a - b) - tau(-a + b) + tau(-a - b)) / (4.0 * step**2)
                fd[i, j] = fd[j, i] = mixed

        max_deviation = float(np.max(np.abs(np.diag(fd) - cp.hessian_diag)))
        off = fd - np.diag(np.diag(fd))
        return HessianCheck(
            analytic=cp.hessian_diag,
            fd=fd,
            max_deviation=max_deviation,
            max_cross=float(np.max(np.abs(off))),
            step=step,
        )

    def descent_oracle(self, m, n_starts: int, seed: int) -> DescentReport:
        """Drive ||skew(R M)|| to zero from seeded random starts and cluster the results.

        Each start uses its own child of SeedSequence(seed), so results do
        not depend on the number of starts before it.
        """
        m = as_matrix3(m)
        if n_starts < 1:
            raise ValidationError("descent needs at least one start")
        children = np.random.SeedSequence(seed).spawn(n_starts)
        tol = DESCENT_TOL * max(1.0, float(np.linalg.norm(m)))

        starts: List[DescentStart] = []
        found: List[Tuple[NDArray, float, float]] = []
        for n, child in enumerate(children):
            r = random_rotations(1, np.random.default_rng(child))[0]
            r, iterations, residual = _stationary_point(r, m, tol)
            converged = residual <= tol
            value = float(np.trace(r @ m))
            starts.append(
                DescentStart(index=n, converged=converged, iterations=iterations, residual=residual, value=value)
            )
            if converged:
                found.append((r, value, residual))

        clusters = _cluster(found)
        enumerated = self.critical_values(m)
        gap = max((min(abs(c.value - e) for e in enumerated) for c in clusters), default=0.0)

        report = DescentReport(
            n_starts=n_starts,
            starts=starts,
            clusters=clusters,
            enumerated_values=enumerated,
            max_value_gap=float(gap),
        )
        logger.info(
            "Descent oracle finished",
            extra=context_extra(
                n_starts=n_starts,
                converged=report.converged_starts,
                clusters=len(clusters),
                max_value_gap=report.max_value_gap,
            ),
        )
        return report

    def category_report(self, m, eta: Optional[float] = None) -> CategoryReport:
        """
        Category lower bound for the sublevel set of -tau_M at level -eta.

        Raises:
            HypothesisFailure: det M > 0 but sqrt(mu1) > sqrt(mu2) + sqrt(mu3) fails
            EmptySublevelSet: eta at or above the top critical value
            ValidationError: eta not positive
        """
        m = as_matrix3(m)
        spectrum = sym_eigen(m.T @ m)
        values = self.critical_values(m)
        sign = det_sign(m)
        root = spectrum.sqrt_mu()
        s1, s2, s3 = (float(v) for v in root)

        if not spectrum.is_strict(self.tol_mu_rel):
            return CategoryReport(
                applicable=False,
                det_sign=sign,
                sqrt_mu=root.tolist(),
                critical_values=values,
                reason="inapplicable: spectrum of M^t M is not strictly separated",
            )

        if sign > 0:
            if not s1 > s2 + s3:
                raise HypothesisFailure(
                    f"det M > 0 needs sqrt(mu1) > sqrt(mu2) + sqrt(mu3); got {s1:.6g} <= {s2 + s3:.6g}"
                )
            case, eta_default = "case1", 0.5 * (s1 - s2 - s3)
        elif sign < 0:
            if s1 < s2 + s3:
                case, eta_default = "case2_extra", 0.5 * (-s1 + s2 + s3)
            else:
                case, eta_default = "case2", s3
        else:
            case, eta_default = "case3", 0.5 * (s1 - s2)

        top = max(values)
        chosen = eta_default if eta is None else float(eta)
        if not chosen > 0.0:
            raise ValidationError(f"eta must be positive, got {chosen}")
        if chosen >= top:
            raise EmptySublevelSet(f"eta = {chosen:.6g} is not below the top critical value {top:.6g}")

        above = [v for v in values if v > chosen]
        return CategoryReport(
            applicable=True,
            case=case,
            eta=chosen,
            eta_overridden=eta is not None,
            det_sign=sign,
            sqrt_mu=root.tolist(),
            critical_values=values,
            values_above_eta=above,
            cat_lower_bound=len(above) if len(above) >= 2 else None,
        )


def _stationary_point(r: NDArray, m: NDArray, tol: float) -> Tuple[NDArray, int, float]:
    """Gauss-Newton on the residual vee(R M) with backtracking and the exp retraction"""
    residual = float(np.linalg.norm(vee(r @ m)))
    for iteration in range(1, DESCENT_MAX_ITER + 1):
        if residual <= tol:
            return r, iteration - 1, residual
        b = r @ m
        jac = np.stack([vee(SO3_BASIS[k] @ b) for k in range(3)], axis=-1)
        step, *_ = np.linalg.lstsq(jac, -vee(b), rcond=None)

        t = 1.0
        while t > 1e-12:
            trial = so3_exp(t * step) @ r
            trial_residual = float(np.linalg.norm(vee(trial @ m)))
            if trial_residual < residual:
                r, residual = trial, trial_residual
                break
            t *= 0.5
        else:
            # no descent along the Gauss-Newton direction
            return r, iteration, residual
    return r, DESCENT_MAX_ITER, residual


def _cluster(found: List[Tuple[NDArray, float, float]]) -> List[DescentCluster]:
    reps: List[List] = []
    for r, value, residual in found:
        for rep in reps:
            if geodesic_distance(rep[0], r) <= CLUSTER_RADIUS:
                rep[3] += 1
                break
        else:
            reps.append([r, value, residual, 1])
    clusters = [DescentCluster(R=r, value=v, count=n, residual=res) for r, v, res, n in reps]
    return sorted(clusters, key=lambda c: -c.value)
