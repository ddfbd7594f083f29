from typing import List, Optional

import numpy as np
from pydantic import Field

from app.base.responses.base_response import BaseResponse
from app.so3.models.category_report import CategoryReport
from app.so3.models.critical_rotation import CriticalRotation
from app.so3.models.so3_reports import DescentReport, HessianCheck


class CriticalRow(BaseResponse):
    value: float
    signs: List[int]
    morse_index: Optional[int] = None
    degenerate: bool
    hessian_diag: List[float]
    R0: List[List[float]]
    symmetry_residual: float
    hessian_deviation: Optional[float] = None

    @classmethod
    def from_domain(cls, cp: CriticalRotation, m, check: Optional[HessianCheck] = None) -> "CriticalRow":
        return cls(
            value=cp.value,
            signs=list(cp.signs),
            morse_index=cp.morse_index,
            degenerate=cp.degenerate,
            hessian_diag=cp.hessian_diag.tolist(),
            R0=cp.R0.tolist(),
            symmetry_residual=cp.symmetry_residual(m),
            hessian_deviation=check.max_deviation if check else None,
        )


class CriticalSetResponse(BaseResponse):
    """Critical points of Tr(R M) on SO(3), value descending"""

    M: List[List[float]]
    det: float
    route: str
    critical: List[CriticalRow]

    @classmethod
    def from_domain(cls, m, critical: List[CriticalRotation], checks=None) -> "CriticalSetResponse":
        checks = checks or [None] * len(critical)
        return cls(
            M=[list(map(float, row)) for row in m],
            det=float(np.linalg.det(m)),
            route=critical[0].route if critical else "eigen",
            critical=[CriticalRow.from_domain(cp, m, c) for cp, c in zip(critical, checks)],
        )

    def rows(self):
        return [
            [
                r.value,
                "".join("+" if s > 0 else "-" for s in r.signs),
                r.morse_index,
                r.degenerate,
                " ".join(f"{v:.9g}" for row in r.R0 for v in row),
            ]
            for r in self.critical
        ]


class DescentResponse(BaseResponse):
    """Clusters found by the multistart descent"""

    n_starts: int
    converged_starts: int
    cluster_values: List[float]
    cluster_counts: List[int]
    enumerated_values: List[float]
    max_value_gap: float
    failed_starts: List[int] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, report: DescentReport) -> "DescentResponse":
        return cls(
            n_starts=report.n_starts,
            converged_starts=report.converged_starts,
            cluster_values=report.cluster_values,
            cluster_counts=[c.count for c in report.clusters],
            enumerated_values=report.enumerated_values,
            max_value_gap=report.max_value_gap,
            failed_starts=[s.index for s in report.starts if not s.converged],
        )

    def rows(self):
        return [[v, n] for v, n in zip(self.cluster_values, self.cluster_counts)]


class CategoryResponse(BaseResponse):
    """Category lower bound of a sublevel set of -Tr(R M)"""

    applicable: bool
    case: Optional[str] = None
    eta: Optional[float] = None
    eta_overridden: bool = False
    det_sign: int
    sqrt_mu: List[float]
    critical_values: List[float]
    values_above_eta: List[float]
    cat_lower_bound: Optional[int] = None
    reason: Optional[str] = None

    @classmethod
    def from_domain(cls, report: CategoryReport) -> "CategoryResponse":
        return cls(**report.model_dump())

    def rows(self):
        return [
            ["case", self.case],
            ["eta", self.eta],
            ["values_above_eta", " ".join(f"{v:.9g}" for v in self.values_above_eta)],
            ["cat_lower_bound", self.cat_lower_bound],
        ]
