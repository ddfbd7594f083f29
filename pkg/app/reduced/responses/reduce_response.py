from typing import Any, Dict, List, Optional

from pydantic import Field

from app.base.responses.base_response import BaseResponse
from app.reduced.models.param_point import SearchWindow
from app.reduced.models.reduced_critical import ReducedCritical
from app.reduced.models.reduced_reports import HypothesesReport, InvarianceReport, StildeReport


class WindowResponse(BaseResponse):
    d0: float
    lambda0: float
    D1: float
    D2: float
    C0: float
    C4: Optional[float] = None
    C5: Optional[float] = None
    F_max: Optional[float] = None

    @classmethod
    def from_domain(cls, window: SearchWindow) -> "WindowResponse":
        return cls(**window.model_dump())

    def rows(self):
        return [[k, v] for k, v in self.model_dump(exclude={"schema_version"}, exclude_none=True).items()]


class CriticalPointRow(BaseResponse):
    p: List[float]
    R: List[List[float]]
    lam: float
    lambda_sq: float
    value: float
    grad_norm: float
    classification: str
    index: Optional[int] = None
    branch: str
    gamma: float
    G: float
    fiber_value: float
    lambda_residual: float
    reason: Optional[str] = None

    @classmethod
    def from_domain(cls, c: ReducedCritical) -> "CriticalPointRow":
        return cls(
            p=c.q.p.tolist(),
            R=c.q.R.tolist(),
            lam=c.q.lam,
            lambda_sq=c.q.lam**2,
            value=c.value,
            grad_norm=c.grad_norm,
            classification=c.classification,
            index=c.index,
            branch=c.branch,
            gamma=c.gamma,
            G=c.G,
            fiber_value=c.fiber_value,
            lambda_residual=c.lambda_residual,
            reason=c.reason,
        )


class FindResponse(BaseResponse):
    """Critical points of F_eps, sorted by value"""

    epsilon: float
    strategy: str
    window: WindowResponse
    critical: List[CriticalPointRow]

    @classmethod
    def from_domain(cls, found: List[ReducedCritical], window: SearchWindow, epsilon: float, strategy: str) -> "FindResponse":
        return cls(
            epsilon=epsilon,
            strategy=strategy,
            window=WindowResponse.from_domain(window),
            critical=[CriticalPointRow.from_domain(c) for c in found],
        )

    def rows(self):
        return [[*r.p, r.lambda_sq, r.value, r.grad_norm, r.branch, r.classification, r.index] for r in self.critical]


class InvarianceResponse(BaseResponse):
    epsilon: float
    threshold: float
    window: WindowResponse
    passed: bool
    faces: List[Dict[str, Any]]

    @classmethod
    def from_domain(cls, report: InvarianceReport) -> "InvarianceResponse":
        return cls(
            epsilon=report.epsilon,
            threshold=report.threshold,
            window=WindowResponse.from_domain(report.window),
            passed=report.passed,
            faces=[f.to_dict() for f in report.faces],
        )

    def rows(self):
        return [
            [f["face"], f["samples"], f["in_sublevel"], f["vacuous"], f.get("min_margin"), f.get("min_margin_scaled")]
            for f in self.faces
        ]


class StildeResponse(BaseResponse):
    p0: List[float]
    eta: float
    epsilon: float
    F: float
    lambda0: float
    lambda0_sq: float
    case: Optional[str] = None
    cat_lower_bound: Optional[int] = None
    samples: int
    attempts: int
    critical_included: List[float]
    max_excess: float
    inclusion_holds: bool

    @classmethod
    def from_domain(cls, report: StildeReport) -> "StildeResponse":
        return cls(
            p0=report.p0.tolist(),
            eta=report.eta,
            epsilon=report.epsilon,
            F=report.F,
            lambda0=report.lambda0,
            lambda0_sq=report.lambda0**2,
            case=report.category.case,
            cat_lower_bound=report.category.cat_lower_bound,
            samples=report.samples,
            attempts=report.attempts,
            critical_included=report.critical_included,
            max_excess=report.max_excess,
            inclusion_holds=report.inclusion_holds,
        )

    def rows(self):
        return [[k, v] for k, v in self.model_dump(exclude={"schema_version", "p0", "critical_included"}).items()]


class HypothesesResponse(BaseResponse):
    p0: List[float]
    F: float
    det_sign: int
    mu: List[float]
    gammas: Dict[str, float]
    G: Dict[str, float]
    derivatives: List[Dict[str, Any]]
    entries: List[Dict[str, Any]]
    predicted_multiplicity: int
    category: Optional[Dict[str, Any]] = None
    fiber_gamma: Optional[float] = None
    D1_condition: Optional[bool] = None
    D2_condition: Optional[bool] = None
    holding: List[str] = Field(default_factory=list)

    @classmethod
    def from_domain(cls, report: HypothesesReport) -> "HypothesesResponse":
        data = report.to_dict()
        data["holding"] = [f"{e.statement}:{e.case}" for e in report.holding]
        return cls(**data)

    def rows(self):
        return [[e["statement"], e["case"], e["holds"], e.get("function"), e["detail"]] for e in self.entries]
