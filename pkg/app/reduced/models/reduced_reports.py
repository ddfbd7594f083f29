from typing import List, Optional

import numpy as np

from app.base.models.base_model import DomainModel
from app.reduced.models.param_point import SearchWindow
from app.so3.models.category_report import CategoryReport


class FaceMargin(DomainModel):
    """Worst signed margin of the flow inequality on one window face"""

    face: str
    samples: int
    in_sublevel: int
    vacuous: bool
    min_margin: Optional[float] = None
    min_margin_scaled: Optional[float] = None

    @property
    def satisfied(self) -> bool:
        return self.vacuous or (self.min_margin is not None and self.min_margin > 0.0)


class InvarianceReport(DomainModel):
    window: SearchWindow
    epsilon: float
    threshold: float
    faces: List[FaceMargin]

    @property
    def passed(self) -> bool:
        return all(f.satisfied for f in self.faces)


class StildeReport(DomainModel):
    """
    {p0} x S(p0, eta) x {lambda0} with lambda0^2 = eta eps / F(p0), and the
    sampled check F_eps <= -(eta^2 / F(p0)) eps^2 on it.
    """

    p0: np.ndarray
    eta: float
    epsilon: float
    F: float
    lambda0: float
    category: CategoryReport
    samples: int
    attempts: int
    critical_included: List[float]
    max_excess: float
    inclusion_holds: bool


class HypothesisEntry(DomainModel):
    statement: str
    case: str
    holds: bool
    function: Optional[str] = None
    detail: str = ""


class GDerivatives(DomainModel):
    name: str
    value: float
    gradient: np.ndarray
    hessian_eigenvalues: np.ndarray

    @property
    def grad_norm(self) -> float:
        return float(np.linalg.norm(self.gradient))


class HypothesesReport(DomainModel):
    """Which existence statements hold at p0"""

    p0: np.ndarray
    F: float
    det_sign: int
    mu: List[float]
    gammas: dict
    G: dict
    derivatives: List[GDerivatives]
    entries: List[HypothesisEntry]
    predicted_multiplicity: int
    category: Optional[CategoryReport] = None
    fiber_gamma: Optional[float] = None
    D1_condition: Optional[bool] = None
    D2_condition: Optional[bool] = None

    @property
    def holding(self) -> List[HypothesisEntry]:
        return [e for e in self.entries if e.holds]
