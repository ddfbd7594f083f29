from typing import List

import numpy as np

from app.base.models.base_model import DomainModel


class HessianCheck(DomainModel):
    """FD Hessian of t -> tau_M(exp(t P xi_i P^t) R0) against the diagonal formula"""

    analytic: np.ndarray
    fd: np.ndarray
    max_deviation: float
    max_cross: float
    step: float


class DescentStart(DomainModel):
    index: int
    converged: bool
    iterations: int
    residual: float
    value: float


class DescentCluster(DomainModel):
    R: np.ndarray
    value: float
    count: int
    residual: float


class DescentReport(DomainModel):
    """Multistart stationary points of tau_M clustered by geodesic distance"""

    n_starts: int
    starts: List[DescentStart]
    clusters: List[DescentCluster]
    enumerated_values: List[float]
    max_value_gap: float

    @property
    def converged_starts(self) -> int:
        return sum(1 for s in self.starts if s.converged)

    @property
    def cluster_values(self) -> List[float]:
        return [c.value for c in self.clusters]
