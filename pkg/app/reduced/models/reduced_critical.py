from typing import Optional

from app.base.models.base_model import DomainModel
from app.reduced.models.param_point import ParamPoint

CLASSIFICATIONS = ("min", "saddle", "degenerate")


class ReducedCritical(DomainModel):
    """
    A critical point of F_eps found by a search.

    branch names the G function whose fiber it sits on; lambda_residual is
    |lambda^2 - eps Gamma / F| relative to eps Gamma / F.
    """

    q: ParamPoint
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
    strategy: str = "minimize"
