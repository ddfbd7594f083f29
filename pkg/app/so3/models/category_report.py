from typing import List, Optional

from pydantic import Field

from app.base.models.base_model import DomainModel

CASES = ("case1", "case2", "case2_extra", "case3")


class CategoryReport(DomainModel):
    """
    Sublevel set {R : -Tr(R M) <= -eta} of tau_M and the lower bound on its
    category in SO(3) that the critical values above eta give.

    An inapplicable report (spectrum of M^t M not strictly separated) has
    no eta and no bound.
    """

    applicable: bool = True
    case: Optional[str] = None
    eta: Optional[float] = None
    eta_overridden: bool = False
    det_sign: int = 0
    sqrt_mu: List[float] = Field(default_factory=list)
    critical_values: List[float] = Field(default_factory=list)
    values_above_eta: List[float] = Field(default_factory=list)
    cat_lower_bound: Optional[int] = None
    reason: Optional[str] = None
