from typing import List, Optional, Tuple

from pydantic import Field

from app.base.responses.base_response import BaseResponse
from app.harmonic.models.field_reports import FieldSample


class FieldResponse(BaseResponse):
    """Closed-form fields at one (p, x)"""

    p: List[float] = Field(..., description="Concentration point")
    x: List[float] = Field(..., description="Evaluation point")
    branch: str = Field(..., description="Formula used: image or regular")
    alpha: List[float] = Field(..., description="alpha_{p,i}(x), i = 1..4")
    grad_alpha: List[List[float]] = Field(..., description="d alpha_i / d x_j")
    h: List[List[float]] = Field(..., description="dx^a coefficients of h_{p,1..3}")
    dh_asd: List[List[float]] = Field(..., description="w_k coefficients of (dh_{p,l})^-")
    boundary_alpha: Optional[List[float]] = Field(default=None, description="(x-p)/|x-p|^4 when |x| = 1")
    boundary_h: Optional[List[List[float]]] = Field(default=None, description="Im[(x-p)^bar dx]/|x-p|^4 when |x| = 1")

    @classmethod
    def from_domain(cls, sample: FieldSample) -> "FieldResponse":
        trace = sample.boundary_trace
        return cls(
            p=sample.p.tolist(),
            x=sample.x.tolist(),
            branch=sample.branch,
            alpha=sample.alpha.tolist(),
            grad_alpha=sample.grad_alpha.tolist(),
            h=sample.h.tolist(),
            dh_asd=sample.dh_asd.tolist(),
            boundary_alpha=trace.alpha.tolist() if trace else None,
            boundary_h=trace.h.tolist() if trace else None,
        )

    def rows(self) -> List[Tuple[str, float]]:
        """(name, value) pairs for csv and text output"""
        out = [(f"alpha{i + 1}", v) for i, v in enumerate(self.alpha)]
        out += [(f"dalpha{i + 1}_dx{j + 1}", v) for i, row in enumerate(self.grad_alpha) for j, v in enumerate(row)]
        out += [(f"h{l + 1}_dx{a + 1}", v) for l, row in enumerate(self.h) for a, v in enumerate(row)]
        out += [(f"dh{l + 1}_w{k + 1}", v) for l, row in enumerate(self.dh_asd) for k, v in enumerate(row)]
        return out
