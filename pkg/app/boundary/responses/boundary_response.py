from typing import Any, Dict, List, Optional

from pydantic import Field

from app.base.responses.base_response import BaseResponse
from app.boundary.models.boundary_spec import BoundarySpec
from app.boundary.models.perturbation import PerturbationResult


class SynthResponse(BaseResponse):
    """Synthesized boundary data; loadable again as a boundary data file"""

    A: List[List[float]] = Field(..., description="Synthesis matrix")
    base: List[Any] = Field(..., description="Harmonic polynomial base")
    p0: List[float]
    target: List[List[float]]
    M: List[List[float]] = Field(..., description="M(B_0(A), p0) recomputed from the result")
    H: List[List[float]] = Field(..., description="H(p0)")

    @classmethod
    def from_domain(cls, spec: BoundarySpec, p0, target, m, h) -> "SynthResponse":
        document = spec.to_dict()
        return cls(
            A=document["A"],
            base=document["base"],
            p0=[float(v) for v in p0],
            target=[[float(v) for v in row] for row in target],
            M=m.tolist(),
            H=h.tolist(),
        )

    def rows(self) -> List[List[float]]:
        return [list(row) for row in self.A]


class PerturbResponse(BaseResponse):
    """Perturbed boundary data with the spectra before and after"""

    A: List[List[float]]
    base: List[Any]
    p0: List[float]
    mu: float
    mu_before: List[float]
    mu_after: List[float]
    gaps: List[float]
    regularized: bool
    strictly_separated: bool
    richardson: Optional[Dict[str, List[float]]] = None

    @classmethod
    def from_domain(cls, result: PerturbationResult, richardson=None) -> "PerturbResponse":
        document = result.spec.to_dict()
        extra = None
        if richardson is not None:
            r_full, r_half, extrapolated = richardson
            extra = {
                "slope_mu": r_full.tolist(),
                "slope_half_mu": r_half.tolist(),
                "extrapolated": extrapolated.tolist(),
            }
        return cls(
            A=document["A"],
            base=document["base"],
            p0=result.p0.tolist(),
            mu=result.mu,
            mu_before=result.spectrum_before.mu.tolist(),
            mu_after=result.spectrum_after.mu.tolist(),
            gaps=result.gaps,
            regularized=result.regularized,
            strictly_separated=result.strictly_separated,
            richardson=extra,
        )

    def rows(self) -> List[List[Any]]:
        out = [["mu_before", *self.mu_before], ["mu_after", *self.mu_after], ["gaps", *self.gaps]]
        if self.richardson:
            out.append(["richardson", *self.richardson["extrapolated"]])
        return out
