from typing import List

from pydantic import Field, field_validator

from app.base.requests.base_request import BaseRequest, parse_reals


class PerturbRequest(BaseRequest):
    """Request model for the perturb command"""

    spec_file: str = Field(..., description="Boundary data file to perturb")
    p0: List[float] = Field(..., description="Point where the spectrum is separated")
    mu: float = Field(..., gt=0.0, description="Size of the separating shift")
    richardson: bool = Field(default=False, description="Also report Richardson slope estimates")

    @field_validator("p0", mode="before")
    @classmethod
    def validate_p0(cls, v):
        if isinstance(v, str):
            return parse_reals(v, 4, "p0")
        return v
