from typing import List, Optional

from pydantic import Field, field_validator

from app.base.requests.base_request import BaseRequest, parse_matrix3, parse_reals


class SynthRequest(BaseRequest):
    """Request model for the synth command"""

    target: List[List[float]] = Field(..., description="Target interaction matrix")
    p0: List[float] = Field(..., description="Point where M is prescribed")
    base_file: Optional[str] = Field(default=None, description="Boundary data file supplying the base")

    @field_validator("target", mode="before")
    @classmethod
    def validate_target(cls, v):
        if isinstance(v, str):
            return parse_matrix3(v, "target")
        return v

    @field_validator("p0", mode="before")
    @classmethod
    def validate_p0(cls, v):
        if isinstance(v, str):
            return parse_reals(v, 4, "p0")
        return v
