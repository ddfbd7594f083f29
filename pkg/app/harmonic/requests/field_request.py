from typing import List

from pydantic import Field, field_validator

from app.base.requests.base_request import BaseRequest, parse_reals


class FieldRequest(BaseRequest):
    """Request model for the field command"""

    p: List[float] = Field(..., description="Concentration point, four reals")
    x: List[float] = Field(..., description="Evaluation point, four reals")
    fallback: bool = Field(default=True, description="Allow the small-|p| branch")

    @field_validator("p", "x", mode="before")
    @classmethod
    def validate_point(cls, v, info):
        if isinstance(v, str):
            return parse_reals(v, 4, info.field_name)
        if len(v) != 4:
            raise ValueError(f"{info.field_name} needs 4 values, got {len(v)}")
        return [float(t) for t in v]
