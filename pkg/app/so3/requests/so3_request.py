from typing import List, Optional

from pydantic import Field, field_validator

from app.base.requests.base_request import BaseRequest, load_matrix3


class MatrixRequest(BaseRequest):
    """Request model for so3 crit"""

    M: List[List[float]] = Field(..., description="3x3 matrix, row-major")
    check_hessian: bool = Field(default=False, description="Also compare against FD Hessians")

    @field_validator("M", mode="before")
    @classmethod
    def validate_m(cls, v):
        if isinstance(v, str):
            return load_matrix3(v, "M")
        return v


class DescentRequest(MatrixRequest):
    """Request model for so3 descent"""

    starts: int = Field(default=200, ge=1, le=100000)


class CategoryRequest(MatrixRequest):
    """Request model for so3 category"""

    eta: Optional[float] = Field(default=None, gt=0.0)
