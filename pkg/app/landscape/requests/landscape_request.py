from typing import List, Optional, Tuple

from pydantic import Field, field_validator, model_validator

from app.base.requests.base_request import BaseRequest, parse_reals
from app.landscape.models.asymptotic_fit import QUANTITIES


class ScanRequest(BaseRequest):
    """Request model for landscape scan"""

    spec_file: Optional[str] = Field(default=None, description="Boundary data file; flat A = I when omitted")
    grid: int = Field(default=5, ge=2, le=25, description="Grid points per axis")
    d0: float = Field(default=0.1, gt=0.0, lt=1.0, description="Distance of the grid box corners from the sphere")


class ProbeRequest(BaseRequest):
    """Request model for landscape probe"""

    quantity: str = Field(..., description="One of F, gradF, M_entry, M_grad")
    direction: List[float] = Field(default_factory=lambda: [0.0, 0.0, 0.0, -1.0])
    d: List[float] = Field(default_factory=lambda: [0.2, 0.1, 0.05, 0.025])
    spec_file: Optional[str] = None
    entry: Tuple[int, int] = (0, 0)

    @field_validator("quantity")
    @classmethod
    def validate_quantity(cls, v):
        if v not in QUANTITIES:
            raise ValueError(f"must be one of {', '.join(QUANTITIES)}")
        return v

    @field_validator("direction", mode="before")
    @classmethod
    def validate_direction(cls, v):
        if isinstance(v, str):
            return parse_reals(v, 4, "direction")
        return v

    @field_validator("d", mode="before")
    @classmethod
    def validate_d(cls, v):
        if isinstance(v, str):
            parts = [t for t in v.replace(",", " ").split() if t]
            return parse_reals(v, len(parts), "d")
        return v

    @field_validator("entry", mode="before")
    @classmethod
    def validate_entry(cls, v):
        if isinstance(v, str):
            i, j = parse_reals(v, 2, "entry")
            v = (int(i), int(j))
        if any(not (1 <= int(k) <= 3) for k in v):
            raise ValueError("entry indices run from 1 to 3")
        # 1-based on the command line, 0-based inside
        return (int(v[0]) - 1, int(v[1]) - 1)

    @model_validator(mode="after")
    def validate_d_sequence(self):
        if len(self.d) < 2:
            raise ValueError("need at least two d values")
        if any(not (0.0 < x <= 0.5) for x in self.d) or any(b >= a for a, b in zip(self.d, self.d[1:])):
            raise ValueError("d values must be strictly decreasing in (0, 0.5]")
        return self
