from typing import List, Literal, Optional

from pydantic import Field, field_validator

from app.base.requests.base_request import BaseRequest, parse_reals


def _window(v):
    if isinstance(v, str):
        return parse_reals(v, 4, "window")
    return v


def _point(v):
    if isinstance(v, str):
        return parse_reals(v, 4, "p0")
    return v


class FindRequest(BaseRequest):
    """Request model for reduce find"""

    spec_file: str
    eps: float = Field(..., gt=0.0, lt=1.0)
    window: Optional[List[float]] = Field(default=None, description="d0, D1, D2, C0")
    strategy: Literal["minimize", "all_fibers"] = "minimize"
    starts: Optional[int] = Field(default=None, ge=1)
    grid: Optional[int] = Field(default=None, ge=2, le=9)

    @field_validator("window", mode="before")
    @classmethod
    def validate_window(cls, v):
        return _window(v)

    @field_validator("strategy", mode="before")
    @classmethod
    def validate_strategy(cls, v):
        return v.replace("-", "_") if isinstance(v, str) else v


class WindowRequest(BaseRequest):
    """Request model for reduce window"""

    spec_file: str
    c0: Optional[float] = Field(default=None, gt=0.0)
    d0: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    grid: Optional[int] = Field(default=None, ge=2, le=9)


class InvarianceRequest(BaseRequest):
    """Request model for reduce invariance"""

    spec_file: str
    eps: float = Field(..., gt=0.0, lt=1.0)
    window: Optional[List[float]] = None
    samples: int = Field(default=200, ge=1)

    @field_validator("window", mode="before")
    @classmethod
    def validate_window(cls, v):
        return _window(v)


class StildeRequest(BaseRequest):
    """Request model for reduce stilde"""

    spec_file: str
    p0: List[float]
    eps: float = Field(..., gt=0.0, lt=1.0)
    eta: Optional[float] = Field(default=None, gt=0.0)
    samples: int = Field(default=100, ge=1)

    @field_validator("p0", mode="before")
    @classmethod
    def validate_p0(cls, v):
        return _point(v)


class HypothesesRequest(BaseRequest):
    """Request model for reduce hypotheses"""

    spec_file: str
    p0: List[float]
    window: Optional[List[float]] = None

    @field_validator("p0", mode="before")
    @classmethod
    def validate_p0(cls, v):
        return _point(v)

    @field_validator("window", mode="before")
    @classmethod
    def validate_window(cls, v):
        return _window(v)
