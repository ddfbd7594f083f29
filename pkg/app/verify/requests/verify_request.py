from typing import List, Optional

from pydantic import Field, field_validator

from app.base.requests.base_request import BaseRequest


class VerifyRequest(BaseRequest):
    """Request model for verify"""

    only: Optional[List[str]] = Field(default=None, description="Run just these checks")
    list_only: bool = Field(default=False, description="Print the check names and exit")

    @field_validator("only", mode="before")
    @classmethod
    def validate_only(cls, v):
        if v is None:
            return None
        if isinstance(v, str):
            v = [v]
        names = [n.strip() for item in v for n in item.split(",") if n.strip()]
        return names or None
