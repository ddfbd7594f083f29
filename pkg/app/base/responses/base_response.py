import json
from typing import Any, Generic, TypeVar

from pydantic import BaseModel, ConfigDict, Field

from app.base.models.base_model import to_builtin

DataT = TypeVar("DataT")

SCHEMA_VERSION = "1.0"


class BaseResponse(BaseModel, Generic[DataT]):
    """Base class for all output documents."""

    model_config = ConfigDict(from_attributes=True, arbitrary_types_allowed=True)

    schema_version: str = Field(default=SCHEMA_VERSION, description="Output schema version")

    @classmethod
    def from_domain(cls, domain_model: Any) -> "BaseResponse":
        """Convert domain model to response schema."""
        return cls.model_validate(domain_model)

    def to_dict(self) -> dict:
        """Convert response to dictionary, excluding None values."""
        return to_builtin(self.model_dump(exclude_none=True))

    def to_json(self) -> str:
        """Serialize with sorted keys so identical runs give identical bytes."""
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)
